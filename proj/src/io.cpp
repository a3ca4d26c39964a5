// SPDX-License-Identifier: Apache-2.0

#include "thzrrf/io.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace thzrrf {

namespace {

constexpr char kSpectrumMagic[] = "THZSPEC1";
constexpr char kCheckpointMagic[] = "THZRRF01";
constexpr char kCirMagic[] = "THZCIR01";
constexpr int kSpectrumChannels = 4;

class Writer {
public:
    void magic(const char* m) { out_.append(m, 8); }
    void u32(std::uint32_t v)
    {
        for (int i = 0; i < 4; ++i)
            out_.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
    }
    void u64(std::uint64_t v)
    {
        for (int i = 0; i < 8; ++i)
            out_.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
    }
    void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
    void f32(double v) { u32(std::bit_cast<std::uint32_t>(static_cast<float>(v))); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    std::string take() { return std::move(out_); }

private:
    std::string out_;
};

class Reader {
public:
    Reader(const std::string& bytes, const char* what) : bytes_(bytes), what_(what) {}
    void magic(const char* m)
    {
        need(8);
        if (std::memcmp(bytes_.data() + pos_, m, 8) != 0)
            throw IoError(std::string(what_) + ": bad magic or unsupported version (expected " + std::string(m, 8) +
                          ")");
        pos_ += 8;
    }
    std::uint32_t u32()
    {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        pos_ += 4;
        return v;
    }
    std::uint64_t u64()
    {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        pos_ += 8;
        return v;
    }
    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    double f32() { return static_cast<double>(std::bit_cast<float>(u32())); }
    double f64() { return std::bit_cast<double>(u64()); }
    bool done() const { return pos_ == bytes_.size(); }
    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    void need(std::size_t n) const
    {
        if (bytes_.size() - pos_ < n)
            throw IoError(std::string(what_) + ": truncated file");
    }
    const std::string& bytes_;
    const char* what_;
    std::size_t pos_ = 0;
};

std::string fmt_double(double v)
{
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

double parse_double(const std::string& s)
{
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw IoError("mpc csv: cannot parse number '" + s + "'");
    return v;
}

std::string sample_stem(std::size_t i)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "sample_%05zu", i);
    return buf;
}

} // namespace

void write_file_atomic(const fs::path& path, const std::string& bytes)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open '" + tmp.string() + "' for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out)
            throw IoError("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string content_digest(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string encode_spectrum(const SpatialSpectrum& s)
{
    Writer w;
    w.magic(kSpectrumMagic);
    w.i32(s.grid.rows());
    w.i32(s.grid.cols());
    w.i32(kSpectrumChannels);
    w.f64(s.rx_position.x);
    w.f64(s.rx_position.y);
    w.f64(s.rx_position.z);
    w.f64(s.rx_orientation.w());
    w.f64(s.rx_orientation.x());
    w.f64(s.rx_orientation.y());
    w.f64(s.rx_orientation.z());
    for (const auto* plane : {&s.gain, &s.tof, &s.aod_az, &s.aod_el})
        for (double v : *plane)
            w.f32(v);
    return w.take();
}

SpatialSpectrum decode_spectrum(const std::string& bytes)
{
    Reader r(bytes, "spectrum");
    r.magic(kSpectrumMagic);
    const int rows = r.i32(), cols = r.i32(), channels = r.i32();
    if (rows < 1 || cols < 1 || channels != kSpectrumChannels)
        throw IoError("spectrum: invalid header");
    Vec3 rx;
    rx.x = r.f64();
    rx.y = r.f64();
    rx.z = r.f64();
    const double qw = r.f64(), qx = r.f64(), qy = r.f64(), qz = r.f64();
    SpatialSpectrum s(SphericalGrid(rows, cols), rx, RotationQ::from_raw(qw, qx, qy, qz));
    if (r.remaining() != 4 * static_cast<std::size_t>(kSpectrumChannels) * s.size())
        throw IoError("spectrum: plane size does not match header");
    for (auto* plane : {&s.gain, &s.tof, &s.aod_az, &s.aod_el})
        for (double& v : *plane)
            v = r.f32();
    return s;
}

void save_spectrum(const fs::path& path, const SpatialSpectrum& s) { write_file_atomic(path, encode_spectrum(s)); }
SpatialSpectrum load_spectrum(const fs::path& path) { return decode_spectrum(read_file(path)); }

std::string encode_checkpoint(const GaussianField& field, const LegacyCalibration* calibration)
{
    field.validate();
    if (calibration && calibration->depth.size() != field.size())
        throw std::invalid_argument("checkpoint: calibration size does not match primitive count");
    Writer w;
    w.magic(kCheckpointMagic);
    w.u64(field.size());
    w.u32(static_cast<std::uint32_t>(field.sh_degree));
    w.u32(calibration ? 1u : 0u);
    w.f64(field.carrier_frequency);
    w.f64(field.tx_position.x);
    w.f64(field.tx_position.y);
    w.f64(field.tx_position.z);
    for (const auto& g : field.primitives) {
        w.f32(g.center.x);
        w.f32(g.center.y);
        w.f32(g.center.z);
    }
    for (const auto& g : field.primitives) {
        w.f32(g.scale.x);
        w.f32(g.scale.y);
        w.f32(g.scale.z);
    }
    for (const auto& g : field.primitives) {
        w.f32(g.rotation.w());
        w.f32(g.rotation.x());
        w.f32(g.rotation.y());
        w.f32(g.rotation.z());
    }
    for (const auto& g : field.primitives)
        w.f32(g.density);
    for (const auto& g : field.primitives)
        for (double c : g.gain_sh)
            w.f32(c);
    if (calibration)
        for (double d : calibration->depth)
            w.f32(d);
    return w.take();
}

Checkpoint decode_checkpoint(const std::string& bytes)
{
    Reader r(bytes, "checkpoint");
    r.magic(kCheckpointMagic);
    const std::uint64_t n = r.u64();
    const auto degree = static_cast<int>(r.u32());
    const std::uint32_t flags = r.u32();
    if (degree < 0 || degree > kMaxShDegree)
        throw IoError("checkpoint: unsupported SH degree");
    if (flags > 1u)
        throw IoError("checkpoint: unknown flags");
    const auto k = static_cast<std::uint64_t>(sh_count(degree));
    const std::uint64_t floats = n * (3 + 3 + 4 + 1 + k + (flags & 1u ? 1 : 0));
    if (n > bytes.size() || r.remaining() != 32 + 4 * floats)
        throw IoError("checkpoint: array sizes do not match header");

    Checkpoint cp;
    GaussianField& f = cp.field;
    f.sh_degree = degree;
    f.carrier_frequency = r.f64();
    f.tx_position.x = r.f64();
    f.tx_position.y = r.f64();
    f.tx_position.z = r.f64();
    f.primitives.resize(n);
    for (auto& g : f.primitives)
        g.center = {r.f32(), r.f32(), r.f32()};
    for (auto& g : f.primitives)
        g.scale = {r.f32(), r.f32(), r.f32()};
    for (auto& g : f.primitives) {
        const double w = r.f32(), x = r.f32(), y = r.f32(), z = r.f32();
        g.rotation = RotationQ::from_raw(w, x, y, z);
    }
    for (auto& g : f.primitives)
        g.density = r.f32();
    for (auto& g : f.primitives) {
        g.gain_sh.resize(k);
        for (double& c : g.gain_sh)
            c = r.f32();
    }
    if (flags & 1u) {
        LegacyCalibration cal;
        cal.depth.resize(n);
        for (double& d : cal.depth)
            d = r.f32();
        cp.calibration = std::move(cal);
    }
    f.validate();
    return cp;
}

void save_checkpoint(const fs::path& path, const GaussianField& field, const LegacyCalibration* calibration)
{
    write_file_atomic(path, encode_checkpoint(field, calibration));
}

Checkpoint load_checkpoint(const fs::path& path) { return decode_checkpoint(read_file(path)); }

std::string encode_mpcs(const std::vector<Mpc>& mpcs)
{
    std::string out = "amplitude,phase,delay,aoa_x,aoa_y,aoa_z,aod_x,aod_y,aod_z,facet,bounce_x,bounce_y,bounce_z\n";
    for (const Mpc& m : mpcs) {
        out += fmt_double(m.amplitude) + ',' + fmt_double(m.phase) + ',' + fmt_double(m.delay);
        for (double v : {m.aoa.x(), m.aoa.y(), m.aoa.z(), m.aod.x(), m.aod.y(), m.aod.z()})
            out += ',' + fmt_double(v);
        out += ',' + std::to_string(m.facet);
        if (m.bounce_point)
            out += ',' + fmt_double(m.bounce_point->x) + ',' + fmt_double(m.bounce_point->y) + ',' +
                   fmt_double(m.bounce_point->z);
        else
            out += ",,,";
        out += '\n';
    }
    return out;
}

std::vector<Mpc> decode_mpcs(const std::string& text)
{
    std::vector<Mpc> out;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("amplitude,", 0) != 0)
        throw IoError("mpc csv: missing header");
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> cols;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            cols.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
        if (cols.size() != 13)
            throw IoError("mpc csv: expected 13 columns");
        Mpc m;
        m.amplitude = parse_double(cols[0]);
        m.phase = parse_double(cols[1]);
        m.delay = parse_double(cols[2]);
        m.aoa = UnitDir::from_raw({parse_double(cols[3]), parse_double(cols[4]), parse_double(cols[5])});
        m.aod = UnitDir::from_raw({parse_double(cols[6]), parse_double(cols[7]), parse_double(cols[8])});
        m.facet = std::stoi(cols[9]);
        if (!cols[10].empty())
            m.bounce_point = Vec3{parse_double(cols[10]), parse_double(cols[11]), parse_double(cols[12])};
        out.push_back(m);
    }
    return out;
}

void save_dataset(const fs::path& dir, const Dataset& data, double carrier_frequency, const std::string& scene_hash)
{
    fs::create_directories(dir);
    nlohmann::ordered_json j;
    j["format_version"] = 1;
    const SphericalGrid grid = data.empty() ? SphericalGrid(1, 1) : data.front().spectrum.grid;
    j["grid"] = {{"rows", grid.rows()}, {"cols", grid.cols()}};
    j["channels"] = {"gain", "tof", "aod_az", "aod_el"};
    j["sample_count"] = data.size();
    j["carrier_frequency"] = carrier_frequency;
    j["scene_hash"] = scene_hash;
    j["samples"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < data.size(); ++i) {
        const std::string stem = sample_stem(i);
        write_file_atomic(dir / (stem + ".spec"), encode_spectrum(data[i].spectrum));
        write_file_atomic(dir / (stem + ".mpc.csv"), encode_mpcs(data[i].mpcs));
        j["samples"].push_back({{"spectrum", stem + ".spec"}, {"mpcs", stem + ".mpc.csv"}});
    }
    write_file_atomic(dir / "manifest.json", j.dump(2) + "\n");
}

DatasetManifest load_manifest(const fs::path& dir)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(dir / "manifest.json"));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("manifest: " + std::string(e.what()));
    }
    DatasetManifest m;
    try {
        m.format_version = j.at("format_version").get<int>();
        if (m.format_version != 1)
            throw IoError("manifest: unsupported format_version");
        m.rows = j.at("grid").at("rows").get<int>();
        m.cols = j.at("grid").at("cols").get<int>();
        m.channels = j.at("channels").get<std::vector<std::string>>();
        m.carrier_frequency = j.at("carrier_frequency").get<double>();
        m.scene_hash = j.at("scene_hash").get<std::string>();
        const auto count = j.at("sample_count").get<std::size_t>();
        for (const auto& s : j.at("samples")) {
            m.spectrum_files.push_back(s.at("spectrum").get<std::string>());
            m.mpc_files.push_back(s.at("mpcs").get<std::string>());
        }
        if (count != m.spectrum_files.size())
            throw IoError("manifest: sample_count does not match the listed samples");
    } catch (const nlohmann::json::exception& e) {
        throw IoError("manifest: " + std::string(e.what()));
    }
    return m;
}

Dataset load_dataset(const fs::path& dir, DatasetManifest* manifest)
{
    const DatasetManifest m = load_manifest(dir);
    Dataset data(m.spectrum_files.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        Sample& s = data[i];
        s.spectrum = load_spectrum(dir / m.spectrum_files[i]);
        if (s.spectrum.grid.rows() != m.rows || s.spectrum.grid.cols() != m.cols)
            throw IoError("dataset: sample grid does not match manifest");
        s.rx_position = s.spectrum.rx_position;
        s.rx_orientation = s.spectrum.rx_orientation;
        s.mpcs = decode_mpcs(read_file(dir / m.mpc_files[i]));
    }
    if (manifest)
        *manifest = m;
    return data;
}

std::string cir_to_text(const Cir& cir)
{
    std::string out = "delay_s,real,imag\n";
    for (std::size_t i = 0; i < cir.taps.size(); ++i)
        out += fmt_double(cir.tap_delay(i)) + ',' + fmt_double(cir.taps[i].real()) + ',' +
               fmt_double(cir.taps[i].imag()) + '\n';
    return out;
}

std::string cir_to_binary(const Cir& cir)
{
    Writer w;
    w.magic(kCirMagic);
    w.u64(cir.taps.size());
    w.f64(cir.t0);
    w.f64(cir.ts);
    for (std::size_t i = 0; i < cir.taps.size(); ++i) {
        w.f32(cir.tap_delay(i));
        w.f32(cir.taps[i].real());
        w.f32(cir.taps[i].imag());
    }
    return w.take();
}

} // namespace thzrrf
