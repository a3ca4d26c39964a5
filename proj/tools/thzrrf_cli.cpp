// SPDX-License-Identifier: Apache-2.0
//
// thzrrf: simulate / seed / train / render / eval / sweep / cir.
// Exit codes: 0 success, 1 runtime failure, 2 usage or I/O error.
// THZRRF_THREADS overrides the worker thread count.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thzrrf/channel.hpp"
#include "thzrrf/config.hpp"
#include "thzrrf/dataset.hpp"
#include "thzrrf/heatmap.hpp"
#include "thzrrf/io.hpp"
#include "thzrrf/renderer.hpp"
#include "thzrrf/sweep.hpp"
#include "thzrrf/trainer.hpp"

namespace fs = std::filesystem;
using namespace thzrrf;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& s, std::size_t expect, const char* what)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v = 0.0;
        const auto r = std::from_chars(item.data(), item.data() + item.size(), v);
        if (r.ec != std::errc{} || r.ptr != item.data() + item.size())
            throw UsageError(std::string(what) + ": cannot parse '" + item + "'");
        out.push_back(v);
    }
    if (expect && out.size() != expect)
        throw UsageError(std::string(what) + ": expected " + std::to_string(expect) + " comma-separated values");
    return out;
}

SphericalGrid parse_grid(const std::string& s)
{
    const auto x = s.find('x');
    int r = 0, c = 0;
    if (x == std::string::npos || std::from_chars(s.data(), s.data() + x, r).ec != std::errc{} ||
        std::from_chars(s.data() + x + 1, s.data() + s.size(), c).ec != std::errc{} || r < 1 || c < 1)
        throw UsageError("grid: expected ROWSxCOLS, got '" + s + "'");
    return SphericalGrid(r, c);
}

std::string scene_digest(const fs::path& p) { return content_digest(read_file(p)); }

TrainSettings settings_from(const std::string& path)
{
    return path.empty() ? TrainSettings{} : load_train_settings(path);
}

void write_heatmaps(const fs::path& stem, const SpatialSpectrum& s, double db_floor)
{
    const int rows = s.grid.rows(), cols = s.grid.cols();
    const auto db = gain_db_image(s, db_floor);
    write_heatmap_png(stem.string() + "_gain_db.png", db, rows, cols, db_floor, 0.0);
    std::vector<double> tof_ns(s.tof.size()), az(s.aod_az.size());
    double tmax = 0.0;
    for (std::size_t i = 0; i < tof_ns.size(); ++i) {
        tof_ns[i] = s.tof[i] * 1e9;
        tmax = std::max(tmax, tof_ns[i]);
        az[i] = s.hit(i) ? s.aod_az[i] : -kPi;
    }
    write_heatmap_png(stem.string() + "_tof_ns.png", tof_ns, rows, cols, 0.0, tmax > 0.0 ? tmax : 1.0);
    write_heatmap_png(stem.string() + "_aod_az.png", az, rows, cols, -kPi, kPi);
}

// Pairs the *.spec files of two directories by file name.
std::vector<std::pair<SpatialSpectrum, SpatialSpectrum>> paired_spectra(const fs::path& pred, const fs::path& truth)
{
    std::vector<std::pair<SpatialSpectrum, SpatialSpectrum>> out;
    if (!fs::is_directory(pred))
        throw IoError("cannot open directory '" + pred.string() + "'");
    if (!fs::is_directory(truth))
        throw IoError("cannot open directory '" + truth.string() + "'");
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(truth))
        if (e.path().extension() == ".spec")
            names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    if (names.empty())
        throw IoError("no .spec files in '" + truth.string() + "'");
    for (const auto& n : names)
        out.emplace_back(load_spectrum(pred / n), load_spectrum(truth / n));
    return out;
}

int run_simulate(const std::string& scene_path, std::size_t n_rx, const std::string& grid, std::uint64_t seed,
                 const fs::path& out)
{
    const Scene scene = load_scene(scene_path);
    const Dataset data = generate_dataset(scene, n_rx, parse_grid(grid), seed);
    save_dataset(out, data, scene.carrier_frequency, scene_digest(scene_path));
    std::printf("wrote %zu samples to %s\n", data.size(), out.string().c_str());
    return 0;
}

int run_seed(const std::string& scene_path, const std::string& config, const fs::path& out)
{
    const Scene scene = load_scene(scene_path);
    const GaussianField field = seed_from_scene(scene, settings_from(config).seeding);
    save_checkpoint(out, field);
    std::printf("seeded %zu primitives -> %s\n", field.size(), out.string().c_str());
    return 0;
}

int run_train(const fs::path& init, const fs::path& data_dir, const std::string& config, const std::string& mode,
              const fs::path& out)
{
    TrainSettings s = settings_from(config);
    if (mode == "legacy")
        s.train.mode = RenderMode::legacy;
    else if (mode == "full_path")
        s.train.mode = RenderMode::full_path;
    s.train.checkpoint_path = out.string();
    const Checkpoint ck = load_checkpoint(init);
    const Dataset data = load_dataset(data_dir);
    const TrainResult r = train(ck.field, data, s.train);
    save_checkpoint(out, r.field, r.calibration ? &*r.calibration : nullptr);
    std::printf("final loss %.6g  train PSNR %.3f dB  SSIM %.4f  (%.1f s)\n",
                r.report.loss_trace.empty() ? 0.0 : r.report.loss_trace.back(), r.report.train_psnr,
                r.report.train_ssim, r.report.seconds);
    return 0;
}

int run_render(const fs::path& ckpt, const std::string& rx, const std::string& orientation, const std::string& grid,
               const std::string& data_dir, long sample, const fs::path& out, double db_floor)
{
    const Checkpoint ck = load_checkpoint(ckpt);
    RenderOptions opt;
    if (ck.calibration)
        opt = render_options(RenderMode::legacy, &*ck.calibration);

    std::vector<std::pair<std::string, Sample>> poses;
    if (!data_dir.empty()) {
        DatasetManifest m;
        const Dataset data = load_dataset(data_dir, &m);
        if (sample >= 0) {
            if (static_cast<std::size_t>(sample) >= data.size())
                throw UsageError("render: sample index out of range");
            poses.emplace_back(m.spectrum_files[static_cast<std::size_t>(sample)],
                               data[static_cast<std::size_t>(sample)]);
        } else {
            for (std::size_t i = 0; i < data.size(); ++i)
                poses.emplace_back(m.spectrum_files[i], data[i]);
        }
    } else {
        if (rx.empty())
            throw UsageError("render: give --rx or --data");
        const auto p = parse_list(rx, 3, "--rx");
        Sample s;
        s.rx_position = {p[0], p[1], p[2]};
        if (!orientation.empty()) {
            const auto q = parse_list(orientation, 4, "--orientation");
            s.rx_orientation = RotationQ(q[0], q[1], q[2], q[3]);
        }
        s.spectrum.grid = parse_grid(grid);
        poses.emplace_back("render.spec", s);
    }

    fs::create_directories(out);
    for (const auto& [name, s] : poses) {
        const SpatialSpectrum spec = render_spectrum(ck.field, s.rx_position, s.rx_orientation, s.spectrum.grid, opt);
        save_spectrum(out / name, spec);
        write_heatmaps(out / fs::path(name).stem(), spec, db_floor);
    }
    std::printf("rendered %zu spectra to %s\n", poses.size(), out.string().c_str());
    return 0;
}

int run_eval(const fs::path& pred, const fs::path& truth, double db_floor)
{
    std::vector<SpatialSpectrum> p, t;
    for (auto& [a, b] : paired_spectra(pred, truth)) {
        p.push_back(std::move(a));
        t.push_back(std::move(b));
    }
    const MetricReport r = compare_spectra(p, t, db_floor);
    std::printf("samples %zu\npsnr_db %.4f\nssim %.5f\nbeam_error_deg %.3f\nbeam_within_one_bin %.3f\n", p.size(),
                r.psnr, r.ssim, r.beam_error_deg, r.beam_within_one_bin);
    return 0;
}

int run_sweep(const std::string& scene_path, const std::string& sizes, std::size_t test, std::size_t pool,
              const std::string& grid, std::uint64_t seed, const std::string& config, const std::string& out)
{
    const Scene scene = load_scene(scene_path);
    const TrainSettings s = settings_from(config);
    SweepConfig cfg;
    for (double v : parse_list(sizes, 0, "--sizes")) {
        if (v < 1 || v != static_cast<double>(static_cast<std::size_t>(v)))
            throw UsageError("--sizes: expected positive integers");
        cfg.sizes.push_back(static_cast<std::size_t>(v));
    }
    cfg.test_size = test;
    cfg.train = s.train;
    cfg.seeding = s.seeding;
    cfg.split_seed = seed;
    const std::size_t need = test + *std::max_element(cfg.sizes.begin(), cfg.sizes.end());
    const Dataset data = generate_dataset(scene, pool ? pool : need, parse_grid(grid), seed);
    const auto rows = sweep(scene, data, cfg);
    const std::string table = sweep_table(rows);
    if (out.empty())
        std::fputs(table.c_str(), stdout);
    else
        write_file_atomic(out, table);
    return 0;
}

int run_cir(const fs::path& data_dir, std::size_t sample, int multiplier, const std::string& out, bool binary)
{
    const Dataset data = load_dataset(data_dir);
    if (sample >= data.size())
        throw UsageError("cir: sample index out of range");
    const Cir cir = mpcs_to_cir(data[sample].mpcs, channelization(multiplier));
    const std::string bytes = binary ? cir_to_binary(cir) : cir_to_text(cir);
    if (out.empty())
        std::fwrite(bytes.data(), 1, bytes.size(), stdout);
    else
        write_file_atomic(out, bytes);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"THz radio radiance field toolkit"};
    app.require_subcommand(1);

    std::string scene, grid = "32x64", out, config, mode, rx, orientation, data_dir, pred, truth, sizes = "10,20,50,100";
    std::size_t n_rx = 800, test = 20, pool = 0, sample_u = 0;
    long sample = -1;
    std::uint64_t seed = 1;
    int multiplier = 1;
    double db_floor = kDefaultDbFloor;
    bool binary = false;
    fs::path init, ckpt;

    auto* sim = app.add_subcommand("simulate", "Trace a scene at random receiver positions into a dataset");
    sim->add_option("--scene", scene, "Scene YAML file")->required();
    sim->add_option("--n-rx", n_rx, "Number of receiver positions")->check(CLI::PositiveNumber);
    sim->add_option("--grid", grid, "Spectrum grid ROWSxCOLS")->capture_default_str();
    sim->add_option("--seed", seed, "Position sampling seed")->capture_default_str();
    sim->add_option("--out", out, "Output dataset directory")->required();

    auto* sd = app.add_subcommand("seed", "Seed a Gaussian field from scene facets");
    sd->add_option("--scene", scene, "Scene YAML file")->required();
    sd->add_option("--config", config, "Training YAML (its seeding section is used)");
    sd->add_option("--out", out, "Output checkpoint")->required();

    auto* tr = app.add_subcommand("train", "Fit SH gains to a dataset");
    tr->add_option("--init", init, "Seeded checkpoint")->required();
    tr->add_option("--data", data_dir, "Dataset directory")->required();
    tr->add_option("--config", config, "Training YAML");
    tr->add_option("--mode", mode, "Override rendering variant")->check(CLI::IsMember({"full_path", "legacy"}));
    tr->add_option("--out", out, "Output checkpoint")->required();

    auto* rd = app.add_subcommand("render", "Render spectra and PNG heatmaps from a checkpoint");
    rd->add_option("--checkpoint", ckpt, "Trained checkpoint")->required();
    rd->add_option("--rx", rx, "Receiver position x,y,z");
    rd->add_option("--orientation", orientation, "Receiver orientation quaternion w,x,y,z");
    rd->add_option("--grid", grid, "Spectrum grid ROWSxCOLS (with --rx)")->capture_default_str();
    rd->add_option("--data", data_dir, "Render the poses of this dataset instead");
    rd->add_option("--sample", sample, "Only this sample index of --data");
    rd->add_option("--db-floor", db_floor, "Heatmap dB floor")->capture_default_str();
    rd->add_option("--out", out, "Output directory")->required();

    auto* ev = app.add_subcommand("eval", "PSNR / SSIM / beam accuracy between two spectrum directories");
    ev->add_option("--pred", pred, "Predicted spectra directory")->required();
    ev->add_option("--truth", truth, "Ground-truth spectra directory")->required();
    ev->add_option("--db-floor", db_floor, "dB floor of the metric range")->capture_default_str();

    auto* sw = app.add_subcommand("sweep", "Train both variants over several training-set sizes");
    sw->add_option("--scene", scene, "Scene YAML file")->required();
    sw->add_option("--sizes", sizes, "Comma-separated training sizes")->capture_default_str();
    sw->add_option("--test", test, "Held-out sample count")->capture_default_str();
    sw->add_option("--pool", pool, "Simulated pool size (default: test + max size)");
    sw->add_option("--grid", grid, "Spectrum grid ROWSxCOLS")->capture_default_str();
    sw->add_option("--seed", seed, "Simulation and split seed")->capture_default_str();
    sw->add_option("--config", config, "Training YAML");
    sw->add_option("--out", out, "Output CSV (default: stdout)");

    auto* ci = app.add_subcommand("cir", "Channel impulse response of one dataset sample");
    ci->add_option("--data", data_dir, "Dataset directory")->required();
    ci->add_option("--sample", sample_u, "Sample index")->capture_default_str();
    ci->add_option("--multiplier", multiplier, "Bandwidth multiple of 2.16 GHz (1,2,4,8,16,32)")->capture_default_str();
    ci->add_flag("--binary", binary, "Write THZCIR01 binary instead of CSV");
    ci->add_option("--out", out, "Output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*sim)
            return run_simulate(scene, n_rx, grid, seed, out);
        if (*sd)
            return run_seed(scene, config, out);
        if (*tr)
            return run_train(init, data_dir, config, mode, out);
        if (*rd)
            return run_render(ckpt, rx, orientation, grid, data_dir, sample, out, db_floor);
        if (*ev)
            return run_eval(pred, truth, db_floor);
        if (*sw)
            return run_sweep(scene, sizes, test, pool, grid, seed, config, out);
        if (*ci)
            return run_cir(data_dir, sample_u, multiplier, out, binary);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const fs::filesystem_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
