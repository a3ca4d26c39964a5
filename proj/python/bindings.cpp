// SPDX-License-Identifier: Apache-2.0

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "thzrrf/channel.hpp"
#include "thzrrf/config.hpp"
#include "thzrrf/io.hpp"
#include "thzrrf/sweep.hpp"
#include "thzrrf/trainer.hpp"

namespace py = pybind11;
using namespace thzrrf;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Vec3 to_vec(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }
std::array<double, 3> from_vec(const Vec3& v) { return {v.x, v.y, v.z}; }

RotationQ to_quat(const std::array<double, 4>& q) { return RotationQ(q[0], q[1], q[2], q[3]); }
std::array<double, 4> from_quat(const RotationQ& q) { return {q.w(), q.x(), q.y(), q.z()}; }

Array plane(const SpatialSpectrum& s, const std::vector<double>& v)
{
    Array a({s.grid.rows(), s.grid.cols()});
    std::copy(v.begin(), v.end(), a.mutable_data());
    return a;
}

void set_plane(SpatialSpectrum& s, std::vector<double>& v, const Array& a)
{
    if (a.ndim() != 2 || a.shape(0) != s.grid.rows() || a.shape(1) != s.grid.cols())
        throw py::value_error("plane shape does not match the spectrum grid");
    std::copy(a.data(), a.data() + a.size(), v.begin());
}

std::span<const double> flat(const Array& a) { return {a.data(), static_cast<std::size_t>(a.size())}; }

RenderMode parse_mode(const std::string& m)
{
    if (m == "full_path")
        return RenderMode::full_path;
    if (m == "legacy")
        return RenderMode::legacy;
    throw py::value_error("mode must be 'full_path' or 'legacy'");
}

py::dict metric_dict(const MetricReport& r)
{
    py::dict d;
    d["psnr"] = r.psnr;
    d["ssim"] = r.ssim;
    d["psnr_per_sample"] = r.psnr_per_sample;
    d["ssim_per_sample"] = r.ssim_per_sample;
    d["beam_error_deg"] = r.beam_error_deg;
    d["beam_within_one_bin"] = r.beam_within_one_bin;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.attr("__version__") = "0.1.0";
    m.attr("SPEED_OF_LIGHT") = kSpeedOfLight;
    m.attr("DEFAULT_DB_FLOOR") = kDefaultDbFloor;

    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<Scene>(m, "Scene")
        .def_property_readonly("tx_position", [](const Scene& s) { return from_vec(s.tx_position); })
        .def_readonly("carrier_frequency", &Scene::carrier_frequency)
        .def_readonly("facet_sample_density", &Scene::facet_sample_density)
        .def_property_readonly("facet_count", [](const Scene& s) { return s.facets.size(); })
        .def_property_readonly("wavelength", &Scene::wavelength);
    m.def("load_scene", &load_scene, py::arg("path"));
    m.def("parse_scene", &parse_scene, py::arg("text"));

    py::class_<Mpc>(m, "Mpc")
        .def_readonly("amplitude", &Mpc::amplitude)
        .def_readonly("phase", &Mpc::phase)
        .def_readonly("delay", &Mpc::delay)
        .def_readonly("facet", &Mpc::facet)
        .def_property_readonly("aoa", [](const Mpc& p) { return from_vec(p.aoa.vec()); })
        .def_property_readonly("aod", [](const Mpc& p) { return from_vec(p.aod.vec()); })
        .def_property_readonly("bounce_point", [](const Mpc& p) -> std::optional<std::array<double, 3>> {
            if (!p.bounce_point)
                return std::nullopt;
            return from_vec(*p.bounce_point);
        })
        .def("is_los", &Mpc::is_los);
    m.def("trace", [](const Scene& s, const std::array<double, 3>& rx) { return trace(s, to_vec(rx)); },
          py::arg("scene"), py::arg("rx"));

    py::class_<SpatialSpectrum>(m, "Spectrum")
        .def(py::init([](int rows, int cols) { return SpatialSpectrum(SphericalGrid(rows, cols)); }), py::arg("rows"),
             py::arg("cols"))
        .def_property_readonly("rows", [](const SpatialSpectrum& s) { return s.grid.rows(); })
        .def_property_readonly("cols", [](const SpatialSpectrum& s) { return s.grid.cols(); })
        .def_property_readonly("rx_position", [](const SpatialSpectrum& s) { return from_vec(s.rx_position); })
        .def_property_readonly("rx_orientation", [](const SpatialSpectrum& s) { return from_quat(s.rx_orientation); })
        .def_property(
            "gain", [](const SpatialSpectrum& s) { return plane(s, s.gain); },
            [](SpatialSpectrum& s, const Array& a) { set_plane(s, s.gain, a); })
        .def_property(
            "tof", [](const SpatialSpectrum& s) { return plane(s, s.tof); },
            [](SpatialSpectrum& s, const Array& a) { set_plane(s, s.tof, a); })
        .def_property_readonly("aod_az", [](const SpatialSpectrum& s) { return plane(s, s.aod_az); })
        .def_property_readonly("aod_el", [](const SpatialSpectrum& s) { return plane(s, s.aod_el); })
        .def(
            "gain_db",
            [](const SpatialSpectrum& s, double floor) { return plane(s, gain_db_image(s, floor)); },
            py::arg("floor") = kDefaultDbFloor)
        .def("save", [](const SpatialSpectrum& s, const fs::path& p) { save_spectrum(p, s); })
        .def_static("load", &load_spectrum);

    py::class_<Sample>(m, "Sample")
        .def_property_readonly("rx_position", [](const Sample& s) { return from_vec(s.rx_position); })
        .def_readonly("mpcs", &Sample::mpcs)
        .def_readonly("spectrum", &Sample::spectrum);
    m.def(
        "generate_dataset",
        [](const Scene& s, std::size_t n, int rows, int cols, std::uint64_t seed) {
            py::gil_scoped_release nogil;
            return generate_dataset(s, n, SphericalGrid(rows, cols), seed);
        },
        py::arg("scene"), py::arg("n_rx"), py::arg("rows") = 16, py::arg("cols") = 32, py::arg("seed") = 1);
    m.def("load_dataset", [](const fs::path& p) { return load_dataset(p); }, py::arg("path"));

    py::class_<SeedParams>(m, "SeedParams")
        .def(py::init<>())
        .def_readwrite("spacing", &SeedParams::spacing)
        .def_readwrite("init_density", &SeedParams::init_density)
        .def_readwrite("init_scale", &SeedParams::init_scale)
        .def_readwrite("normal_scale_ratio", &SeedParams::normal_scale_ratio)
        .def_readwrite("init_gain", &SeedParams::init_gain)
        .def_readwrite("sh_degree", &SeedParams::sh_degree);

    py::class_<LegacyCalibration>(m, "LegacyCalibration").def_readonly("depth", &LegacyCalibration::depth);

    py::class_<GaussianField>(m, "GaussianField")
        .def_property_readonly("size", &GaussianField::size)
        .def_readonly("sh_degree", &GaussianField::sh_degree)
        .def_property_readonly("tx_position", [](const GaussianField& f) { return from_vec(f.tx_position); })
        .def_property_readonly("centers",
                               [](const GaussianField& f) {
                                   Array a({static_cast<py::ssize_t>(f.size()), py::ssize_t{3}});
                                   auto r = a.mutable_unchecked<2>();
                                   for (std::size_t i = 0; i < f.size(); ++i)
                                       for (int k = 0; k < 3; ++k)
                                           r(static_cast<py::ssize_t>(i), k) = f.primitives[i].center[k];
                                   return a;
                               })
        .def_property_readonly("gain_sh",
                               [](const GaussianField& f) {
                                   const auto k = static_cast<py::ssize_t>(f.coeff_count());
                                   Array a({static_cast<py::ssize_t>(f.size()), k});
                                   double* out = a.mutable_data();
                                   for (const auto& g : f.primitives)
                                       out = std::copy(g.gain_sh.begin(), g.gain_sh.end(), out);
                                   return a;
                               })
        .def(
            "save",
            [](const GaussianField& f, const fs::path& p, const LegacyCalibration* cal) { save_checkpoint(p, f, cal); },
            py::arg("path"), py::arg("calibration") = nullptr);
    m.def("seed_from_scene", &seed_from_scene, py::arg("scene"), py::arg("params") = SeedParams{});
    m.def(
        "load_checkpoint",
        [](const fs::path& p) {
            Checkpoint c = load_checkpoint(p);
            return py::make_tuple(std::move(c.field), std::move(c.calibration));
        },
        py::arg("path"));

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("learning_rate", &TrainConfig::learning_rate)
        .def_readwrite("epochs", &TrainConfig::epochs)
        .def_readwrite("db_floor", &TrainConfig::db_floor)
        .def_readwrite("seed", &TrainConfig::rng_seed)
        .def_readwrite("batch_size", &TrainConfig::batch_size)
        .def_readwrite("sh_decay", &TrainConfig::sh_decay)
        .def_property(
            "mode", [](const TrainConfig& c) { return std::string(variant_name(c.mode)); },
            [](TrainConfig& c, const std::string& s) { c.mode = parse_mode(s); })
        .def_property(
            "loss", [](const TrainConfig& c) { return c.loss == LossKind::l2_db ? "l2_db" : "l1_db"; },
            [](TrainConfig& c, const std::string& s) {
                if (s != "l2_db" && s != "l1_db")
                    throw py::value_error("loss must be 'l2_db' or 'l1_db'");
                c.loss = s == "l2_db" ? LossKind::l2_db : LossKind::l1_db;
            });
    m.def(
        "load_train_settings",
        [](const fs::path& p) {
            TrainSettings t = load_train_settings(p);
            return py::make_tuple(t.train, t.seeding);
        },
        py::arg("path"));

    py::class_<TrainResult>(m, "TrainResult")
        .def_readonly("field", &TrainResult::field)
        .def_readonly("calibration", &TrainResult::calibration)
        .def_property_readonly("loss_trace", [](const TrainResult& r) { return r.report.loss_trace; })
        .def_property_readonly("train_psnr", [](const TrainResult& r) { return r.report.train_psnr; })
        .def_property_readonly("train_ssim", [](const TrainResult& r) { return r.report.train_ssim; })
        .def_property_readonly("seconds", [](const TrainResult& r) { return r.report.seconds; });
    m.def(
        "train",
        [](const GaussianField& f, const std::vector<Sample>& data, const TrainConfig& cfg) {
            py::gil_scoped_release nogil;
            return train(f, data, cfg);
        },
        py::arg("field"), py::arg("samples"), py::arg("config") = TrainConfig{});

    m.def(
        "render",
        [](const GaussianField& f, const std::array<double, 3>& rx, const std::array<double, 4>& orientation,
           int rows, int cols, const std::string& mode, const LegacyCalibration* cal) {
            const RenderOptions opt = render_options(parse_mode(mode), cal);
            py::gil_scoped_release nogil;
            return render_spectrum(f, to_vec(rx), to_quat(orientation), SphericalGrid(rows, cols), opt);
        },
        py::arg("field"), py::arg("rx"), py::arg("orientation") = std::array<double, 4>{1, 0, 0, 0},
        py::arg("rows") = 16, py::arg("cols") = 32, py::arg("mode") = "full_path", py::arg("calibration") = nullptr);

    m.def(
        "psnr", [](const Array& a, const Array& b, double r) { return psnr(flat(a), flat(b), r); }, py::arg("a"),
        py::arg("b"), py::arg("dynamic_range") = -kDefaultDbFloor);
    m.def(
        "ssim",
        [](const Array& a, const Array& b, double r, int window) {
            if (a.ndim() != 2)
                throw py::value_error("ssim expects 2-D images");
            return ssim(flat(a), flat(b), static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)), r, window);
        },
        py::arg("a"), py::arg("b"), py::arg("dynamic_range") = -kDefaultDbFloor, py::arg("window") = 7);
    m.def(
        "compare",
        [](const std::vector<SpatialSpectrum>& pred, const std::vector<SpatialSpectrum>& truth, double floor) {
            return metric_dict(compare_spectra(pred, truth, floor));
        },
        py::arg("predicted"), py::arg("truth"), py::arg("db_floor") = kDefaultDbFloor);

    m.def(
        "sampling_interval", [](int mult) { return channelization(mult).sampling_interval; },
        py::arg("multiplier"));
    m.def(
        "cir",
        [](const std::vector<Mpc>& mpcs, int mult) {
            const Cir c = mpcs_to_cir(mpcs, channelization(mult));
            py::array_t<std::complex<double>> taps(static_cast<py::ssize_t>(c.taps.size()));
            std::copy(c.taps.begin(), c.taps.end(), taps.mutable_data());
            return py::make_tuple(c.t0, c.ts, taps);
        },
        py::arg("mpcs"), py::arg("multiplier") = 1);
}
