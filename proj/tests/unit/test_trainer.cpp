// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <random>

#include "thzrrf/trainer.hpp"

using namespace thzrrf;

namespace {

GaussianPrimitive facing(const Vec3& center, const Vec3& towards, double sigma, double density)
{
    const UnitDir n(towards - center);
    const Vec3 helper = std::abs(n.z()) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
    const UnitDir u(cross(helper, n.vec()));
    const Vec3 v = cross(n.vec(), u.vec());
    GaussianPrimitive g;
    g.center = center;
    g.scale = {sigma, sigma, 0.3 * sigma};
    g.rotation = RotationQ::from_frame(u.vec(), v, n.vec());
    g.density = density;
    g.gain_sh.assign(16, 0.0);
    return g;
}

SpatialSpectrum image(const SphericalGrid& grid, std::vector<double> gains)
{
    SpatialSpectrum s(grid);
    s.gain = std::move(gains);
    return s;
}

// Small random field around a receiver at the origin whose primitives sit on
// pixel directions of `grid`.
GaussianField random_field(std::mt19937_64& rng, const SphericalGrid& grid, int n)
{
    std::uniform_real_distribution<double> dist(1.5, 3.0), dens(0.2, 1.5), sig(0.4, 1.0);
    std::uniform_int_distribution<std::size_t> pix(0, grid.size() - 1);
    std::normal_distribution<double> coeff(0.0, 0.4);
    GaussianField f;
    f.tx_position = {0.3, -2.0, 1.0};
    for (int i = 0; i < n; ++i) {
        const Vec3 c = grid.pixel_to_dir(grid.pixel(pix(rng))).vec() * dist(rng);
        GaussianPrimitive g = facing(c, {0, 0, 0}, sig(rng), dens(rng));
        for (auto& x : g.gain_sh)
            x = coeff(rng);
        g.gain_sh[0] -= 12.0;
        f.primitives.push_back(g);
    }
    return f;
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

Scene tile_scene()
{
    Scene s;
    s.materials.push_back({"tile", 0.6, 4, 0.8});
    s.facets.push_back(make_facet({Vec3{-1, -1, 0}, Vec3{1, -1, 0}, Vec3{-1, 1, 0}}, FacetShape::parallelogram, 0,
                                  Vec3{0, 0, 1}));
    s.tx_position = {0, 0, 1.5};
    s.sampling_volume = Aabb{{-0.8, -0.8, 0.5}, {0.8, 0.8, 1.5}};
    return s;
}

} // namespace

TEST_CASE("loss values")
{
    const SphericalGrid grid(10, 10);
    TrainConfig cfg;
    std::vector<double> g(100, 1e-9);
    const SpatialSpectrum truth = image(grid, g);
    CHECK(loss(truth, truth, cfg) == 0.0);
    g[37] = 1e-8;
    const SpatialSpectrum off = image(grid, g);
    CHECK(loss(off, truth, cfg) == doctest::Approx(1.0).epsilon(1e-12));
    cfg.loss = LossKind::l1_db;
    CHECK(loss(off, truth, cfg) == doctest::Approx(0.1).epsilon(1e-12));
    const SpatialSpectrum miss(grid);
    CHECK(loss(miss, miss, cfg) == 0.0);
    // below the floor counts as the floor
    CHECK(loss(image(grid, std::vector<double>(100, 1e-20)), miss, cfg) == 0.0);
    CHECK_THROWS_AS(loss(miss, SpatialSpectrum(SphericalGrid(5, 20)), cfg), std::invalid_argument);
}

TEST_CASE("analytic gradient matches central differences")
{
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> count(1, 5), shape(0, 1);
    std::normal_distribution<double> n;
    for (int trial = 0; trial < 20; ++trial) {
        const SphericalGrid grid = shape(rng) ? SphericalGrid(2, 2) : SphericalGrid(1, 4);
        GaussianField f = random_field(rng, grid, count(rng));
        f.sh_degree = 3;
        std::vector<double> t(grid.size());
        for (auto& x : t)
            x = std::pow(10.0, -9.0 + n(rng));
        const SpatialSpectrum truth = image(grid, t);
        TrainConfig cfg;
        cfg.loss = trial % 4 == 3 ? LossKind::l1_db : LossKind::l2_db;
        RenderOptions opt;
        opt.direct_path = false;
        const std::vector<double> an = grad_sh(f, truth, cfg, opt);

        const auto eval = [&](const GaussianField& g) {
            return loss(render_spectrum(g, {}, {}, grid, opt), truth, cfg);
        };
        double gmax = 0.0;
        for (double x : an)
            gmax = std::max(gmax, std::abs(x));
        const double h = 1e-4;
        for (std::size_t p = 0; p < an.size(); ++p) {
            GaussianField a = f, b = f;
            a.primitives[p / 16].gain_sh[p % 16] += h;
            b.primitives[p / 16].gain_sh[p % 16] -= h;
            const double fd = (eval(a) - eval(b)) / (2 * h);
            CHECK(std::abs(fd - an[p]) <= 1e-4 * std::max(std::abs(an[p]), 1e-3 * gmax) + 1e-12);
        }
    }
}

TEST_CASE("gradient is zero for a primitive no ray sees and scales with pixel weights")
{
    std::mt19937_64 rng(7);
    const SphericalGrid grid(2, 2);
    GaussianField f = random_field(rng, grid, 3);
    // tiny primitive straight below the receiver, between pixel centers
    f.primitives.push_back(facing({0, 0, -2}, {0, 0, 0}, 0.01, 1.0));
    const SpatialSpectrum truth = image(grid, {1e-9, 1e-10, 1e-11, 1e-8});
    TrainConfig cfg;
    const RenderOptions opt;
    const std::vector<double> g1 = grad_sh(f, truth, cfg, opt);
    for (std::size_t j = 3 * 16; j < 4 * 16; ++j)
        CHECK(g1[j] == 0.0);
    const std::vector<double> w(grid.size(), 2.0);
    const std::vector<double> g2 = grad_sh(f, truth, cfg, opt, w);
    for (std::size_t j = 0; j < g1.size(); ++j)
        CHECK(g2[j] == doctest::Approx(2.0 * g1[j]).epsilon(1e-12));
    const SpatialSpectrum r = render_spectrum(f, {}, {}, grid, opt);
    CHECK(loss(r, truth, cfg, w) == doctest::Approx(2.0 * loss(r, truth, cfg)).epsilon(1e-12));
}

TEST_CASE("training recovers a realizable target")
{
    std::mt19937_64 rng(11);
    const SphericalGrid grid(4, 8);
    GaussianField target = random_field(rng, grid, 3);
    Sample s;
    s.spectrum = render_spectrum(target, {}, {}, grid);
    GaussianField init = target;
    for (auto& g : init.primitives) {
        std::fill(g.gain_sh.begin(), g.gain_sh.end(), 0.0);
        g.gain_sh[0] = -10.0;
    }
    TrainConfig cfg;
    cfg.epochs = 500;
    cfg.batch_size = 1;
    const std::vector<Sample> data{s};
    const TrainResult r = train(init, data, cfg);
    const SpatialSpectrum out = render_spectrum(r.field, {}, {}, grid);
    const auto a = gain_db_image(out, cfg.db_floor), b = gain_db_image(s.spectrum, cfg.db_floor);
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(std::abs(a[i] - b[i]) < 1.0);
    CHECK(r.report.loss_trace.size() == 500);
    CHECK(r.report.loss_trace.back() < r.report.loss_trace.front());
}

TEST_CASE("training configuration checks")
{
    TrainConfig cfg;
    cfg.epochs = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.learning_rate = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.db_floor = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.sh_decay = -0.1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    CHECK_THROWS_AS(train(GaussianField{}, std::vector<Sample>{}, TrainConfig{}), std::invalid_argument);
}

TEST_CASE("training is deterministic, keeps geometry frozen and lowers the loss")
{
    const Scene scene = tile_scene();
    const SphericalGrid grid(8, 16);
    const Dataset data = generate_dataset(scene, 12, grid, 5);
    SeedParams sp;
    sp.spacing = 0.5;
    sp.init_scale = 0.3;
    const GaussianField init = seed_from_scene(scene, sp);
    TrainConfig cfg;
    cfg.epochs = 60;
    cfg.sh_decay = 0.1;
    for (RenderMode mode : {RenderMode::full_path, RenderMode::legacy}) {
        cfg.mode = mode;
        const TrainResult a = train(init, data, cfg);
        const TrainResult b = train(init, data, cfg);
        CHECK(a.field == b.field);
        CHECK(a.report.same_results(b.report));
        CHECK(a.calibration.has_value() == (mode == RenderMode::legacy));
        REQUIRE(a.field.size() == init.size());
        for (std::size_t i = 0; i < init.size(); ++i) {
            const auto& p = a.field.primitives[i];
            const auto& q = init.primitives[i];
            CHECK(p.center == q.center);
            CHECK(p.scale == q.scale);
            CHECK(p.rotation == q.rotation);
            CHECK(p.density == q.density);
        }
        const auto& t = a.report.loss_trace;
        const std::vector<double> head(t.begin(), t.begin() + 10), tail(t.end() - 10, t.end());
        CHECK(median(tail) < median(head));
    }
}

TEST_CASE("legacy calibration")
{
    const SphericalGrid grid(4, 8);
    const Vec3 c{0, 0, 1};
    const UnitDir d = grid.pixel_to_dir({1, 5});
    GaussianField f;
    f.tx_position = {5, 5, 5};
    f.primitives.push_back(facing(c, c - d.vec(), 0.01, 1.0));
    f.primitives.push_back(facing({9, 9, 9}, {0, 0, 0}, 0.01, 1.0));

    std::vector<Sample> data(2);
    data[0].rx_position = c - d.vec() * 1.0;
    data[1].rx_position = c - d.vec() * 3.0;
    for (auto& s : data)
        s.spectrum = SpatialSpectrum(grid, s.rx_position);
    const LegacyCalibration cal = legacy_calibration(f, data, grid);
    REQUIRE(cal.depth.size() == 2);
    CHECK(cal.depth[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(cal.depth[1] == doctest::Approx(2.0).epsilon(1e-12)); // never hit: mean of the others

    const std::vector<Sample> one(data.begin() + 1, data.end());
    CHECK(legacy_calibration(f, one, grid).depth[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK_THROWS_AS(legacy_calibration(f, std::vector<Sample>{}, grid), std::invalid_argument);
}
