// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "thzrrf/gaussian_field.hpp"

using namespace thzrrf;

namespace {

Scene unit_square()
{
    Scene s;
    s.materials.push_back({"m", 0.5, 4, 1.0});
    s.facets.push_back(make_facet({Vec3{0, 0, 1}, Vec3{1, 0, 1}, Vec3{0, 1, 1}}, FacetShape::parallelogram, 0,
                                  Vec3{0, 0, 1}));
    s.tx_position = {0.5, 0.5, 3};
    return s;
}

GaussianPrimitive iso(double sigma, double density = 1.0)
{
    GaussianPrimitive g;
    g.scale = {sigma, sigma, sigma};
    g.density = density;
    return g;
}

// Mahalanobis oracle: brute-force minimum over a dense parameter sweep.
double brute_density(const GaussianPrimitive& g, const Ray& ray, double t_max)
{
    const Mat3 r = g.rotation.to_matrix();
    double best = 0.0;
    const int n = 20000;
    for (int i = 0; i <= n; ++i) {
        const double t = t_max * i / n;
        const Vec3 p = ray.origin + ray.dir.vec() * t - g.center;
        // local = R^T p
        const Vec3 l{r[0][0] * p.x + r[1][0] * p.y + r[2][0] * p.z, r[0][1] * p.x + r[1][1] * p.y + r[2][1] * p.z,
                     r[0][2] * p.x + r[1][2] * p.y + r[2][2] * p.z};
        const double m2 = (l.x / g.scale.x) * (l.x / g.scale.x) + (l.y / g.scale.y) * (l.y / g.scale.y) +
                          (l.z / g.scale.z) * (l.z / g.scale.z);
        best = std::max(best, g.density * std::exp(-0.5 * m2));
    }
    return best;
}

} // namespace

TEST_CASE("effective density closed forms")
{
    const GaussianPrimitive g = iso(0.2, 0.8);
    CHECK(effective_density(g, Ray{{-5, 0, 0}, UnitDir(1, 0, 0)}) == doctest::Approx(0.8));
    CHECK(effective_density(g, Ray{{-5, 0.2, 0}, UnitDir(1, 0, 0)}) == doctest::Approx(0.8 * std::exp(-0.5)).epsilon(1e-12));
    CHECK(effective_density(g, Ray{{-5, 0, 0.2}, UnitDir(1, 0, 0)}) == doctest::Approx(0.6065 * 0.8).epsilon(1e-4));
    const double far = effective_density(g, Ray{{-5, 2.0, 0}, UnitDir(1, 0, 0)});
    CHECK(far < 2e-22 * 0.8);
    CHECK(far < kDensityCutoff);
}

TEST_CASE("density behind the ray origin is not counted")
{
    const GaussianPrimitive g = iso(0.1);
    const RayGaussianHit h = intersect(g, Ray{{1, 0, 0}, UnitDir(1, 0, 0)});
    CHECK(h.depth == 0.0);
    CHECK(h.density == doctest::Approx(std::exp(-0.5 * 100.0)));
}

TEST_CASE("anisotropic density matches a brute-force Mahalanobis oracle")
{
    std::mt19937_64 rng(13);
    std::normal_distribution<double> n;
    std::uniform_real_distribution<double> u(0.05, 0.4);
    for (int i = 0; i < 50; ++i) {
        GaussianPrimitive g;
        g.center = {n(rng), n(rng), n(rng)};
        g.scale = {u(rng), u(rng), u(rng)};
        g.rotation = RotationQ(n(rng), n(rng), n(rng), n(rng));
        const Vec3 origin = g.center + Vec3{3 * n(rng), 3 * n(rng), 3 * n(rng)};
        const UnitDir d(g.center + Vec3{0.2 * n(rng), 0.2 * n(rng), 0.2 * n(rng)} - origin);
        const Ray ray{origin, d};
        const double t_max = 2.0 * distance(origin, g.center);
        const RayGaussianHit h = intersect(g, ray, t_max);
        const double oracle = brute_density(g, ray, t_max);
        CHECK(h.density >= oracle * (1.0 - 1e-9));
        CHECK(h.density == doctest::Approx(oracle).epsilon(1e-3));
    }
}

TEST_CASE("cutoff radius")
{
    CHECK(cutoff_radius(iso(1.0, 1.0)) == doctest::Approx(std::sqrt(2.0 * std::log(1e8))));
    CHECK(cutoff_radius(iso(1.0, 0.0)) == 0.0);
    const GaussianPrimitive g = iso(0.3, 2.0);
    const double r = cutoff_radius(g) * 0.3;
    CHECK(effective_density(g, Ray{{-5, r * 1.0001, 0}, UnitDir(1, 0, 0)}) < kDensityCutoff);
    CHECK(effective_density(g, Ray{{-5, r * 0.9999, 0}, UnitDir(1, 0, 0)}) > kDensityCutoff);
}

TEST_CASE("decoded gain")
{
    GaussianPrimitive g = iso(1.0);
    g.gain_sh.assign(16, 0.0);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n;
    for (int i = 0; i < 20; ++i)
        CHECK(decoded_gain(g, 3, UnitDir(n(rng), n(rng), n(rng))) == 1.0);
    g.gain_sh[0] = -2.0;
    CHECK(decoded_gain(g, 3, UnitDir(0.2, 0.3, 0.9)) == doctest::Approx(std::exp(-2.0 * 0.2820948)).epsilon(1e-7));
    for (auto& c : g.gain_sh)
        c = n(rng);
    // continuity
    for (int i = 0; i < 100; ++i) {
        const UnitDir d(n(rng), n(rng), n(rng));
        const UnitDir e(d.vec() + Vec3{1e-7, -1e-7, 1e-7});
        const double a = decoded_gain(g, 3, d), b = decoded_gain(g, 3, e);
        CHECK(a > 0.0);
        CHECK(std::isfinite(a));
        CHECK(std::abs(a - b) < 1e-5 * a);
    }
}

TEST_CASE("seeding a 1 m square at 0.5 m spacing")
{
    const Scene s = unit_square();
    SeedParams p;
    p.spacing = 0.5;
    p.init_gain = 0.02;
    const GaussianField f = seed_from_scene(s, p);
    CHECK(f.size() >= 4);
    CHECK(f.size() <= 9);
    for (const auto& g : f.primitives) {
        CHECK(std::abs(g.center.z - 1.0) < 1e-9);
        CHECK(g.center.x > 0.0);
        CHECK(g.center.x < 1.0);
        CHECK(g.normal().z == doctest::Approx(1.0));
        CHECK(g.scale.z <= std::min(g.scale.x, g.scale.y));
        CHECK(g.density == p.init_density);
        std::mt19937_64 rng(1);
        std::normal_distribution<double> n;
        for (int i = 0; i < 10; ++i)
            CHECK(decoded_gain(g, f.sh_degree, UnitDir(n(rng), n(rng), n(rng))) == doctest::Approx(0.02).epsilon(1e-9));
    }
    CHECK(f.tx_position == s.tx_position);
    CHECK(seed_from_scene(s, p) == f);
}

TEST_CASE("seeding rejects empty scenes and bad parameters")
{
    Scene empty;
    try {
        seed_from_scene(empty, {});
        FAIL("expected an error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("no facets") != std::string::npos);
    }
    SeedParams bad;
    bad.spacing = 0.0;
    CHECK_THROWS_AS(seed_from_scene(unit_square(), bad), std::invalid_argument);
    bad = {};
    bad.sh_degree = 5;
    CHECK_THROWS_AS(seed_from_scene(unit_square(), bad), std::invalid_argument);
}

TEST_CASE("field validation")
{
    GaussianField f = seed_from_scene(unit_square(), {});
    CHECK_NOTHROW(f.validate());
    f.primitives[0].gain_sh.pop_back();
    CHECK_THROWS_AS(f.validate(), std::invalid_argument);
}
