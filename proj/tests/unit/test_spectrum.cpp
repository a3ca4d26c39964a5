// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "thzrrf/spectrum.hpp"

using namespace thzrrf;

namespace {

Mpc make_mpc(double amp, const UnitDir& aoa, double delay = 1e-8)
{
    Mpc m;
    m.amplitude = amp;
    m.aoa = aoa;
    m.aod = -aoa;
    m.delay = delay;
    return m;
}

} // namespace

TEST_CASE("empty MPC list gives an all-zero spectrum")
{
    const SphericalGrid g(4, 8);
    const auto s = spectrum_from_mpcs({}, g, RotationQ::identity());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(s.gain[i] == 0.0);
        CHECK(s.tof[i] == 0.0);
    }
}

TEST_CASE("a single path fills exactly its pixel")
{
    const SphericalGrid g(8, 16);
    const UnitDir aoa(0.3, -0.8, 0.2);
    const std::vector<Mpc> mpcs{make_mpc(6.3e-9, aoa, 3.3e-9)};
    const auto s = spectrum_from_mpcs(mpcs, g, RotationQ::identity());
    const std::size_t want = g.index(g.dir_to_pixel(aoa));
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i == want) {
            CHECK(s.gain[i] == 6.3e-9);
            CHECK(s.tof[i] == 3.3e-9);
            CHECK(distance(s.aod(i).vec(), (-aoa).vec()) < 1e-12);
        } else {
            CHECK(s.gain[i] == 0.0);
            CHECK(s.tof[i] == 0.0);
        }
    }
}

TEST_CASE("strongest path wins inside a pixel")
{
    const SphericalGrid g(4, 8);
    const UnitDir a = g.pixel_to_dir({1, 4});
    const UnitDir b(a.vec() + Vec3{0.01, 0.01, 0.01});
    REQUIRE(g.dir_to_pixel(a) == g.dir_to_pixel(b));
    for (const auto& order : {std::vector<Mpc>{make_mpc(1e-9, a, 1e-9), make_mpc(2e-9, b, 2e-9)},
                              std::vector<Mpc>{make_mpc(2e-9, b, 2e-9), make_mpc(1e-9, a, 1e-9)}}) {
        const auto s = spectrum_from_mpcs(order, g, RotationQ::identity());
        const std::size_t i = g.index(g.dir_to_pixel(a));
        CHECK(s.gain[i] == 2e-9);
        CHECK(s.tof[i] == 2e-9);
    }
}

TEST_CASE("zero-amplitude paths are ignored")
{
    const SphericalGrid g(4, 8);
    const std::vector<Mpc> mpcs{make_mpc(0.0, UnitDir(1, 0, 0))};
    const auto s = spectrum_from_mpcs(mpcs, g, RotationQ::identity());
    for (double v : s.gain)
        CHECK(v == 0.0);
}

TEST_CASE("binning happens in the receiver frame")
{
    const SphericalGrid g(8, 16);
    const RotationQ q = RotationQ::from_axis_angle(UnitDir(0, 0, 1), kPi / 2);
    // A local bin center maps to its quarter-turned world direction.
    const UnitDir local = g.pixel_to_dir({3, 9});
    const UnitDir world = q.rotate(local);
    const std::vector<Mpc> mpcs{make_mpc(1e-9, world)};
    const auto s = spectrum_from_mpcs(mpcs, g, q);
    const std::size_t i = g.index({3, 9});
    CHECK(s.gain[i] == 1e-9);
    CHECK(distance(s.world_dir(i).vec(), world.vec()) < 1e-12);
    CHECK(s.gain[g.index(g.dir_to_pixel(world))] == 0.0);
}

TEST_CASE("dB image clamps at the floor")
{
    SpatialSpectrum s(SphericalGrid(1, 3));
    s.gain = {1e-9, 0.0, 1e-20};
    const auto db = gain_db_image(s, -160.0);
    CHECK(db[0] == doctest::Approx(-90.0));
    CHECK(db[1] == -160.0);
    CHECK(db[2] == -160.0);
}
