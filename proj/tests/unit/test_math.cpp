// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "thzrrf/math.hpp"

using namespace thzrrf;

namespace {

// Rodrigues' formula, independent of the quaternion code.
Vec3 rodrigues(const Vec3& axis, double angle, const Vec3& v)
{
    const Vec3 k = axis / norm(axis);
    return v * std::cos(angle) + cross(k, v) * std::sin(angle) + k * (dot(k, v) * (1.0 - std::cos(angle)));
}

Vec3 random_vec(std::mt19937_64& rng)
{
    std::normal_distribution<double> n;
    return {n(rng), n(rng), n(rng)};
}

RotationQ random_q(std::mt19937_64& rng)
{
    std::normal_distribution<double> n;
    return RotationQ(n(rng), n(rng), n(rng), n(rng));
}

void check_close(const Vec3& a, const Vec3& b, double tol)
{
    CHECK(std::abs(a.x - b.x) <= tol);
    CHECK(std::abs(a.y - b.y) <= tol);
    CHECK(std::abs(a.z - b.z) <= tol);
}

} // namespace

TEST_CASE("identity rotation leaves vectors unchanged")
{
    const Vec3 v{1, 2, 3};
    CHECK(RotationQ::identity().rotate(v) == v);
}

TEST_CASE("quarter turn about z maps x to y")
{
    const auto q = RotationQ::from_axis_angle(UnitDir(0, 0, 1), kPi / 2);
    const Vec3 r = q.rotate(Vec3{1, 0, 0});
    CHECK(std::abs(r.x) < 1e-15);
    CHECK(r.y == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(r.z) < 1e-15);
}

TEST_CASE("axis-angle rotation matches Rodrigues")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    for (int i = 0; i < 200; ++i) {
        const Vec3 axis = random_vec(rng);
        const double a = ang(rng);
        const Vec3 v = random_vec(rng);
        const Vec3 got = RotationQ::from_axis_angle(UnitDir(axis), a).rotate(v);
        const Vec3 want = rodrigues(axis, a, v);
        CHECK(distance(got, want) < 1e-12 * (1.0 + norm(v)));
    }
}

TEST_CASE("rotation preserves norms")
{
    std::mt19937_64 rng(1);
    for (int i = 0; i < 1000; ++i) {
        const RotationQ q = random_q(rng);
        const Vec3 v = random_vec(rng);
        CHECK(std::abs(norm(q.rotate(v)) - norm(v)) < 1e-12 * (1.0 + norm(v)));
    }
}

TEST_CASE("rotation composes like the Hamilton product")
{
    std::mt19937_64 rng(2);
    for (int i = 0; i < 1000; ++i) {
        const RotationQ q1 = random_q(rng), q2 = random_q(rng);
        const Vec3 v = random_vec(rng);
        CHECK(distance(q1.rotate(q2.rotate(v)), (q1 * q2).rotate(v)) < 1e-9);
    }
}

TEST_CASE("rotation matrices are proper and agree with rotate")
{
    std::mt19937_64 rng(4);
    for (int i = 0; i < 200; ++i) {
        const RotationQ q = random_q(rng);
        const double n2 = q.w() * q.w() + q.x() * q.x() + q.y() * q.y() + q.z() * q.z();
        CHECK(std::abs(n2 - 1.0) < 1e-9);
        const Mat3 m = q.to_matrix();
        CHECK(std::abs(determinant(m) - 1.0) < 1e-9);
        const Vec3 v = random_vec(rng);
        const Vec3 mv{m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z, m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                      m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
        CHECK(distance(mv, q.rotate(v)) < 1e-12 * (1.0 + norm(v)));
    }
}

TEST_CASE("from_frame reproduces the frame columns")
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        const RotationQ q = random_q(rng);
        const Vec3 c0 = q.rotate(Vec3{1, 0, 0}), c1 = q.rotate(Vec3{0, 1, 0}), c2 = q.rotate(Vec3{0, 0, 1});
        const RotationQ r = RotationQ::from_frame(c0, c1, c2);
        CHECK(distance(r.rotate(Vec3{1, 0, 0}), c0) < 1e-12);
        CHECK(distance(r.rotate(Vec3{0, 1, 0}), c1) < 1e-12);
        CHECK(distance(r.rotate(Vec3{0, 0, 1}), c2) < 1e-12);
    }
}

TEST_CASE("conjugate inverts the rotation")
{
    std::mt19937_64 rng(6);
    const RotationQ q = random_q(rng);
    const Vec3 v{0.3, -2.0, 1.5};
    CHECK(distance(q.conjugate().rotate(q.rotate(v)), v) < 1e-12);
}

TEST_CASE("unit directions normalize and reject zero")
{
    const UnitDir d(3, 0, 4);
    CHECK(d.x() == doctest::Approx(0.6));
    CHECK(d.z() == doctest::Approx(0.8));
    CHECK_THROWS_AS(UnitDir(0, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(RotationQ(0, 0, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(UnitDir::from_raw(Vec3{1, 1, 0}), std::invalid_argument);

    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        const UnitDir u(random_vec(rng));
        CHECK(std::abs(dot(u, u) - 1.0) < 1e-9);
        const UnitDir back = UnitDir::from_angles(u.azimuth(), u.elevation());
        CHECK(distance(back.vec(), u.vec()) < 1e-12);
    }
}

TEST_CASE("angle_between handles near-parallel and opposite directions")
{
    CHECK(angle_between(UnitDir(1, 0, 0), UnitDir(1, 0, 0)) == 0.0);
    CHECK(angle_between(UnitDir(1, 0, 0), UnitDir(-1, 0, 0)) == doctest::Approx(kPi));
    CHECK(angle_between(UnitDir(1, 0, 0), UnitDir(1, 1e-9, 0)) == doctest::Approx(1e-9).epsilon(1e-6));
}
