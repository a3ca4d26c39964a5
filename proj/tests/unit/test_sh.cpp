// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "thzrrf/sh.hpp"

using namespace thzrrf;

namespace {

// Real SH from associated Legendre polynomials (recurrence form), used as
// an oracle for the closed-form basis.
double legendre(int l, int m, double x)
{
    double pmm = 1.0;
    if (m > 0) {
        const double s = std::sqrt((1.0 - x) * (1.0 + x));
        double f = 1.0;
        for (int i = 1; i <= m; ++i) {
            pmm *= -f * s;
            f += 2.0;
        }
    }
    if (l == m)
        return pmm;
    double pmm1 = x * (2.0 * m + 1.0) * pmm;
    if (l == m + 1)
        return pmm1;
    double pll = 0.0;
    for (int ll = m + 2; ll <= l; ++ll) {
        pll = ((2.0 * ll - 1.0) * x * pmm1 - (ll + m - 1.0) * pmm) / (ll - m);
        pmm = pmm1;
        pmm1 = pll;
    }
    return pll;
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

double oracle_sh(int l, int m, const UnitDir& d)
{
    const double theta = std::acos(std::clamp(d.z(), -1.0, 1.0));
    const double phi = std::atan2(d.y(), d.x());
    const int am = std::abs(m);
    const double k = std::sqrt((2.0 * l + 1.0) / (4.0 * kPi) * factorial(l - am) / factorial(l + am));
    // Condon-Shortley phase removed so that band 1 is (y, z, x) * positive constant.
    const double p = legendre(l, am, std::cos(theta)) * (am % 2 ? -1.0 : 1.0);
    if (m == 0)
        return k * p;
    if (m > 0)
        return std::sqrt(2.0) * k * std::cos(m * phi) * p;
    return std::sqrt(2.0) * k * std::sin(am * phi) * p;
}

} // namespace

TEST_CASE("band 0 is the constant 1/(2 sqrt(pi))")
{
    const auto y = sh_basis(0, UnitDir(0.3, -0.2, 0.9));
    REQUIRE(y.size() == 1);
    CHECK(y[0] == doctest::Approx(0.2820948).epsilon(1e-7));
}

TEST_CASE("band 1 at the +z pole")
{
    const auto y = sh_basis(1, UnitDir(0, 0, 1));
    REQUIRE(y.size() == 4);
    CHECK(std::abs(y[1]) < 1e-15);
    CHECK(y[2] == doctest::Approx(0.4886025).epsilon(1e-7));
    CHECK(std::abs(y[3]) < 1e-15);
}

TEST_CASE("basis matches the associated-Legendre oracle up to degree 4")
{
    std::mt19937_64 rng(21);
    std::normal_distribution<double> n;
    for (int i = 0; i < 200; ++i) {
        const UnitDir d(n(rng), n(rng), n(rng));
        const auto y = sh_basis(4, d);
        REQUIRE(y.size() == 25);
        for (int l = 0; l <= 4; ++l)
            for (int m = -l; m <= l; ++m)
                CHECK(y[static_cast<std::size_t>(l * l + l + m)] == doctest::Approx(oracle_sh(l, m, d)).epsilon(1e-12));
    }
}

TEST_CASE("Monte-Carlo orthonormality")
{
    // (1/4pi) integral Y_i Y_j dOmega = delta_ij / (4 pi)
    constexpr int n = 1000000;
    constexpr int k = sh_count(kMaxShDegree);
    std::vector<double> acc(k * k, 0.0);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    std::vector<double> y(k);
    for (int s = 0; s < n; ++s) {
        sh_basis(kMaxShDegree, UnitDir(g(rng), g(rng), g(rng)), y);
        for (int i = 0; i < k; ++i)
            for (int j = i; j < k; ++j)
                acc[i * k + j] += y[i] * y[j];
    }
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) {
            const double mean = acc[i * k + j] / n; // estimates (1/4pi) integral
            const double want = i == j ? 1.0 / (4.0 * kPi) : 0.0;
            CHECK(std::abs(mean - want) < 1e-2);
        }
}

TEST_CASE("product quadrature orthonormality is exact")
{
    // Gauss-Legendre in cos(theta) times a uniform rule in phi integrates
    // degree <= 8 products exactly.
    constexpr int nq = 12, nphi = 24;
    std::vector<double> x(nq), w(nq);
    for (int i = 0; i < nq; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (nq + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int l = 2; l <= nq; ++l) {
                const double p2 = ((2.0 * l - 1.0) * z * p1 - (l - 1.0) * p0) / l;
                p0 = p1;
                p1 = p2;
            }
            const double dp = nq * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16)
                break;
        }
        double p0 = 1.0, p1 = z;
        for (int l = 2; l <= nq; ++l) {
            const double p2 = ((2.0 * l - 1.0) * z * p1 - (l - 1.0) * p0) / l;
            p0 = p1;
            p1 = p2;
        }
        const double dp = nq * (z * p1 - p0) / (z * z - 1.0);
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    constexpr int k = sh_count(kMaxShDegree);
    std::vector<double> gram(k * k, 0.0);
    for (int i = 0; i < nq; ++i)
        for (int j = 0; j < nphi; ++j) {
            const double phi = 2.0 * kPi * j / nphi;
            const double s = std::sqrt(1.0 - x[i] * x[i]);
            const auto y = sh_basis(kMaxShDegree, UnitDir(s * std::cos(phi), s * std::sin(phi), x[i]));
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b)
                    gram[a * k + b] += w[i] * (2.0 * kPi / nphi) * y[a] * y[b];
        }
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            CHECK(std::abs(gram[a * k + b] - (a == b ? 1.0 : 0.0)) < 1e-12);
}

TEST_CASE("degree outside [0, 4] is rejected")
{
    CHECK_THROWS_AS(sh_basis(5, UnitDir(1, 0, 0)), std::invalid_argument);
    CHECK_THROWS_AS(sh_basis(-1, UnitDir(1, 0, 0)), std::invalid_argument);
    CHECK(sh_count(3) == 16);
}
