// SPDX-License-Identifier: Apache-2.0

#include "thzrrf/sh.hpp"

#include <stdexcept>

namespace thzrrf {

namespace {

// sqrt((2l+1)/(4 pi) * (l-|m|)!/(l+|m|)!) style normalizations, times sqrt(2) for m != 0.
constexpr double kC00 = 0.28209479177387814;
constexpr double kC1 = 0.4886025119029199;
constexpr double kC2a = 1.0925484305920792;
constexpr double kC2b = 0.31539156525252005;
constexpr double kC2c = 0.5462742152960396;
constexpr double kC3a = 0.5900435899266435;
constexpr double kC3b = 2.890611442640554;
constexpr double kC3c = 0.4570457994644658;
constexpr double kC3d = 0.3731763325901154;
constexpr double kC3e = 1.445305721320277;
constexpr double kC4a = 2.5033429417967046;
constexpr double kC4b = 1.7701307697799304;
constexpr double kC4c = 0.9461746957575601;
constexpr double kC4d = 0.6690465435572892;
constexpr double kC4e = 0.10578554691520431;
constexpr double kC4f = 0.47308734787878004;
constexpr double kC4g = 0.6258357354491761;

} // namespace

void sh_basis(int degree, const UnitDir& d, std::span<double> out)
{
    if (degree < 0 || degree > kMaxShDegree)
        throw std::invalid_argument("sh_basis: degree must be in [0, 4]");
    if (out.size() < static_cast<std::size_t>(sh_count(degree)))
        throw std::invalid_argument("sh_basis: output span too small");

    const double x = d.x(), y = d.y(), z = d.z();
    out[0] = kC00;
    if (degree < 1)
        return;
    out[1] = kC1 * y;
    out[2] = kC1 * z;
    out[3] = kC1 * x;
    if (degree < 2)
        return;
    const double xx = x * x, yy = y * y, zz = z * z;
    out[4] = kC2a * x * y;
    out[5] = kC2a * y * z;
    out[6] = kC2b * (3.0 * zz - 1.0);
    out[7] = kC2a * x * z;
    out[8] = kC2c * (xx - yy);
    if (degree < 3)
        return;
    out[9] = kC3a * y * (3.0 * xx - yy);
    out[10] = kC3b * x * y * z;
    out[11] = kC3c * y * (5.0 * zz - 1.0);
    out[12] = kC3d * z * (5.0 * zz - 3.0);
    out[13] = kC3c * x * (5.0 * zz - 1.0);
    out[14] = kC3e * z * (xx - yy);
    out[15] = kC3a * x * (xx - 3.0 * yy);
    if (degree < 4)
        return;
    out[16] = kC4a * x * y * (xx - yy);
    out[17] = kC4b * y * z * (3.0 * xx - yy);
    out[18] = kC4c * x * y * (7.0 * zz - 1.0);
    out[19] = kC4d * y * z * (7.0 * zz - 3.0);
    out[20] = kC4e * (35.0 * zz * zz - 30.0 * zz + 3.0);
    out[21] = kC4d * x * z * (7.0 * zz - 3.0);
    out[22] = kC4f * (xx - yy) * (7.0 * zz - 1.0);
    out[23] = kC4b * x * z * (xx - 3.0 * yy);
    out[24] = kC4g * (xx * (xx - 3.0 * yy) - yy * (3.0 * xx - yy));
}

std::vector<double> sh_basis(int degree, const UnitDir& d)
{
    if (degree < 0 || degree > kMaxShDegree)
        throw std::invalid_argument("sh_basis: degree must be in [0, 4]");
    std::vector<double> out(static_cast<std::size_t>(sh_count(degree)));
    sh_basis(degree, d, out);
    return out;
}

} // namespace thzrrf
