// SPDX-License-Identifier: Apache-2.0

#include "thzrrf/spherical_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thzrrf {

SphericalGrid::SphericalGrid(int n_el, int n_az) : n_el_(n_el), n_az_(n_az)
{
    if (n_el < 1 || n_az < 1)
        throw std::invalid_argument("SphericalGrid: n_el and n_az must be >= 1");
}

UnitDir SphericalGrid::pixel_to_dir(Pixel p) const
{
    return UnitDir::from_angles(col_azimuth(p.col), row_elevation(p.row));
}

int SphericalGrid::row_of_elevation(double el) const
{
    const int row = static_cast<int>(std::floor((0.5 * kPi - el) / el_step()));
    return std::clamp(row, 0, n_el_ - 1);
}

int SphericalGrid::col_of_azimuth(double az) const
{
    // Wrap into [-pi, pi) first so that +pi lands in column 0.
    double a = std::fmod(az + kPi, 2.0 * kPi);
    if (a < 0.0)
        a += 2.0 * kPi;
    const int col = static_cast<int>(std::floor(a / az_step()));
    return std::clamp(col, 0, n_az_ - 1);
}

Pixel SphericalGrid::dir_to_pixel(const UnitDir& d) const
{
    return {row_of_elevation(d.elevation()), col_of_azimuth(d.azimuth())};
}

} // namespace thzrrf
