// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <utility>

#include "thzrrf/math.hpp"

namespace thzrrf {

struct Pixel {
    int row = 0;
    int col = 0;
    bool operator==(const Pixel&) const = default;
};

/// Equirectangular angle-of-arrival grid.
///
/// Row 0 is the top band (elevation just below +pi/2); rows increase
/// downwards. Column 0 starts at azimuth -pi; columns increase with azimuth.
/// Pixel (row, col) covers elevations (pi/2 - (row+1)*del, pi/2 - row*del]
/// and azimuths [-pi + col*daz, -pi + (col+1)*daz).
class SphericalGrid {
public:
    SphericalGrid(int n_el, int n_az);

    int n_el() const { return n_el_; }
    int n_az() const { return n_az_; }
    int rows() const { return n_el_; }
    int cols() const { return n_az_; }
    std::size_t size() const { return static_cast<std::size_t>(n_el_) * static_cast<std::size_t>(n_az_); }

    double el_step() const { return kPi / n_el_; }
    double az_step() const { return 2.0 * kPi / n_az_; }

    double row_elevation(int row) const { return 0.5 * kPi - (row + 0.5) * el_step(); }
    double col_azimuth(int col) const { return -kPi + (col + 0.5) * az_step(); }

    /// Bin-center direction of a pixel.
    UnitDir pixel_to_dir(Pixel p) const;
    /// Nearest-bin mapping; total for every unit direction.
    Pixel dir_to_pixel(const UnitDir& d) const;

    int row_of_elevation(double el) const;
    int col_of_azimuth(double az) const;

    std::size_t index(Pixel p) const
    {
        return static_cast<std::size_t>(p.row) * static_cast<std::size_t>(n_az_) + static_cast<std::size_t>(p.col);
    }
    Pixel pixel(std::size_t index) const
    {
        return {static_cast<int>(index / static_cast<std::size_t>(n_az_)),
                static_cast<int>(index % static_cast<std::size_t>(n_az_))};
    }

    bool operator==(const SphericalGrid&) const = default;

private:
    int n_el_;
    int n_az_;
};

} // namespace thzrrf
