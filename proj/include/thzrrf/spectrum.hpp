// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "thzrrf/math.hpp"
#include "thzrrf/spherical_grid.hpp"
#include "thzrrf/tracer.hpp"

namespace thzrrf {

/// Receiver-side spatial spectrum ("RF image"). Each AoA pixel carries the
/// path gain, time of flight and departure direction of one path. Pixels
/// without a path hold gain 0, tof 0 and a zero departure angle pair.
///
/// The departure direction is kept as (azimuth, elevation) so that the
/// stored representation matches the on-disk channel planes exactly.
struct SpatialSpectrum {
    SphericalGrid grid{1, 1};
    Vec3 rx_position;
    RotationQ rx_orientation;
    std::vector<double> gain; ///< linear power gain
    std::vector<double> tof;  ///< [s]
    std::vector<double> aod_az;
    std::vector<double> aod_el;

    SpatialSpectrum() : SpatialSpectrum(SphericalGrid{1, 1}) {}
    explicit SpatialSpectrum(const SphericalGrid& g, const Vec3& rx = {}, const RotationQ& q = {})
        : grid(g), rx_position(rx), rx_orientation(q), gain(g.size(), 0.0), tof(g.size(), 0.0),
          aod_az(g.size(), 0.0), aod_el(g.size(), 0.0)
    {
    }

    std::size_t size() const { return gain.size(); }
    bool hit(std::size_t i) const { return gain[i] > 0.0; }
    UnitDir aod(std::size_t i) const { return UnitDir::from_angles(aod_az[i], aod_el[i]); }
    void set(std::size_t i, double g, double t, const UnitDir& departure)
    {
        gain[i] = g;
        tof[i] = t;
        aod_az[i] = departure.azimuth();
        aod_el[i] = departure.elevation();
    }
    void clear(std::size_t i) { gain[i] = tof[i] = aod_az[i] = aod_el[i] = 0.0; }

    /// World-frame direction of the bin center of pixel i.
    UnitDir world_dir(std::size_t i) const { return rx_orientation.rotate(grid.pixel_to_dir(grid.pixel(i))); }

    bool operator==(const SpatialSpectrum&) const = default;
};

/// Bins MPCs by AoA (in the receiver frame). The strongest MPC in a pixel
/// wins; zero-amplitude MPCs are ignored.
SpatialSpectrum spectrum_from_mpcs(std::span<const Mpc> mpcs, const SphericalGrid& grid,
                                   const RotationQ& rx_orientation, const Vec3& rx_position = {});

/// Gains converted to dB and clamped at `floor_db`; misses map to the floor.
std::vector<double> gain_db_image(const SpatialSpectrum& s, double floor_db);

} // namespace thzrrf
