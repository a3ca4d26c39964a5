// SPDX-License-Identifier: Apache-2.0

#include "thzrrf/spectrum.hpp"

#include <algorithm>
#include <cmath>

namespace thzrrf {

SpatialSpectrum spectrum_from_mpcs(std::span<const Mpc> mpcs, const SphericalGrid& grid,
                                   const RotationQ& rx_orientation, const Vec3& rx_position)
{
    SpatialSpectrum s(grid, rx_position, rx_orientation);
    const RotationQ to_local = rx_orientation.conjugate();
    for (const Mpc& m : mpcs) {
        if (!(m.amplitude > 0.0))
            continue;
        const std::size_t i = grid.index(grid.dir_to_pixel(to_local.rotate(m.aoa)));
        if (m.amplitude > s.gain[i])
            s.set(i, m.amplitude, m.delay, m.aod);
    }
    return s;
}

std::vector<double> gain_db_image(const SpatialSpectrum& s, double floor_db)
{
    std::vector<double> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        out[i] = s.gain[i] > 0.0 ? std::max(10.0 * std::log10(s.gain[i]), floor_db) : floor_db;
    return out;
}

} // namespace thzrrf
