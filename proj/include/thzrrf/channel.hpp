// SPDX-License-Identifier: Apache-2.0
//
// Baseband channel synthesis: multipath components to tapped CIRs under the
// 2.16 GHz channelization, and strongest-beam selection from spectra.

#pragma once

#include <complex>
#include <span>
#include <vector>

#include "thzrrf/spectrum.hpp"
#include "thzrrf/tracer.hpp"

namespace thzrrf {

inline constexpr double kChannelBandwidth = 2.16e9; ///< [Hz]

struct Channelization {
    int multiplier = 1;
    double bandwidth = kChannelBandwidth; ///< [Hz]
    double sampling_interval = 1.0 / kChannelBandwidth; ///< Ts [s]
    double path_resolution = kSpeedOfLight / kChannelBandwidth; ///< c Ts [m]
};

/// Channelization for m in {1, 2, 4, 8, 16, 32}; throws std::invalid_argument otherwise.
Channelization channelization(int multiplier);

/// Tapped impulse response: tap i sits at delay t0 + i Ts.
struct Cir {
    std::vector<std::complex<double>> taps;
    double t0 = 0.0;
    double ts = 0.0;

    double tap_delay(std::size_t i) const { return t0 + static_cast<double>(i) * ts; }
};

/// Delay bin of an absolute delay on the grid anchored at t = 0:
/// floor(delay / Ts), computed as floor(delay * bandwidth).
long long delay_bin(double delay, const Channelization& ch);

/// Each MPC adds sqrt(alpha) e^{j phi} to the tap whose bin
/// [t0 + i Ts, t0 + (i+1) Ts) contains its delay; t0 is the minimum delay
/// rounded down to the bin grid. Bins of a finer channelization nest inside
/// those of a coarser one. Throws std::invalid_argument on an empty list.
Cir mpcs_to_cir(std::span<const Mpc> mpcs, const Channelization& ch);

struct Beam {
    Pixel pixel;
    UnitDir aoa; ///< world frame
    double path_gain = 0.0;
    double tof = 0.0;
    UnitDir aod;
};

/// Top-k hit pixels by path gain, descending; ties go to the lower
/// (row, col). Empty for an all-miss spectrum. Throws for k < 1.
std::vector<Beam> best_beams(const SpatialSpectrum& spectrum, std::size_t k);

} // namespace thzrrf
