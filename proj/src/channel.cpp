// SPDX-License-Identifier: Apache-2.0

#include "thzrrf/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace thzrrf {

Channelization channelization(int multiplier)
{
    switch (multiplier) {
    case 1: case 2: case 4: case 8: case 16: case 32:
        break;
    default:
        throw std::invalid_argument("channelization: multiplier must be one of 1, 2, 4, 8, 16, 32");
    }
    Channelization ch;
    ch.multiplier = multiplier;
    ch.bandwidth = multiplier * kChannelBandwidth;
    ch.sampling_interval = 1.0 / ch.bandwidth;
    ch.path_resolution = kSpeedOfLight * ch.sampling_interval;
    return ch;
}

long long delay_bin(double delay, const Channelization& ch)
{
    return static_cast<long long>(std::floor(delay * ch.bandwidth));
}

Cir mpcs_to_cir(std::span<const Mpc> mpcs, const Channelization& ch)
{
    if (mpcs.empty())
        throw std::invalid_argument("mpcs_to_cir: empty MPC list");
    long long first = delay_bin(mpcs[0].delay, ch), last = first;
    for (const Mpc& m : mpcs) {
        const long long b = delay_bin(m.delay, ch);
        first = std::min(first, b);
        last = std::max(last, b);
    }
    Cir cir;
    cir.ts = ch.sampling_interval;
    cir.t0 = static_cast<double>(first) * ch.sampling_interval;
    cir.taps.assign(static_cast<std::size_t>(last - first + 1), {0.0, 0.0});
    for (const Mpc& m : mpcs)
        cir.taps[static_cast<std::size_t>(delay_bin(m.delay, ch) - first)] +=
            std::polar(std::sqrt(m.amplitude), m.phase);
    return cir;
}

std::vector<Beam> best_beams(const SpatialSpectrum& spectrum, std::size_t k)
{
    if (k < 1)
        throw std::invalid_argument("best_beams: k must be >= 1");
    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i < spectrum.size(); ++i)
        if (spectrum.hit(i))
            hits.push_back(i);
    // Pixel index order equals (row, col) order, so a stable sort on gain
    // gives the documented tie-break.
    std::stable_sort(hits.begin(), hits.end(),
                     [&](std::size_t a, std::size_t b) { return spectrum.gain[a] > spectrum.gain[b]; });
    hits.resize(std::min(k, hits.size()));
    std::vector<Beam> out;
    out.reserve(hits.size());
    for (std::size_t i : hits)
        out.push_back({spectrum.grid.pixel(i), spectrum.world_dir(i), spectrum.gain[i], spectrum.tof[i],
                       spectrum.aod(i)});
    return out;
}

} // namespace thzrrf
