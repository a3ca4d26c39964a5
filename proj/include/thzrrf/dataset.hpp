// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "thzrrf/scene.hpp"
#include "thzrrf/spectrum.hpp"
#include "thzrrf/tracer.hpp"

namespace thzrrf {

struct Sample {
    Vec3 rx_position;
    RotationQ rx_orientation;
    std::vector<Mpc> mpcs;
    SpatialSpectrum spectrum;
};

using Dataset = std::vector<Sample>;

/// Small deterministic generator (splitmix64) so that datasets are
/// bit-identical across standard library implementations.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

private:
    std::uint64_t state_;
};

/// Draws `n_rx` receiver positions uniformly from the scene's sampling
/// volume (identity orientation) and traces each one. Deterministic for a
/// fixed seed. Throws std::invalid_argument when the scene declares no
/// sampling volume.
Dataset generate_dataset(const Scene& scene, std::size_t n_rx, const SphericalGrid& grid, std::uint64_t rng_seed);

} // namespace thzrrf
