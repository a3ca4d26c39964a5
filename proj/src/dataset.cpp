// SPDX-License-Identifier: Apache-2.0

#include "thzrrf/dataset.hpp"

#include <stdexcept>

#include "thzrrf/parallel.hpp"

namespace thzrrf {

Dataset generate_dataset(const Scene& scene, std::size_t n_rx, const SphericalGrid& grid, std::uint64_t rng_seed)
{
    if (!scene.sampling_volume)
        throw std::invalid_argument("generate_dataset: scene has no sampling volume");
    if (n_rx == 0)
        return {};
    const Aabb& vol = *scene.sampling_volume;
    SplitMix64 rng(rng_seed);
    Dataset out(n_rx);
    for (auto& s : out) {
        const double u = rng.uniform(), v = rng.uniform(), w = rng.uniform();
        s.rx_position = {vol.min.x + u * (vol.max.x - vol.min.x), vol.min.y + v * (vol.max.y - vol.min.y),
                         vol.min.z + w * (vol.max.z - vol.min.z)};
    }
    const Tracer tracer(scene);
    parallel_for(n_rx, [&](std::size_t i) {
        Sample& s = out[i];
        s.mpcs = tracer.trace(s.rx_position);
        s.spectrum = spectrum_from_mpcs(s.mpcs, grid, s.rx_orientation, s.rx_position);
    });
    return out;
}

} // namespace thzrrf
