// SPDX-License-Identifier: Apache-2.0
//
// Receiver-side spatial spectrum rendering by depth-ordered alpha blending
// of Gaussian primitives:
//
//   p_recv = sum_k alpha_k T_k p_k,   T_k = exp(-sum_{j<k} alpha_j)
//   p_k    = (prod A_i) A_N,k(d) (lambda / (4 pi (l_prev + l_vd)))^2
//
// Path lengths come from the pseudo-surface point (the center of the
// Gaussian with the largest alpha_k T_k on the ray). In legacy mode the
// view depth is replaced by a per-Gaussian calibration depth, which is how
// a field that stores one value per outgoing ray behaves.

#pragma once

#include <optional>
#include <vector>

#include "thzrrf/gaussian_field.hpp"
#include "thzrrf/spectrum.hpp"

namespace thzrrf {

enum class RenderMode { full_path, legacy };

/// Blending stops once the transmittance drops below this.
inline constexpr double kTransmittanceCutoff = 1e-6;

/// Per-Gaussian calibration depth used by legacy rendering.
struct LegacyCalibration {
    std::vector<double> depth; ///< one entry per primitive [m]
};

struct RenderOptions {
    RenderMode mode = RenderMode::full_path;
    const LegacyCalibration* calibration = nullptr; ///< required in legacy mode
    /// Back-facing primitives occlude but do not radiate.
    bool one_sided = true;
    /// Overlay the analytic transmitter-to-receiver path on its pixel.
    bool direct_path = true;
};

/// Full-path record of one rendering ray.
struct PathContext {
    Vec3 pseudo_surface_point;
    double l_prev = 0.0;          ///< |pseudo_surface_point - tx| [m]
    double view_depth = 0.0;      ///< |pseudo_surface_point - rx| [m]
    UnitDir aod;                  ///< departure direction at the transmitter
    double cumulative_gain = 1.0; ///< prod of earlier interaction gains (single bounce: 1)
    std::size_t dominant = 0;     ///< index of the dominant primitive
};

struct RayBlendTerm {
    std::size_t index = 0;      ///< primitive index
    double alpha = 0.0;         ///< effective density
    double transmittance = 1.0; ///< T_k
    double depth = 0.0;         ///< ray parameter of closest approach [m]
    bool front_facing = true;
    double path_gain = 0.0;     ///< p_k, filled by rendering
};

/// Depth-sorted, transmittance-truncated terms of one ray plus its path
/// context (empty when no primitive exceeds the density cutoff).
struct RayTerms {
    std::vector<RayBlendTerm> terms;
    std::optional<PathContext> context;
};

struct RayResult {
    bool hit = false;
    double path_gain = 0.0;
    double tof = 0.0;
    UnitDir aod;
    RayTerms blend;
};

/// Brute-force term gathering over every primitive for one ray.
RayTerms gather_ray_terms(const GaussianField& field, const Vec3& rx, const UnitDir& d_render,
                          const RenderOptions& options = {});

/// Splatted term gathering for every pixel of a grid: each primitive is
/// projected to its conservative angular footprint and only those pixels
/// are evaluated. Produces exactly the terms gather_ray_terms would.
std::vector<RayTerms> gather_spectrum_terms(const GaussianField& field, const Vec3& rx, const RotationQ& orientation,
                                            const SphericalGrid& grid, const RenderOptions& options = {});

/// Pseudo-surface context of a ray, or nothing on a miss.
std::optional<PathContext> pseudo_surface(const GaussianField& field, const Ray& ray,
                                          const RenderOptions& options = {});

/// Total propagation length used for free-space loss and time of flight.
double path_length(const PathContext& ctx, const RenderOptions& options);

/// Evaluates blended path gain / ToF / AoD from gathered terms.
RayResult shade_ray(const GaussianField& field, RayTerms blend, const UnitDir& d_render, const RenderOptions& options);

/// Per-ray render (gather + shade).
RayResult render_ray(const GaussianField& field, const Vec3& rx, const UnitDir& d_render,
                     const RenderOptions& options = {});

struct DirectPath {
    UnitDir direction; ///< from the receiver towards the transmitter
    double gain = 0.0; ///< transmittance-weighted free-space gain
    double tof = 0.0;
    UnitDir aod;
};

/// Transmitter-to-receiver path attenuated by exp(-sum alpha) of the
/// primitives between them.
std::optional<DirectPath> direct_path(const GaussianField& field, const Vec3& rx);

/// Fast splatted spectrum render.
SpatialSpectrum render_spectrum(const GaussianField& field, const Vec3& rx, const RotationQ& orientation,
                                const SphericalGrid& grid, const RenderOptions& options = {});

/// Reference render calling render_ray for every pixel.
SpatialSpectrum render_spectrum_per_ray(const GaussianField& field, const Vec3& rx, const RotationQ& orientation,
                                        const SphericalGrid& grid, const RenderOptions& options = {});

/// Writes the direct path into its pixel when it is stronger than the
/// blended value there. Returns the touched pixel index, if any.
std::optional<std::size_t> overlay_direct_path(const GaussianField& field, SpatialSpectrum& spectrum);

} // namespace thzrrf
