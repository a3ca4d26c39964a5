// SPDX-License-Identifier: Apache-2.0
//
// Radio radiance field made of anisotropic 3D Gaussians. Geometry (center,
// scale, rotation, density) is fixed after seeding; only the log-domain SH
// gain coefficients are learned.

#pragma once

#include <limits>
#include <span>
#include <vector>

#include "thzrrf/math.hpp"
#include "thzrrf/scene.hpp"
#include "thzrrf/sh.hpp"

namespace thzrrf {

/// Effective densities below this are treated as zero by every renderer.
inline constexpr double kDensityCutoff = 1e-8;

struct Ray {
    Vec3 origin;
    UnitDir dir;
};

/// One Gaussian primitive. The local +z axis (rotation applied to e_z) is
/// the surface normal of the facet it was seeded from; radiance leaves only
/// through that hemisphere.
struct GaussianPrimitive {
    Vec3 center;
    Vec3 scale{1.0, 1.0, 1.0}; ///< per-axis standard deviation [m]
    RotationQ rotation;
    double density = 1.0;        ///< base density alpha_g
    std::vector<double> gain_sh; ///< log-domain directional gain A_N

    Vec3 normal() const { return rotation.rotate(Vec3{0.0, 0.0, 1.0}); }
    double max_scale() const { return std::max({scale.x, scale.y, scale.z}); }

    bool operator==(const GaussianPrimitive&) const = default;
};

/// Closest approach of a ray to a Gaussian in the Gaussian's own metric.
struct RayGaussianHit {
    double density = 0.0; ///< alpha_g * exp(-m^2 / 2)
    double depth = 0.0;   ///< ray parameter of the closest approach [m]
};

/// Peak density of `g` along the ray (parameter clamped to [0, t_max]).
RayGaussianHit intersect(const GaussianPrimitive& g, const Ray& ray,
                         double t_max = std::numeric_limits<double>::infinity());

/// alpha_g * exp(-m^2 / 2), m the Mahalanobis distance at closest approach.
double effective_density(const GaussianPrimitive& g, const Ray& ray);

/// Mahalanobis radius beyond which `g` falls below kDensityCutoff; 0 when
/// the base density itself is below the cutoff.
double cutoff_radius(const GaussianPrimitive& g);

/// exp(gain_sh . basis) for a precomputed basis of matching length.
double decoded_gain(const GaussianPrimitive& g, std::span<const double> basis);
/// exp(gain_sh . sh_basis(degree, d)).
double decoded_gain(const GaussianPrimitive& g, int degree, const UnitDir& d);

struct SeedParams {
    double spacing = 0.25;       ///< grid spacing on each facet [m]
    double init_density = 1.0;   ///< alpha_g of every seeded primitive
    double init_scale = 0.15;    ///< tangential standard deviation [m]
    double normal_scale_ratio = 0.1; ///< normal-axis scale as a fraction of init_scale
    double init_gain = 0.01;     ///< decoded gain right after seeding
    int sh_degree = 3;
};

struct GaussianField {
    std::vector<GaussianPrimitive> primitives;
    int sh_degree = 3;
    Vec3 tx_position;
    double carrier_frequency = 300e9;
    SeedParams seeding; ///< parameters used at seeding (not persisted)

    double wavelength() const { return kSpeedOfLight / carrier_frequency; }
    std::size_t size() const { return primitives.size(); }
    int coeff_count() const { return sh_count(sh_degree); }

    /// Throws std::invalid_argument on non-positive scales, negative
    /// densities, wrong coefficient counts or an SH degree outside [0, 4].
    void validate() const;

    bool operator==(const GaussianField& o) const
    {
        return primitives == o.primitives && sh_degree == o.sh_degree && tx_position == o.tx_position &&
               carrier_frequency == o.carrier_frequency;
    }
};

/// One flattened Gaussian per facet grid point (cell centers of a grid with
/// the given spacing, at least the facet centroid), smallest axis along the
/// facet normal, SH set so the decoded gain is `init_gain` everywhere.
/// Deterministic. Throws std::invalid_argument for an empty scene or a
/// non-positive spacing.
GaussianField seed_from_scene(const Scene& scene, const SeedParams& params);

/// Grid points used by seed_from_scene for one facet.
std::vector<Vec3> facet_grid_points(const Facet& facet, double spacing);

} // namespace thzrrf
