// SPDX-License-Identifier: Apache-2.0

#include "thzrrf/gaussian_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thzrrf {

RayGaussianHit intersect(const GaussianPrimitive& g, const Ray& ray, double t_max)
{
    // Work in the Gaussian's whitened frame where the covariance is identity.
    const RotationQ inv = g.rotation.conjugate();
    const Vec3 o_local = inv.rotate(ray.origin - g.center);
    const Vec3 d_local = inv.rotate(ray.dir.vec());
    const Vec3 o{o_local.x / g.scale.x, o_local.y / g.scale.y, o_local.z / g.scale.z};
    const Vec3 d{d_local.x / g.scale.x, d_local.y / g.scale.y, d_local.z / g.scale.z};
    const double dd = dot(d, d);
    double t = dd > 0.0 ? -dot(o, d) / dd : 0.0;
    t = std::clamp(t, 0.0, t_max);
    const Vec3 m = o + t * d;
    return {g.density * std::exp(-0.5 * dot(m, m)), t};
}

double effective_density(const GaussianPrimitive& g, const Ray& ray) { return intersect(g, ray).density; }

double cutoff_radius(const GaussianPrimitive& g)
{
    if (!(g.density > kDensityCutoff))
        return 0.0;
    return std::sqrt(2.0 * std::log(g.density / kDensityCutoff));
}

double decoded_gain(const GaussianPrimitive& g, std::span<const double> basis)
{
    double s = 0.0;
    for (std::size_t i = 0; i < g.gain_sh.size(); ++i)
        s += g.gain_sh[i] * basis[i];
    return std::exp(s);
}

double decoded_gain(const GaussianPrimitive& g, int degree, const UnitDir& d)
{
    return decoded_gain(g, sh_basis(degree, d));
}

void GaussianField::validate() const
{
    if (sh_degree < 0 || sh_degree > kMaxShDegree)
        throw std::invalid_argument("field: SH degree must be in [0, 4]");
    const auto k = static_cast<std::size_t>(coeff_count());
    for (const auto& g : primitives) {
        if (!(g.scale.x > 0.0 && g.scale.y > 0.0 && g.scale.z > 0.0))
            throw std::invalid_argument("field: primitive scales must be positive");
        if (!(g.density >= 0.0))
            throw std::invalid_argument("field: primitive density must be non-negative");
        if (g.gain_sh.size() != k)
            throw std::invalid_argument("field: SH coefficient count does not match degree");
    }
    if (!(carrier_frequency > 0.0))
        throw std::invalid_argument("field: carrier frequency must be positive");
}

std::vector<Vec3> facet_grid_points(const Facet& facet, double spacing)
{
    if (!(spacing > 0.0))
        throw std::invalid_argument("seed: spacing must be positive");
    return facet_sample_points(facet, 1.0 / (spacing * spacing));
}

GaussianField seed_from_scene(const Scene& scene, const SeedParams& params)
{
    if (scene.facets.empty())
        throw std::invalid_argument("seed: no facets");
    if (!(params.spacing > 0.0))
        throw std::invalid_argument("seed: spacing must be positive");
    if (!(params.init_scale > 0.0) || !(params.normal_scale_ratio > 0.0) || params.normal_scale_ratio > 1.0)
        throw std::invalid_argument("seed: scale parameters must be positive (normal ratio <= 1)");
    if (!(params.init_density >= 0.0) || !(params.init_gain > 0.0))
        throw std::invalid_argument("seed: density must be >= 0 and initial gain > 0");
    if (params.sh_degree < 0 || params.sh_degree > kMaxShDegree)
        throw std::invalid_argument("seed: SH degree must be in [0, 4]");

    GaussianField field;
    field.sh_degree = params.sh_degree;
    field.tx_position = scene.tx_position;
    field.carrier_frequency = scene.carrier_frequency;
    field.seeding = params;

    std::vector<double> sh(static_cast<std::size_t>(sh_count(params.sh_degree)), 0.0);
    sh[0] = std::log(params.init_gain) / sh_basis(0, UnitDir{})[0];
    const Vec3 scale{params.init_scale, params.init_scale, params.init_scale * params.normal_scale_ratio};

    for (const Facet& f : scene.facets) {
        if (f.is_degenerate())
            continue;
        const UnitDir u(f.edge1());
        const Vec3 n = f.normal.vec();
        const Vec3 v = cross(n, u.vec());
        const RotationQ q = RotationQ::from_frame(u.vec(), v, n);
        for (const Vec3& p : facet_grid_points(f, params.spacing))
            field.primitives.push_back({p, scale, q, params.init_density, sh});
    }
    if (field.primitives.empty())
        throw std::invalid_argument("seed: no facets");
    return field;
}

} // namespace thzrrf
