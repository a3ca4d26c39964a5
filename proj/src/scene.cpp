// SPDX-License-Identifier: Apache-2.0

#include "thzrrf/scene.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thzrrf {

void Material::validate() const
{
    if (!(scattering_coefficient >= 0.0 && scattering_coefficient <= 1.0))
        throw std::invalid_argument("material '" + name + "': scattering_coefficient must be in [0, 1]");
    if (lobe_exponent < 1)
        throw std::invalid_argument("material '" + name + "': lobe_exponent must be >= 1");
    if (!(reflection_reduction >= 0.0 && reflection_reduction <= 1.0))
        throw std::invalid_argument("material '" + name + "': reflection_reduction must be in [0, 1]");
}

double Facet::area() const
{
    const double a = norm(cross(edge1(), edge2()));
    return shape == FacetShape::triangle ? 0.5 * a : a;
}

Vec3 Facet::centroid() const
{
    if (shape == FacetShape::triangle)
        return (vertices[0] + vertices[1] + vertices[2]) / 3.0;
    return point(0.5, 0.5);
}

std::optional<double> Facet::intersect(const Vec3& origin, const Vec3& dir, double t_min, double t_max) const
{
    // Moller-Trumbore, solving origin + t dir = v0 + s e1 + u e2.
    const Vec3 e1 = edge1();
    const Vec3 e2 = edge2();
    const Vec3 pvec = cross(dir, e2);
    const double det = dot(e1, pvec);
    if (std::abs(det) < 1e-15 * norm(dir) * norm(e1) * norm(e2))
        return std::nullopt;
    const double inv = 1.0 / det;
    const Vec3 tvec = origin - vertices[0];
    const double s = dot(tvec, pvec) * inv;
    if (s < 0.0 || s > 1.0)
        return std::nullopt;
    const Vec3 qvec = cross(tvec, e1);
    const double u = dot(dir, qvec) * inv;
    if (u < 0.0 || u > 1.0)
        return std::nullopt;
    if (shape == FacetShape::triangle && s + u > 1.0)
        return std::nullopt;
    const double t = dot(e2, qvec) * inv;
    if (t <= t_min || t >= t_max)
        return std::nullopt;
    return t;
}

Facet make_facet(const std::array<Vec3, 3>& vertices, FacetShape shape, std::size_t material,
                 const std::optional<Vec3>& normal_hint)
{
    const Vec3 n = cross(vertices[1] - vertices[0], vertices[2] - vertices[0]);
    const double scale = norm(vertices[1] - vertices[0]) * norm(vertices[2] - vertices[0]);
    if (!(scale > 0.0) || !(norm(n) > 1e-12 * scale))
        throw std::invalid_argument("facet vertices are collinear");
    Facet f{vertices, shape, UnitDir(n), material};
    if (normal_hint) {
        const UnitDir hint(*normal_hint);
        const double c = dot(hint, f.normal);
        if (std::abs(std::abs(c) - 1.0) > 1e-6)
            throw std::invalid_argument("facet normal is not orthogonal to the facet plane");
        if (c < 0.0)
            f.normal = -f.normal;
    }
    return f;
}

void Aabb::expand(const Vec3& p)
{
    min = {std::min(min.x, p.x), std::min(min.y, p.y), std::min(min.z, p.z)};
    max = {std::max(max.x, p.x), std::max(max.y, p.y), std::max(max.z, p.z)};
}

Aabb Scene::bounds() const
{
    Aabb box{tx_position, tx_position};
    for (const auto& f : facets) {
        for (const auto& v : f.vertices)
            box.expand(v);
        if (f.shape == FacetShape::parallelogram)
            box.expand(f.point(1.0, 1.0));
    }
    return box;
}

void Scene::validate() const
{
    if (!(carrier_frequency > 0.0) || !std::isfinite(carrier_frequency))
        throw std::invalid_argument("scene: carrier frequency must be positive");
    if (!(facet_sample_density > 0.0))
        throw std::invalid_argument("scene: facet sample density must be positive");
    for (const auto& m : materials)
        m.validate();
    for (std::size_t i = 0; i < facets.size(); ++i)
        if (facets[i].material >= materials.size())
            throw std::invalid_argument("scene: facet " + std::to_string(i) + " references a missing material");
    if (sampling_volume) {
        const auto& v = *sampling_volume;
        if (v.min.x > v.max.x || v.min.y > v.max.y || v.min.z > v.max.z)
            throw std::invalid_argument("scene: sampling volume min corner exceeds max corner");
    }
}

std::vector<Vec3> facet_sample_points(const Facet& facet, double density)
{
    const double per_meter = std::sqrt(density);
    std::vector<Vec3> points;
    if (facet.shape == FacetShape::parallelogram) {
        const int n1 = std::max(1, static_cast<int>(std::ceil(norm(facet.edge1()) * per_meter)));
        const int n2 = std::max(1, static_cast<int>(std::ceil(norm(facet.edge2()) * per_meter)));
        points.reserve(static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2));
        for (int i = 0; i < n1; ++i)
            for (int j = 0; j < n2; ++j)
                points.push_back(facet.point((i + 0.5) / n1, (j + 0.5) / n2));
        return points;
    }
    // Centroids of the n^2 sub-triangles of a uniform barycentric subdivision.
    const int n = std::max(1, static_cast<int>(std::ceil(std::sqrt(facet.area() * density))));
    points.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; i + j < n; ++j) {
            points.push_back(facet.point((i + 1.0 / 3.0) / n, (j + 1.0 / 3.0) / n));
            if (i + j < n - 1)
                points.push_back(facet.point((i + 2.0 / 3.0) / n, (j + 2.0 / 3.0) / n));
        }
    }
    return points;
}

} // namespace thzrrf
