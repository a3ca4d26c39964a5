// SPDX-License-Identifier: Apache-2.0
//
// Scene description: planar facets with THz scattering materials plus the
// transmitter configuration.

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "thzrrf/math.hpp"

namespace thzrrf {

/// Directive-lobe scattering parameters of a surface.
struct Material {
    std::string name;
    double scattering_coefficient = 0.5; ///< S in [0, 1]
    int lobe_exponent = 4;               ///< alpha_R >= 1
    double reflection_reduction = 1.0;   ///< fraction of power kept after roughness loss, in [0, 1]

    void validate() const;
};

enum class FacetShape {
    triangle,      ///< v0, v1, v2
    parallelogram, ///< v0 + s (v1 - v0) + t (v2 - v0), s, t in [0, 1]
};

/// Planar one-sided facet. Scattering only leaves through the side the
/// normal points to.
struct Facet {
    std::array<Vec3, 3> vertices;
    FacetShape shape = FacetShape::triangle;
    UnitDir normal;
    std::size_t material = 0;

    Vec3 edge1() const { return vertices[1] - vertices[0]; }
    Vec3 edge2() const { return vertices[2] - vertices[0]; }
    double area() const;
    Vec3 centroid() const;
    Vec3 point(double s, double t) const { return vertices[0] + s * edge1() + t * edge2(); }
    bool is_degenerate() const { return area() < 1e-12; }

    /// Ray/segment parameter of the first intersection with this facet, or
    /// nothing. `dir` need not be normalized; hits are reported for
    /// t in (t_min, t_max).
    std::optional<double> intersect(const Vec3& origin, const Vec3& dir, double t_min, double t_max) const;
};

/// Builds a facet from its vertices. The normal is the right-handed
/// (v1 - v0) x (v2 - v0) direction, flipped to agree with `normal_hint`
/// when one is given. Throws on collinear vertices or a hint that is not
/// orthogonal to the plane (within 1e-6).
Facet make_facet(const std::array<Vec3, 3>& vertices, FacetShape shape, std::size_t material,
                 const std::optional<Vec3>& normal_hint = std::nullopt);

struct Aabb {
    Vec3 min;
    Vec3 max;

    bool contains(const Vec3& p) const
    {
        return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z && p.z <= max.z;
    }
    void expand(const Vec3& p);
    Aabb inflated(double margin) const
    {
        return {min - Vec3{margin, margin, margin}, max + Vec3{margin, margin, margin}};
    }
};

struct Scene {
    std::vector<Material> materials;
    std::vector<Facet> facets;
    Vec3 tx_position;
    double carrier_frequency = 300e9; ///< [Hz]
    std::optional<Aabb> sampling_volume;
    double facet_sample_density = 400.0; ///< scattering sample points per m^2

    double wavelength() const { return kSpeedOfLight / carrier_frequency; }

    /// Bounding box of all facet vertices and the transmitter.
    Aabb bounds() const;

    /// Throws std::invalid_argument when a facet references a missing
    /// material, a material is out of range, or the carrier is not positive.
    void validate() const;
};

/// Scattering sample points of a facet: the centers of a regular grid
/// (parallelograms) or of a regular barycentric subdivision (triangles)
/// with roughly `density` points per m^2. Always at least one point.
std::vector<Vec3> facet_sample_points(const Facet& facet, double density);

/// Free-space path gain (lambda / (4 pi d))^2.
inline double free_space_gain(double wavelength, double path_length)
{
    const double f = wavelength / (4.0 * kPi * path_length);
    return f * f;
}

} // namespace thzrrf
