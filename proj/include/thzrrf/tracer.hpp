// SPDX-License-Identifier: Apache-2.0
//
// Line-of-sight plus single-bounce scattering ray tracer that produces the
// ground-truth multipath components for a receiver position.

#pragma once

#include <optional>
#include <vector>

#include "thzrrf/math.hpp"
#include "thzrrf/scene.hpp"

namespace thzrrf {

/// One multipath component h(t) term.
struct Mpc {
    double amplitude = 0.0; ///< linear power gain
    double phase = 0.0;     ///< [rad], in [0, 2 pi)
    double delay = 0.0;     ///< [s]
    UnitDir aoa;            ///< direction from the receiver towards the arriving wave
    UnitDir aod;            ///< departure direction at the transmitter
    std::optional<Vec3> bounce_point; ///< empty for line of sight
    int facet = -1;                   ///< bounce facet index, -1 for line of sight

    bool is_los() const { return !bounce_point.has_value(); }
};

/// Directive-lobe scattering gain
///   reduction * S^2 * ((1 + cos psi) / 2)^alpha_R * cos theta_i
/// where psi is the angle between `outgoing` and the specular direction and
/// theta_i the incidence angle. Zero when `outgoing` leaves below the surface
/// or `incident` arrives from behind it.
double scattering_gain(const Material& material, const UnitDir& incident, const UnitDir& outgoing,
                       const UnitDir& normal);

/// Carrier phase of a path with the given delay, wrapped into [0, 2 pi).
double delay_phase(double carrier_frequency, double delay);

/// Tracer bound to one scene. Scatter sample points and their visibility
/// from the transmitter are computed once at construction.
class Tracer {
public:
    explicit Tracer(const Scene& scene);

    std::vector<Mpc> trace(const Vec3& rx) const;

    /// True when the open segment a-b crosses any facet other than `skip`.
    bool occluded(const Vec3& a, const Vec3& b, int skip = -1) const;

    std::size_t scatter_point_count() const { return points_.size(); }

private:
    struct ScatterPoint {
        Vec3 position;
        int facet;
        double tx_distance;
        UnitDir incident;
    };

    const Scene* scene_;
    std::vector<int> usable_facets_;
    std::vector<ScatterPoint> points_; // lit from the transmitter only
};

/// Convenience wrapper: Tracer(scene).trace(rx).
std::vector<Mpc> trace(const Scene& scene, const Vec3& rx);

} // namespace thzrrf
