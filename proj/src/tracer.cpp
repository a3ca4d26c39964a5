// SPDX-License-Identifier: Apache-2.0

#include "thzrrf/tracer.hpp"

#include <cmath>
#include <iostream>

namespace thzrrf {

namespace {
// Relative margin that keeps segment endpoints lying on a facet from
// counting as intersections.
constexpr double kSegmentEps = 1e-9;
} // namespace

double scattering_gain(const Material& material, const UnitDir& incident, const UnitDir& outgoing,
                       const UnitDir& normal)
{
    const double cos_in = -dot(incident, normal);
    if (!(cos_in > 0.0) || !(dot(outgoing, normal) > 0.0))
        return 0.0;
    const Vec3 specular = incident.vec() + 2.0 * cos_in * normal.vec();
    const double cos_psi = std::clamp(dot(specular, outgoing.vec()) / norm(specular), -1.0, 1.0);
    const double lobe = std::pow(0.5 * (1.0 + cos_psi), material.lobe_exponent);
    const double s = material.scattering_coefficient;
    return material.reflection_reduction * s * s * lobe * cos_in;
}

double delay_phase(double carrier_frequency, double delay)
{
    double phi = std::fmod(-2.0 * kPi * carrier_frequency * delay, 2.0 * kPi);
    if (phi < 0.0)
        phi += 2.0 * kPi;
    if (phi >= 2.0 * kPi)
        phi = 0.0;
    return phi;
}

Tracer::Tracer(const Scene& scene) : scene_(&scene)
{
    scene.validate();
    for (std::size_t i = 0; i < scene.facets.size(); ++i) {
        if (scene.facets[i].is_degenerate()) {
            std::cerr << "thzrrf: warning: skipping degenerate facet " << i << '\n';
            continue;
        }
        usable_facets_.push_back(static_cast<int>(i));
    }
    for (int fi : usable_facets_) {
        const Facet& f = scene.facets[static_cast<std::size_t>(fi)];
        for (const Vec3& p : facet_sample_points(f, scene.facet_sample_density)) {
            const Vec3 d = p - scene.tx_position;
            const double len = norm(d);
            if (!(len > 0.0))
                continue;
            const UnitDir incident(d);
            if (!(dot(incident, f.normal) < 0.0))
                continue; // transmitter behind the facet
            if (occluded(scene.tx_position, p, fi))
                continue;
            points_.push_back({p, fi, len, incident});
        }
    }
}

bool Tracer::occluded(const Vec3& a, const Vec3& b, int skip) const
{
    const Vec3 dir = b - a;
    for (int fi : usable_facets_) {
        if (fi == skip)
            continue;
        if (scene_->facets[static_cast<std::size_t>(fi)].intersect(a, dir, kSegmentEps, 1.0 - kSegmentEps))
            return true;
    }
    return false;
}

std::vector<Mpc> Tracer::trace(const Vec3& rx) const
{
    const Scene& scene = *scene_;
    const double lambda = scene.wavelength();
    std::vector<Mpc> out;

    const Vec3 to_tx = scene.tx_position - rx;
    const double d_los = norm(to_tx);
    if (d_los > 0.0 && !occluded(rx, scene.tx_position)) {
        Mpc m;
        m.amplitude = free_space_gain(lambda, d_los);
        m.delay = d_los / kSpeedOfLight;
        m.phase = delay_phase(scene.carrier_frequency, m.delay);
        m.aoa = UnitDir(to_tx);
        m.aod = -m.aoa;
        out.push_back(m);
    }

    for (const ScatterPoint& sp : points_) {
        const Facet& f = scene.facets[static_cast<std::size_t>(sp.facet)];
        const Vec3 to_rx = rx - sp.position;
        const double l2 = norm(to_rx);
        if (!(l2 > 0.0))
            continue;
        const UnitDir outgoing(to_rx);
        if (!(dot(outgoing, f.normal) > 0.0))
            continue;
        if (occluded(sp.position, rx, sp.facet))
            continue;
        const double total = sp.tx_distance + l2;
        Mpc m;
        m.amplitude = scattering_gain(scene.materials[f.material], sp.incident, outgoing, f.normal) *
                      free_space_gain(lambda, total);
        m.delay = total / kSpeedOfLight;
        m.phase = delay_phase(scene.carrier_frequency, m.delay);
        m.aoa = -outgoing;
        m.aod = sp.incident;
        m.bounce_point = sp.position;
        m.facet = sp.facet;
        out.push_back(m);
    }
    return out;
}

std::vector<Mpc> trace(const Scene& scene, const Vec3& rx) { return Tracer(scene).trace(rx); }

} // namespace thzrrf
