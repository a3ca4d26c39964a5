// SPDX-License-Identifier: Apache-2.0

#include "thzrrf/renderer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "thzrrf/parallel.hpp"

namespace thzrrf {

namespace {

RayBlendTerm make_term(const GaussianField& field, std::size_t i, const RayGaussianHit& hit, const UnitDir& d,
                       const RenderOptions& options)
{
    RayBlendTerm t;
    t.index = i;
    t.alpha = hit.density;
    t.depth = hit.depth;
    t.front_facing = !options.one_sided || dot(d, field.primitives[i].normal()) < 0.0;
    return t;
}

// Sorts by depth (index breaks ties), applies the transmittance recursion
// with truncation and picks the dominant term.
void finalize(const GaussianField& field, const Vec3& rx, const UnitDir& d_render, RayTerms& out)
{
    auto& terms = out.terms;
    std::sort(terms.begin(), terms.end(), [](const RayBlendTerm& a, const RayBlendTerm& b) {
        return a.depth < b.depth || (a.depth == b.depth && a.index < b.index);
    });
    double optical_depth = 0.0;
    std::size_t kept = 0;
    for (; kept < terms.size(); ++kept) {
        const double t = std::exp(-optical_depth);
        if (t < kTransmittanceCutoff)
            break;
        terms[kept].transmittance = t;
        optical_depth += terms[kept].alpha;
    }
    terms.resize(kept);
    if (terms.empty()) {
        out.context.reset();
        return;
    }
    std::size_t best = 0;
    double best_w = terms[0].alpha * terms[0].transmittance;
    for (std::size_t k = 1; k < terms.size(); ++k) {
        const double w = terms[k].alpha * terms[k].transmittance;
        if (w > best_w) {
            best_w = w;
            best = k;
        }
    }
    PathContext ctx;
    ctx.dominant = terms[best].index;
    ctx.pseudo_surface_point = field.primitives[ctx.dominant].center;
    const Vec3 from_tx = ctx.pseudo_surface_point - field.tx_position;
    ctx.l_prev = norm(from_tx);
    ctx.view_depth = distance(ctx.pseudo_surface_point, rx);
    ctx.aod = ctx.l_prev > 0.0 ? UnitDir(from_tx) : -d_render;
    out.context = ctx;
}

bool full_rows(double el_lo, double el_hi) { return el_hi >= 0.5 * kPi || el_lo <= -0.5 * kPi; }

} // namespace

RayTerms gather_ray_terms(const GaussianField& field, const Vec3& rx, const UnitDir& d_render,
                          const RenderOptions& options)
{
    RayTerms out;
    const Ray ray{rx, d_render};
    for (std::size_t i = 0; i < field.primitives.size(); ++i) {
        const RayGaussianHit hit = intersect(field.primitives[i], ray);
        if (hit.density >= kDensityCutoff)
            out.terms.push_back(make_term(field, i, hit, d_render, options));
    }
    finalize(field, rx, d_render, out);
    return out;
}

std::vector<RayTerms> gather_spectrum_terms(const GaussianField& field, const Vec3& rx, const RotationQ& orientation,
                                            const SphericalGrid& grid, const RenderOptions& options)
{
    const std::size_t n_pix = grid.size();
    std::vector<UnitDir> dirs(n_pix);
    for (std::size_t i = 0; i < n_pix; ++i)
        dirs[i] = orientation.rotate(grid.pixel_to_dir(grid.pixel(i)));

    std::vector<RayTerms> out(n_pix);
    const RotationQ to_local = orientation.conjugate();
    const int rows = grid.rows(), cols = grid.cols();

    auto visit = [&](std::size_t gi, int row, int col) {
        const std::size_t pi = grid.index({row, col});
        const RayGaussianHit hit = intersect(field.primitives[gi], Ray{rx, dirs[pi]});
        if (hit.density >= kDensityCutoff)
            out[pi].terms.push_back(make_term(field, gi, hit, dirs[pi], options));
    };

    for (std::size_t gi = 0; gi < field.primitives.size(); ++gi) {
        const GaussianPrimitive& g = field.primitives[gi];
        const double radius = cutoff_radius(g) * g.max_scale();
        if (!(radius > 0.0))
            continue;
        const Vec3 v = g.center - rx;
        const double dist = norm(v);
        int row_lo = 0, row_hi = rows - 1;
        bool all_cols = true;
        int col_lo = 0, col_span = cols;
        if (dist > radius * (1.0 + 1e-9)) {
            // Every point within `radius` of the center is seen inside a cone
            // of half-angle theta around the center direction.
            const double theta = std::asin(radius / dist);
            const UnitDir c(to_local.rotate(v));
            const double el_c = c.elevation(), az_c = c.azimuth();
            const double el_hi = el_c + theta, el_lo = el_c - theta;
            row_lo = std::max(0, grid.row_of_elevation(el_hi) - 1);
            row_hi = std::min(rows - 1, grid.row_of_elevation(el_lo) + 1);
            if (!full_rows(el_lo, el_hi)) {
                const double daz = std::asin(std::min(1.0, std::sin(theta) / std::cos(el_c)));
                if (2.0 * daz + 4.0 * grid.az_step() < 2.0 * kPi) {
                    all_cols = false;
                    col_lo = grid.col_of_azimuth(az_c - daz) - 1;
                    const int col_end = grid.col_of_azimuth(az_c + daz) + 1;
                    col_span = ((col_end - col_lo) % cols + cols) % cols + 1;
                    col_span = std::min(col_span, cols);
                }
            }
        }
        for (int r = row_lo; r <= row_hi; ++r) {
            if (all_cols) {
                for (int cc = 0; cc < cols; ++cc)
                    visit(gi, r, cc);
            } else {
                for (int k = 0; k < col_span; ++k)
                    visit(gi, r, ((col_lo + k) % cols + cols) % cols);
            }
        }
    }
    parallel_for(n_pix, [&](std::size_t i) { finalize(field, rx, dirs[i], out[i]); });
    return out;
}

std::optional<PathContext> pseudo_surface(const GaussianField& field, const Ray& ray, const RenderOptions& options)
{
    return gather_ray_terms(field, ray.origin, ray.dir, options).context;
}

double path_length(const PathContext& ctx, const RenderOptions& options)
{
    if (options.mode == RenderMode::full_path)
        return ctx.l_prev + ctx.view_depth;
    if (!options.calibration || ctx.dominant >= options.calibration->depth.size())
        throw std::invalid_argument("legacy rendering requires a calibration table covering every primitive");
    return ctx.l_prev + options.calibration->depth[ctx.dominant];
}

RayResult shade_ray(const GaussianField& field, RayTerms blend, const UnitDir& d_render, const RenderOptions& options)
{
    RayResult r;
    if (blend.context) {
        const PathContext& ctx = *blend.context;
        const double length = path_length(ctx, options);
        const double distance_gain = free_space_gain(field.wavelength(), length);
        std::vector<double> basis(static_cast<std::size_t>(field.coeff_count()));
        sh_basis(field.sh_degree, d_render, basis);
        double sum = 0.0;
        for (RayBlendTerm& t : blend.terms) {
            t.path_gain = t.front_facing
                              ? ctx.cumulative_gain * decoded_gain(field.primitives[t.index], basis) * distance_gain
                              : 0.0;
            sum += t.alpha * t.transmittance * t.path_gain;
        }
        if (sum > 0.0) {
            r.hit = true;
            r.path_gain = sum;
            r.tof = length / kSpeedOfLight;
            r.aod = ctx.aod;
        }
    }
    r.blend = std::move(blend);
    return r;
}

RayResult render_ray(const GaussianField& field, const Vec3& rx, const UnitDir& d_render, const RenderOptions& options)
{
    return shade_ray(field, gather_ray_terms(field, rx, d_render, options), d_render, options);
}

std::optional<DirectPath> direct_path(const GaussianField& field, const Vec3& rx)
{
    const Vec3 to_tx = field.tx_position - rx;
    const double d = norm(to_tx);
    if (!(d > 0.0))
        return std::nullopt;
    const Ray ray{rx, UnitDir(to_tx)};
    double optical_depth = 0.0;
    for (const auto& g : field.primitives) {
        const double a = intersect(g, ray, d).density;
        if (a >= kDensityCutoff)
            optical_depth += a;
    }
    DirectPath p;
    p.direction = ray.dir;
    p.gain = std::exp(-optical_depth) * free_space_gain(field.wavelength(), d);
    p.tof = d / kSpeedOfLight;
    p.aod = -ray.dir;
    return p;
}

std::optional<std::size_t> overlay_direct_path(const GaussianField& field, SpatialSpectrum& spectrum)
{
    const auto los = direct_path(field, spectrum.rx_position);
    if (!los || !(los->gain > 0.0))
        return std::nullopt;
    const std::size_t i =
        spectrum.grid.index(spectrum.grid.dir_to_pixel(spectrum.rx_orientation.conjugate().rotate(los->direction)));
    if (los->gain > spectrum.gain[i])
        spectrum.set(i, los->gain, los->tof, los->aod);
    return i;
}

namespace {

void store(SpatialSpectrum& s, std::size_t i, const RayResult& r)
{
    if (r.hit)
        s.set(i, r.path_gain, r.tof, r.aod);
    else
        s.clear(i);
}

} // namespace

SpatialSpectrum render_spectrum(const GaussianField& field, const Vec3& rx, const RotationQ& orientation,
                                const SphericalGrid& grid, const RenderOptions& options)
{
    std::vector<RayTerms> terms = gather_spectrum_terms(field, rx, orientation, grid, options);
    SpatialSpectrum s(grid, rx, orientation);
    parallel_for(grid.size(), [&](std::size_t i) {
        const UnitDir d = s.world_dir(i);
        store(s, i, shade_ray(field, std::move(terms[i]), d, options));
    });
    if (options.direct_path)
        overlay_direct_path(field, s);
    return s;
}

SpatialSpectrum render_spectrum_per_ray(const GaussianField& field, const Vec3& rx, const RotationQ& orientation,
                                        const SphericalGrid& grid, const RenderOptions& options)
{
    SpatialSpectrum s(grid, rx, orientation);
    for (std::size_t i = 0; i < grid.size(); ++i)
        store(s, i, render_ray(field, rx, s.world_dir(i), options));
    if (options.direct_path)
        overlay_direct_path(field, s);
    return s;
}

} // namespace thzrrf
