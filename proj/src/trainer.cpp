// SPDX-License-Identifier: Apache-2.0

#include "thzrrf/trainer.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "thzrrf/io.hpp"
#include "thzrrf/parallel.hpp"

namespace thzrrf {

namespace {

constexpr double kDbPerNeper = 10.0 / 2.302585092994046; // 10 / ln 10

double to_db(double gain, double floor_db)
{
    return gain > 0.0 ? std::max(10.0 * std::log10(gain), floor_db) : floor_db;
}

// Loss of one pixel and its derivative with respect to the rendered dB value.
std::pair<double, double> pixel_loss(double rendered_db, double truth_db, LossKind kind)
{
    const double d = rendered_db - truth_db;
    if (kind == LossKind::l2_db)
        return {d * d, 2.0 * d};
    return {std::abs(d), d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0)};
}

} // namespace

void TrainConfig::validate() const
{
    if (!(learning_rate > 0.0))
        throw std::invalid_argument("train config: learning_rate must be positive");
    if (epochs < 1)
        throw std::invalid_argument("train config: epochs must be >= 1");
    if (!(db_floor < 0.0))
        throw std::invalid_argument("train config: dB floor must be negative");
    if (batch_size == 0)
        throw std::invalid_argument("train config: batch_size must be >= 1");
    if (checkpoint_every < 0)
        throw std::invalid_argument("train config: checkpoint_every must be >= 0");
    if (!(sh_decay >= 0.0))
        throw std::invalid_argument("train config: sh_decay must be >= 0");
}

RenderOptions render_options(RenderMode mode, const LegacyCalibration* calibration)
{
    RenderOptions o;
    o.mode = mode;
    o.calibration = calibration;
    return o;
}

double loss(const SpatialSpectrum& rendered, const SpatialSpectrum& truth, const TrainConfig& cfg,
            std::span<const double> weights)
{
    if (!(rendered.grid == truth.grid))
        throw std::invalid_argument("loss: grid mismatch");
    if (!weights.empty() && weights.size() != truth.size())
        throw std::invalid_argument("loss: weight count does not match pixel count");
    double total = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        total += w * pixel_loss(to_db(rendered.gain[i], cfg.db_floor), to_db(truth.gain[i], cfg.db_floor), cfg.loss)
                         .first;
    }
    return total / static_cast<double>(truth.size());
}

SampleCache build_cache(const GaussianField& field, const SpatialSpectrum& truth, const TrainConfig& cfg,
                        const RenderOptions& options, std::span<const double> pixel_weights)
{
    if (!pixel_weights.empty() && pixel_weights.size() != truth.size())
        throw std::invalid_argument("build_cache: weight count does not match pixel count");
    const SphericalGrid& grid = truth.grid;
    const std::vector<RayTerms> rays =
        gather_spectrum_terms(field, truth.rx_position, truth.rx_orientation, grid, options);

    SampleCache c;
    c.coeffs = field.coeff_count();
    const std::size_t n = grid.size();
    const auto k = static_cast<std::size_t>(c.coeffs);
    c.term_begin.reserve(n + 1);
    c.distance_gain.assign(n, 0.0);
    c.direct_gain.assign(n, 0.0);
    c.basis.assign(n * k, 0.0);
    c.truth_db.resize(n);
    c.pixel_weight.assign(pixel_weights.begin(), pixel_weights.end());

    for (std::size_t i = 0; i < n; ++i) {
        c.term_begin.push_back(static_cast<std::uint32_t>(c.term_index.size()));
        c.truth_db[i] = to_db(truth.gain[i], cfg.db_floor);
        const RayTerms& r = rays[i];
        if (!r.context)
            continue;
        const UnitDir d = truth.world_dir(i);
        sh_basis(field.sh_degree, d, std::span<double>(c.basis).subspan(i * k, k));
        c.distance_gain[i] = free_space_gain(field.wavelength(), path_length(*r.context, options));
        for (const RayBlendTerm& t : r.terms) {
            if (!t.front_facing)
                continue;
            c.term_index.push_back(static_cast<std::uint32_t>(t.index));
            c.term_weight.push_back(t.alpha * t.transmittance * r.context->cumulative_gain);
        }
    }
    c.term_begin.push_back(static_cast<std::uint32_t>(c.term_index.size()));

    if (options.direct_path) {
        SpatialSpectrum probe(grid, truth.rx_position, truth.rx_orientation);
        if (const auto px = overlay_direct_path(field, probe))
            c.direct_gain[*px] = probe.gain[*px];
    }
    return c;
}

double cached_loss(const GaussianField& field, const SampleCache& c, const TrainConfig& cfg, std::span<double> grad,
                   double grad_scale)
{
    const std::size_t n = c.pixels();
    const auto k = static_cast<std::size_t>(c.coeffs);
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> gains;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t b = c.term_begin[i], e = c.term_begin[i + 1];
        const double* basis = c.basis.data() + i * k;
        gains.resize(e - b);
        double blended = 0.0;
        for (std::uint32_t t = b; t < e; ++t) {
            const auto& sh = field.primitives[c.term_index[t]].gain_sh;
            double s = 0.0;
            for (std::size_t j = 0; j < k; ++j)
                s += sh[j] * basis[j];
            gains[t - b] = std::exp(s);
            blended += c.term_weight[t] * gains[t - b];
        }
        const double scatter = blended * c.distance_gain[i];
        const bool direct_wins = c.direct_gain[i] > scatter;
        const double value = direct_wins ? c.direct_gain[i] : scatter;
        const double rendered_db = to_db(value, cfg.db_floor);
        const double w = c.pixel_weight.empty() ? 1.0 : c.pixel_weight[i];
        const auto [l, dl] = pixel_loss(rendered_db, c.truth_db[i], cfg.loss);
        total += w * l;
        if (grad.empty() || direct_wins || !(scatter > 0.0) || 10.0 * std::log10(scatter) < cfg.db_floor)
            continue;
        // d dB / d coeff_j = (10 / ln 10) * w_k A_k D Y_j / p
        const double scale = grad_scale * w * inv_n * dl * kDbPerNeper / blended;
        for (std::uint32_t t = b; t < e; ++t) {
            const double f = scale * c.term_weight[t] * gains[t - b];
            double* g = grad.data() + static_cast<std::size_t>(c.term_index[t]) * k;
            for (std::size_t j = 0; j < k; ++j)
                g[j] += f * basis[j];
        }
    }
    return total * inv_n;
}

std::vector<double> grad_sh(const GaussianField& field, const SpatialSpectrum& truth, const TrainConfig& cfg,
                            const RenderOptions& options, std::span<const double> pixel_weights)
{
    const SampleCache c = build_cache(field, truth, cfg, options, pixel_weights);
    std::vector<double> g(field.size() * static_cast<std::size_t>(field.coeff_count()), 0.0);
    cached_loss(field, c, cfg, g);
    return g;
}

LegacyCalibration legacy_calibration(const GaussianField& field, std::span<const Sample> dataset,
                                     const SphericalGrid& grid)
{
    if (dataset.empty())
        throw std::invalid_argument("legacy_calibration: empty dataset");
    std::vector<double> sum(field.size(), 0.0);
    std::vector<std::size_t> count(field.size(), 0);
    for (const Sample& s : dataset) {
        for (const RayTerms& r : gather_spectrum_terms(field, s.rx_position, s.rx_orientation, grid)) {
            if (!r.context)
                continue;
            sum[r.context->dominant] += r.context->view_depth;
            ++count[r.context->dominant];
        }
    }
    LegacyCalibration cal;
    cal.depth.assign(field.size(), 0.0);
    double mean_of_means = 0.0;
    std::size_t hit = 0;
    for (std::size_t i = 0; i < field.size(); ++i) {
        if (count[i] == 0)
            continue;
        cal.depth[i] = sum[i] / static_cast<double>(count[i]);
        mean_of_means += cal.depth[i];
        ++hit;
    }
    if (hit == 0)
        throw std::runtime_error("legacy_calibration: no training ray hit any primitive");
    mean_of_means /= static_cast<double>(hit);
    for (std::size_t i = 0; i < field.size(); ++i)
        if (count[i] == 0)
            cal.depth[i] = mean_of_means;
    return cal;
}

namespace {

class Optimizer {
public:
    Optimizer(const TrainConfig& cfg, std::size_t n) : cfg_(cfg), m_(n, 0.0), v_(n, 0.0) {}

    void step(GaussianField& field, std::span<const double> grad)
    {
        ++t_;
        const auto k = static_cast<std::size_t>(field.coeff_count());
        const double lr = cfg_.learning_rate;
        const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
        const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
        for (std::size_t gi = 0; gi < field.size(); ++gi) {
            auto& sh = field.primitives[gi].gain_sh;
            for (std::size_t j = 0; j < k; ++j) {
                const std::size_t p = gi * k + j;
                const double g = grad[p];
                if (j > 0)
                    sh[j] -= lr * cfg_.sh_decay * sh[j];
                if (cfg_.optimizer == OptimizerKind::sgd) {
                    sh[j] -= lr * g;
                    continue;
                }
                m_[p] = kBeta1 * m_[p] + (1.0 - kBeta1) * g;
                v_[p] = kBeta2 * v_[p] + (1.0 - kBeta2) * g * g;
                sh[j] -= lr * (m_[p] / c1) / (std::sqrt(v_[p] / c2) + kEps);
            }
        }
    }

private:
    static constexpr double kBeta1 = 0.9;
    static constexpr double kBeta2 = 0.999;
    static constexpr double kEps = 1e-8;

    const TrainConfig& cfg_;
    std::vector<double> m_, v_;
    long t_ = 0;
};

} // namespace

TrainResult train(const GaussianField& initial, std::span<const Sample> dataset, const TrainConfig& cfg,
                  const LegacyCalibration* calibration)
{
    cfg.validate();
    if (dataset.empty())
        throw std::invalid_argument("train: empty dataset");
    initial.validate();
    const auto start = std::chrono::steady_clock::now();

    TrainResult result{initial, {}, std::nullopt};
    GaussianField& field = result.field;
    const SphericalGrid& grid = dataset.front().spectrum.grid;
    if (cfg.mode == RenderMode::legacy) {
        result.calibration = calibration ? *calibration : legacy_calibration(field, dataset, grid);
        calibration = &*result.calibration;
    }
    const RenderOptions options = render_options(cfg.mode, calibration);

    std::vector<SampleCache> caches(dataset.size());
    parallel_for(dataset.size(),
                 [&](std::size_t i) { caches[i] = build_cache(field, dataset[i].spectrum, cfg, options); });

    const std::size_t n_params = field.size() * static_cast<std::size_t>(field.coeff_count());
    Optimizer opt(cfg, n_params);
    std::vector<double> grad(n_params);
    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    SplitMix64 rng(cfg.rng_seed);
    const bool threaded = thread_count() > 1;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.below(i)]);
        double epoch_loss = 0.0;
        for (std::size_t b = 0; b < order.size(); b += cfg.batch_size) {
            const std::size_t e = std::min(order.size(), b + cfg.batch_size);
            const double scale = 1.0 / static_cast<double>(e - b);
            std::fill(grad.begin(), grad.end(), 0.0);
            if (threaded) {
                std::vector<std::vector<double>> parts(e - b, std::vector<double>(n_params, 0.0));
                std::vector<double> losses(e - b);
                parallel_for(e - b, [&](std::size_t j) {
                    losses[j] = cached_loss(field, caches[order[b + j]], cfg, parts[j], scale);
                });
                for (std::size_t j = 0; j < e - b; ++j) {
                    epoch_loss += losses[j];
                    for (std::size_t p = 0; p < n_params; ++p)
                        grad[p] += parts[j][p];
                }
            } else {
                for (std::size_t j = b; j < e; ++j)
                    epoch_loss += cached_loss(field, caches[order[j]], cfg, grad, scale);
            }
            opt.step(field, grad);
        }
        epoch_loss /= static_cast<double>(dataset.size());
        if (!std::isfinite(epoch_loss))
            throw std::runtime_error("train: loss became non-finite at epoch " + std::to_string(epoch + 1));
        result.report.loss_trace.push_back(epoch_loss);
        if (cfg.checkpoint_every > 0 && !cfg.checkpoint_path.empty() && (epoch + 1) % cfg.checkpoint_every == 0)
            save_checkpoint(cfg.checkpoint_path, field, result.calibration ? &*result.calibration : nullptr);
    }

    std::vector<SpatialSpectrum> rendered, truth;
    for (const Sample& s : dataset) {
        rendered.push_back(render_spectrum(field, s.rx_position, s.rx_orientation, grid, options));
        truth.push_back(s.spectrum);
    }
    const MetricReport m = compare_spectra(rendered, truth, cfg.db_floor);
    result.report.train_psnr = m.psnr;
    result.report.train_ssim = m.ssim;
    result.report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

} // namespace thzrrf
