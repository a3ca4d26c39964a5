// SPDX-License-Identifier: Apache-2.0

#include "thzrrf/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "thzrrf/renderer.hpp"

namespace thzrrf {

SweepSplit sweep_split(std::size_t pool, std::size_t test_size, std::size_t max_size, std::uint64_t seed)
{
    if (test_size + max_size > pool)
        throw std::invalid_argument("sweep: training size " + std::to_string(max_size) + " plus " +
                                    std::to_string(test_size) + " test samples exceeds the pool of " +
                                    std::to_string(pool));
    std::vector<std::size_t> perm(pool);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    SplitMix64 rng(seed);
    for (std::size_t i = pool; i > 1; --i)
        std::swap(perm[i - 1], perm[rng.below(i)]);
    SweepSplit s;
    s.test.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(test_size));
    s.train.assign(perm.begin() + static_cast<std::ptrdiff_t>(test_size), perm.end());
    return s;
}

MetricReport evaluate(const GaussianField& field, std::span<const Sample> test, const RenderOptions& options,
                      double db_floor)
{
    std::vector<SpatialSpectrum> pred, truth;
    pred.reserve(test.size());
    truth.reserve(test.size());
    for (const Sample& s : test) {
        pred.push_back(render_spectrum(field, s.rx_position, s.rx_orientation, s.spectrum.grid, options));
        truth.push_back(s.spectrum);
    }
    return compare_spectra(pred, truth, db_floor);
}

std::vector<SweepRow> sweep(const Scene& scene, std::span<const Sample> pool, const SweepConfig& cfg)
{
    if (cfg.sizes.empty())
        throw std::invalid_argument("sweep: no training sizes");
    if (cfg.test_size == 0)
        throw std::invalid_argument("sweep: test size must be positive");
    if (std::find(cfg.sizes.begin(), cfg.sizes.end(), std::size_t{0}) != cfg.sizes.end())
        throw std::invalid_argument("sweep: training sizes must be positive");
    const std::size_t max_size = *std::max_element(cfg.sizes.begin(), cfg.sizes.end());
    const SweepSplit split = sweep_split(pool.size(), cfg.test_size, max_size, cfg.split_seed);

    std::vector<Sample> test;
    for (std::size_t i : split.test)
        test.push_back(pool[i]);
    const GaussianField seeded = seed_from_scene(scene, cfg.seeding);

    std::vector<std::size_t> sizes = cfg.sizes;
    std::sort(sizes.begin(), sizes.end());
    std::vector<SweepRow> rows;
    for (std::size_t n : sizes) {
        std::vector<Sample> train_set;
        for (std::size_t k = 0; k < n; ++k)
            train_set.push_back(pool[split.train[k]]);
        for (RenderMode mode : {RenderMode::full_path, RenderMode::legacy}) {
            TrainConfig tc = cfg.train;
            tc.mode = mode;
            tc.checkpoint_every = 0;
            const auto t0 = std::chrono::steady_clock::now();
            TrainResult r = train(seeded, train_set, tc);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            const LegacyCalibration* cal = r.calibration ? &*r.calibration : nullptr;
            SweepRow row;
            row.size = n;
            row.variant = mode;
            row.train_seconds = secs;
            row.report = evaluate(r.field, test, render_options(mode, cal), tc.db_floor);
            const auto& p = row.report.psnr_per_sample;
            const auto& q = row.report.ssim_per_sample;
            row.psnr_mean = row.report.psnr;
            row.ssim_mean = row.report.ssim;
            row.psnr_min = *std::min_element(p.begin(), p.end());
            row.psnr_max = *std::max_element(p.begin(), p.end());
            row.ssim_min = *std::min_element(q.begin(), q.end());
            row.ssim_max = *std::max_element(q.begin(), q.end());
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

const char* variant_name(RenderMode mode) { return mode == RenderMode::full_path ? "full_path" : "legacy"; }

std::string sweep_table(std::span<const SweepRow> rows)
{
    std::string out = "size,variant,psnr_mean,psnr_min,psnr_max,ssim_mean,ssim_min,ssim_max,train_seconds\n";
    char line[256];
    for (const SweepRow& r : rows) {
        std::snprintf(line, sizeof line, "%zu,%s,%.4f,%.4f,%.4f,%.5f,%.5f,%.5f,%.3f\n", r.size,
                      variant_name(r.variant), r.psnr_mean, r.psnr_min, r.psnr_max, r.ssim_mean, r.ssim_min,
                      r.ssim_max, r.train_seconds);
        out += line;
    }
    return out;
}

} // namespace thzrrf
