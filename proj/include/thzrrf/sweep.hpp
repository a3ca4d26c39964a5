// SPDX-License-Identifier: Apache-2.0
//
// Training-size sweep: both rendering variants are trained on nested
// training subsets and scored on one fixed held-out set.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "thzrrf/dataset.hpp"
#include "thzrrf/gaussian_field.hpp"
#include "thzrrf/metrics.hpp"
#include "thzrrf/trainer.hpp"

namespace thzrrf {

struct SweepConfig {
    std::vector<std::size_t> sizes;
    std::size_t test_size = 20;
    std::uint64_t split_seed = 7; ///< permutation of the pool into test / train
    TrainConfig train;            ///< mode is overridden per variant
    SeedParams seeding;
};

struct SweepRow {
    std::size_t size = 0;
    RenderMode variant = RenderMode::full_path;
    double psnr_mean = 0.0, psnr_min = 0.0, psnr_max = 0.0;
    double ssim_mean = 0.0, ssim_min = 0.0, ssim_max = 0.0;
    double train_seconds = 0.0;
    MetricReport report; ///< full per-sample breakdown on the test set
};

struct SweepSplit {
    std::vector<std::size_t> test;
    std::vector<std::size_t> train; ///< every training subset is a prefix
};

/// Seeded permutation of [0, pool): the first `test_size` entries are the
/// held-out set. Throws when the largest size does not fit next to it.
SweepSplit sweep_split(std::size_t pool, std::size_t test_size, std::size_t max_size, std::uint64_t seed);

/// Renders every sample pose of `test` with `field` and scores it.
MetricReport evaluate(const GaussianField& field, std::span<const Sample> test, const RenderOptions& options,
                      double db_floor = kDefaultDbFloor);

/// Rows ordered by size, full-path before legacy. Both variants start from
/// the same seeded field and training seed. Throws std::invalid_argument
/// for empty sizes, a zero size or sizes exceeding the pool.
std::vector<SweepRow> sweep(const Scene& scene, std::span<const Sample> pool, const SweepConfig& cfg);

const char* variant_name(RenderMode mode);

/// Comma-separated table with a header line.
std::string sweep_table(std::span<const SweepRow> rows);

} // namespace thzrrf
