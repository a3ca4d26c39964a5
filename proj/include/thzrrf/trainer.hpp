// SPDX-License-Identifier: Apache-2.0
//
// RF training of the per-Gaussian SH gain coefficients against ground-truth
// path-gain spectra. Geometry stays frozen; gradients are analytic.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thzrrf/dataset.hpp"
#include "thzrrf/gaussian_field.hpp"
#include "thzrrf/metrics.hpp"
#include "thzrrf/renderer.hpp"

namespace thzrrf {

enum class LossKind { l2_db, l1_db };
enum class OptimizerKind { adam, sgd };

struct TrainConfig {
    double learning_rate = 0.05;
    int epochs = 200;
    LossKind loss = LossKind::l2_db;
    double db_floor = kDefaultDbFloor;
    std::uint64_t rng_seed = 1;
    std::size_t batch_size = 4;
    OptimizerKind optimizer = OptimizerKind::adam;
    /// Decoupled weight decay on every SH coefficient except band 0: each
    /// step shrinks them by lr * sh_decay. Not part of the loss.
    double sh_decay = 0.0;
    RenderMode mode = RenderMode::full_path;
    int checkpoint_every = 0; ///< epochs between checkpoints; 0 disables
    std::string checkpoint_path;

    /// Throws std::invalid_argument when learning_rate <= 0, epochs < 1,
    /// floor >= 0, batch_size == 0 or a negative sh_decay.
    void validate() const;
};

struct TrainReport {
    std::vector<double> loss_trace; ///< mean sample loss per epoch
    double train_psnr = 0.0;
    double train_ssim = 0.0;
    double seconds = 0.0;

    /// Compares everything except wall-clock time.
    bool same_results(const TrainReport& o) const
    {
        return loss_trace == o.loss_trace && train_psnr == o.train_psnr && train_ssim == o.train_ssim;
    }
};

/// Mean pixelwise loss between dB-clamped gain images. Optional per-pixel
/// weights multiply each pixel's term. Throws on grid mismatch.
double loss(const SpatialSpectrum& rendered, const SpatialSpectrum& truth, const TrainConfig& cfg,
            std::span<const double> weights = {});

/// Forward-pass record of one training sample: for every pixel the blend
/// weights alpha_k T_k of the radiating primitives, the distance gain, the
/// direct-path value, the SH basis of the ray direction and the target.
struct SampleCache {
    std::vector<std::uint32_t> term_begin; ///< size pixels + 1
    std::vector<std::uint32_t> term_index;
    std::vector<double> term_weight;
    std::vector<double> distance_gain;
    std::vector<double> direct_gain;
    std::vector<double> basis; ///< pixels x coeff_count
    std::vector<double> truth_db;
    std::vector<double> pixel_weight; ///< empty means all 1
    int coeffs = 0;

    std::size_t pixels() const { return distance_gain.size(); }
};

SampleCache build_cache(const GaussianField& field, const SpatialSpectrum& truth, const TrainConfig& cfg,
                        const RenderOptions& options, std::span<const double> pixel_weights = {});

/// Loss of a cached sample; when `grad` is non-empty the gradient with
/// respect to every gain_sh coefficient (primitive-major) is added to it,
/// scaled by `grad_scale`.
double cached_loss(const GaussianField& field, const SampleCache& cache, const TrainConfig& cfg,
                   std::span<double> grad = {}, double grad_scale = 1.0);

/// Exact gradient of loss(render_spectrum(field, sample pose), truth) with
/// respect to every gain_sh coefficient, flattened primitive-major.
std::vector<double> grad_sh(const GaussianField& field, const SpatialSpectrum& truth, const TrainConfig& cfg,
                            const RenderOptions& options, std::span<const double> pixel_weights = {});

/// Per-primitive mean view depth of the training rays whose pseudo-surface
/// is that primitive. Primitives never hit get the mean over hit ones.
/// Throws when the dataset is empty or no ray hits anything.
LegacyCalibration legacy_calibration(const GaussianField& field, std::span<const Sample> dataset,
                                     const SphericalGrid& grid);

struct TrainResult {
    GaussianField field;
    TrainReport report;
    std::optional<LegacyCalibration> calibration; ///< set in legacy mode
};

/// Fits gain_sh by mini-batch Adam (or plain gradient descent). Samples are
/// shuffled per epoch from cfg.rng_seed; per-sample gradients are summed in
/// sample order, so results are deterministic. In legacy mode the
/// calibration is computed from the dataset unless one is supplied.
/// Throws std::runtime_error if the loss becomes non-finite.
TrainResult train(const GaussianField& field, std::span<const Sample> dataset, const TrainConfig& cfg,
                  const LegacyCalibration* calibration = nullptr);

/// Render options matching a training configuration.
RenderOptions render_options(RenderMode mode, const LegacyCalibration* calibration);

} // namespace thzrrf
