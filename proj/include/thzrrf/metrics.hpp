// SPDX-License-Identifier: Apache-2.0
//
// Image-quality metrics on dB-domain spectra.

#pragma once

#include <span>
#include <vector>

#include "thzrrf/spectrum.hpp"

namespace thzrrf {

/// PSNR reported for identical images (and the upper bound in general).
inline constexpr double kPsnrCap = 100.0;

/// Default dB floor; metrics use the range [floor, 0] dB.
inline constexpr double kDefaultDbFloor = -160.0;

/// 10 log10(R^2 / MSE), capped at kPsnrCap. Throws on size mismatch or R <= 0.
double psnr(std::span<const double> a, std::span<const double> b, double dynamic_range);

/// Mean SSIM over all valid window x window placements (uniform window,
/// sample covariances, C1 = (k1 R)^2, C2 = (k2 R)^2). Images are row-major
/// rows x cols. Throws on size mismatch, an even window, or a window larger
/// than the image.
double ssim(std::span<const double> a, std::span<const double> b, int rows, int cols, double dynamic_range,
            int window = 7, double k1 = 0.01, double k2 = 0.03);

struct MetricReport {
    double psnr = 0.0; ///< mean over samples [dB]
    double ssim = 0.0; ///< mean over samples
    std::vector<double> psnr_per_sample;
    std::vector<double> ssim_per_sample;
    double beam_error_deg = 0.0;       ///< mean top-1 AoA angular error
    double beam_within_one_bin = 0.0;  ///< fraction of samples with top-1 pixels at most one bin apart
};

/// Largest odd window <= `preferred` that fits the grid.
int fit_window(const SphericalGrid& grid, int preferred = 7);

/// Compares predicted and ground-truth spectra pairwise.
MetricReport compare_spectra(std::span<const SpatialSpectrum> predicted, std::span<const SpatialSpectrum> truth,
                             double db_floor = kDefaultDbFloor);

/// Chebyshev pixel distance with azimuth wrap-around.
int pixel_distance(const SphericalGrid& grid, Pixel a, Pixel b);

} // namespace thzrrf
