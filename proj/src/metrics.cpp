// SPDX-License-Identifier: Apache-2.0

#include "thzrrf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "thzrrf/channel.hpp"

namespace thzrrf {

double psnr(std::span<const double> a, std::span<const double> b, double dynamic_range)
{
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("psnr: image dimensions differ");
    if (!(dynamic_range > 0.0))
        throw std::invalid_argument("psnr: dynamic range must be positive");
    double mse = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        mse += d * d;
    }
    mse /= static_cast<double>(a.size());
    if (mse == 0.0)
        return kPsnrCap;
    return std::min(kPsnrCap, 10.0 * std::log10(dynamic_range * dynamic_range / mse));
}

double ssim(std::span<const double> a, std::span<const double> b, int rows, int cols, double dynamic_range,
            int window, double k1, double k2)
{
    if (a.size() != b.size() || a.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
        throw std::invalid_argument("ssim: image dimensions differ");
    if (window < 1 || window % 2 == 0)
        throw std::invalid_argument("ssim: window must be odd");
    if (window > rows || window > cols)
        throw std::invalid_argument("ssim: window larger than image");
    const double c1 = (k1 * dynamic_range) * (k1 * dynamic_range);
    const double c2 = (k2 * dynamic_range) * (k2 * dynamic_range);
    const double n = static_cast<double>(window) * window;
    const double cov_norm = n > 1.0 ? n / (n - 1.0) : 1.0;

    double total = 0.0;
    long count = 0;
    for (int r0 = 0; r0 + window <= rows; ++r0) {
        for (int c0 = 0; c0 + window <= cols; ++c0) {
            double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
            for (int r = r0; r < r0 + window; ++r) {
                for (int c = c0; c < c0 + window; ++c) {
                    const std::size_t i = static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
                                          static_cast<std::size_t>(c);
                    sa += a[i];
                    sb += b[i];
                    saa += a[i] * a[i];
                    sbb += b[i] * b[i];
                    sab += a[i] * b[i];
                }
            }
            const double ma = sa / n, mb = sb / n;
            const double va = cov_norm * (saa / n - ma * ma);
            const double vb = cov_norm * (sbb / n - mb * mb);
            const double cab = cov_norm * (sab / n - ma * mb);
            total += ((2.0 * ma * mb + c1) * (2.0 * cab + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

int fit_window(const SphericalGrid& grid, int preferred)
{
    int w = std::min({preferred, grid.rows(), grid.cols()});
    if (w % 2 == 0)
        --w;
    return std::max(w, 1);
}

int pixel_distance(const SphericalGrid& grid, Pixel a, Pixel b)
{
    const int dr = std::abs(a.row - b.row);
    int dc = std::abs(a.col - b.col);
    dc = std::min(dc, grid.cols() - dc);
    return std::max(dr, dc);
}

MetricReport compare_spectra(std::span<const SpatialSpectrum> predicted, std::span<const SpatialSpectrum> truth,
                             double db_floor)
{
    if (predicted.size() != truth.size() || predicted.empty())
        throw std::invalid_argument("compare_spectra: sample counts differ or are zero");
    const double range = -db_floor;
    MetricReport rep;
    double beam_err = 0.0;
    std::size_t beam_count = 0, beam_close = 0;
    for (std::size_t s = 0; s < predicted.size(); ++s) {
        const auto& p = predicted[s];
        const auto& t = truth[s];
        if (!(p.grid == t.grid))
            throw std::invalid_argument("compare_spectra: grid mismatch");
        const auto a = gain_db_image(p, db_floor);
        const auto b = gain_db_image(t, db_floor);
        rep.psnr_per_sample.push_back(psnr(a, b, range));
        rep.ssim_per_sample.push_back(ssim(a, b, p.grid.rows(), p.grid.cols(), range, fit_window(p.grid)));
        const auto bp = best_beams(p, 1);
        const auto bt = best_beams(t, 1);
        if (!bt.empty()) {
            ++beam_count;
            if (!bp.empty()) {
                beam_err += angle_between(bp[0].aoa, bt[0].aoa) * 180.0 / kPi;
                if (pixel_distance(p.grid, bp[0].pixel, bt[0].pixel) <= 1)
                    ++beam_close;
            } else {
                beam_err += 180.0;
            }
        }
    }
    const double n = static_cast<double>(predicted.size());
    for (std::size_t s = 0; s < predicted.size(); ++s) {
        rep.psnr += rep.psnr_per_sample[s] / n;
        rep.ssim += rep.ssim_per_sample[s] / n;
    }
    if (beam_count > 0) {
        rep.beam_error_deg = beam_err / static_cast<double>(beam_count);
        rep.beam_within_one_bin = static_cast<double>(beam_close) / static_cast<double>(beam_count);
    }
    return rep;
}

} // namespace thzrrf
