// SPDX-License-Identifier: Apache-2.0

#include "thzrrf/heatmap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <vector>

#include <png.h>

#include "thzrrf/io.hpp"

namespace thzrrf {

namespace {

// Viridis sampled at 9 evenly spaced stops.
constexpr std::array<std::array<double, 3>, 9> kRamp{{{68, 1, 84},
                                                      {71, 44, 122},
                                                      {59, 81, 139},
                                                      {44, 113, 142},
                                                      {33, 144, 141},
                                                      {39, 173, 129},
                                                      {92, 200, 99},
                                                      {170, 220, 50},
                                                      {253, 231, 37}}};

std::array<unsigned char, 3> color(double v, double lo, double hi)
{
    double t = hi > lo ? (v - lo) / (hi - lo) : 0.0;
    t = std::isfinite(t) ? std::clamp(t, 0.0, 1.0) : 0.0;
    const double x = t * (kRamp.size() - 1);
    const auto i = std::min(static_cast<std::size_t>(x), kRamp.size() - 2);
    const double f = x - static_cast<double>(i);
    std::array<unsigned char, 3> c{};
    for (int k = 0; k < 3; ++k)
        c[k] = static_cast<unsigned char>(std::lround(kRamp[i][k] * (1 - f) + kRamp[i + 1][k] * f));
    return c;
}

} // namespace

void write_heatmap_png(const std::filesystem::path& path, std::span<const double> values, int rows, int cols,
                       double lo, double hi, int scale)
{
    if (rows < 1 || cols < 1 || values.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
        throw IoError("heatmap: image size does not match data");
    scale = std::max(scale, 1);
    const int w = cols * scale, h = rows * scale;
    std::vector<unsigned char> img(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const auto c = color(values[static_cast<std::size_t>(y / scale) * static_cast<std::size_t>(cols) +
                                        static_cast<std::size_t>(x / scale)],
                                 lo, hi);
            std::copy(c.begin(), c.end(), img.begin() + (static_cast<std::ptrdiff_t>(y) * w + x) * 3);
        }

    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::FILE* fp = std::fopen(path.string().c_str(), "wb");
    if (!fp)
        throw IoError("heatmap: cannot open '" + path.string() + "'");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info || setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw IoError("heatmap: libpng failed writing '" + path.string() + "'");
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < h; ++y)
        png_write_row(png, img.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(w) * 3);
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

} // namespace thzrrf
