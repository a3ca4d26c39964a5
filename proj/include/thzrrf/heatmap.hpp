// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>

namespace thzrrf {

/// Writes a row-major scalar image as an 8-bit RGB PNG using a viridis-like
/// ramp: values at or below `lo` map to dark purple, values at or above `hi`
/// to yellow. `scale` nearest-neighbour upsamples each pixel. Throws IoError
/// on failure.
void write_heatmap_png(const std::filesystem::path& path, std::span<const double> values, int rows, int cols,
                       double lo, double hi, int scale = 8);

} // namespace thzrrf
