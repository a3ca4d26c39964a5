// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "thzrrf/math.hpp"

namespace thzrrf {

inline constexpr int kMaxShDegree = 4;

/// Number of real SH coefficients up to and including `degree`.
constexpr int sh_count(int degree) { return (degree + 1) * (degree + 1); }

/// Real spherical-harmonic basis, orthonormal over the unit sphere, in
/// (l, m) lexicographic order with m running -l..l inside each band.
/// Throws std::invalid_argument for degree outside [0, 4].
std::vector<double> sh_basis(int degree, const UnitDir& d);

/// Same as above, writing into `out` (must hold sh_count(degree) values).
void sh_basis(int degree, const UnitDir& d, std::span<double> out);

} // namespace thzrrf
