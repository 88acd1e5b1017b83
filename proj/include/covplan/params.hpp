// Copyright 2026 The covplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>

#include "covplan/error.hpp"
#include "covplan/numeric.hpp"

namespace covplan {

/// The two numbers that fully determine the coverage laws: calibration size
/// n and miscoverage alpha, together with the urn counts they induce.
///
///   black = ceil((1 - alpha)(n + 1))   rank of the calibration threshold
///   gray  = floor(alpha (n + 1))
///
/// black + gray == n + 1 always holds; gray is computed first and black is
/// taken as the complement so the identity survives floating point.
class CoverageParams {
 public:
  [[nodiscard]] std::int64_t n() const noexcept { return n_; }
  [[nodiscard]] double alpha() const noexcept { return alpha_; }
  [[nodiscard]] std::int64_t black() const noexcept { return black_; }
  [[nodiscard]] std::int64_t gray() const noexcept { return gray_; }

  friend CoverageParams derive_params(std::int64_t n, double alpha);
  friend bool operator==(const CoverageParams&,
                         const CoverageParams&) = default;

 private:
  CoverageParams(std::int64_t n, double alpha, std::int64_t b, std::int64_t g)
      : n_(n), alpha_(alpha), black_(b), gray_(g) {}

  std::int64_t n_;
  double alpha_;
  std::int64_t black_;
  std::int64_t gray_;
};

inline void validate_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument("alpha must lie in (0, 1), got " +
                          std::to_string(alpha));
  }
}

/// Number of gray balls, floor(alpha (n+1)); may be zero.
inline std::int64_t gray_count(std::int64_t n, double alpha) {
  const double v = detail::snap_to_integer(alpha * static_cast<double>(n + 1));
  return static_cast<std::int64_t>(std::floor(v));
}

/// Throws DegenerateCalibration when floor(alpha (n+1)) == 0.
inline CoverageParams derive_params(std::int64_t n, double alpha) {
  if (n < 1) {
    throw InvalidArgument("calibration size n must be >= 1, got " +
                          std::to_string(n));
  }
  validate_alpha(alpha);
  const std::int64_t g = gray_count(n, alpha);
  if (g < 1) throw DegenerateCalibration(n, alpha);
  if (g > n) {
    throw InvalidArgument("alpha too close to 1: threshold rank would be 0");
  }
  return CoverageParams(n, alpha, n + 1 - g, g);
}

}  // namespace covplan
