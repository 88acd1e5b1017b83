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
#include "covplan/limit.hpp"
#include "covplan/params.hpp"

namespace covplan {

inline constexpr std::int64_t kDefaultPlanMaxN = 1'000'000;

struct CalibrationPlan {
  std::int64_t n;
  // H(1-alpha+eps) - H(1-alpha-eps) at the chosen n.
  double achieved_probability;
};

/// P(|C_inf - (1 - alpha)| <= epsilon) for calibration size n.
inline double concentration_probability(const CoverageParams& params,
                                        double epsilon) {
  const LimitDistribution dist(params);
  const double target = 1.0 - params.alpha();
  return limit_cdf(dist, target + epsilon) - limit_cdf(dist, target - epsilon);
}

/// Smallest calibration size n whose limiting coverage lies within
/// epsilon of 1 - alpha with probability at least gamma.
///
/// The concentration probability is not monotone in n (it drops each time
/// floor(alpha (n+1)) steps up), so this is a linear scan from n = 1, not a
/// bisection. Sizes with floor(alpha (n+1)) == 0 are skipped.
inline CalibrationPlan plan_calibration_size(
    double alpha, double epsilon, double gamma,
    std::int64_t n_max = kDefaultPlanMaxN) {
  validate_alpha(alpha);
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgument("epsilon must be a positive finite number");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw InvalidArgument("gamma must lie in (0, 1)");
  }
  if (n_max < 1) throw InvalidArgument("n_max must be >= 1");

  for (std::int64_t n = 1; n <= n_max; ++n) {
    const std::int64_t g = gray_count(n, alpha);
    if (g < 1 || g > n) continue;
    const auto params = derive_params(n, alpha);
    const double p = concentration_probability(params, epsilon);
    if (p >= gamma) return {n, p};
  }
  throw PlanNotFound(n_max);
}

}  // namespace covplan
