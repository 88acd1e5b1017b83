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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>

#include "covplan/numeric.hpp"
#include "covplan/params.hpp"

namespace covplan {

/// Beta(black, gray): the almost-sure limit of the future coverage as the
/// horizon grows. Both shapes are integers and black + gray - 1 == n.
class LimitDistribution {
 public:
  explicit LimitDistribution(CoverageParams params) : params_(params) {}

  [[nodiscard]] const CoverageParams& params() const noexcept {
    return params_;
  }
  [[nodiscard]] std::int64_t shape_a() const noexcept {
    return params_.black();
  }
  [[nodiscard]] std::int64_t shape_b() const noexcept {
    return params_.gray();
  }

 private:
  CoverageParams params_;
};

namespace detail {

// P(Binomial(n, t) >= lo) for 0 < t < 1, summing only the terms that can
// matter in double precision. Terms are unimodal in j, so both walks away
// from the mode stop once a term drops below 2^-64 of the running sum.
inline double binomial_upper_tail(std::int64_t n, std::int64_t lo, double t) {
  if (lo <= 0) return 1.0;
  if (lo > n) return 0.0;
  const long double lt = std::log(static_cast<long double>(t));
  const long double l1t = std::log1p(-static_cast<long double>(t));
  const auto nn = static_cast<long double>(n);
  auto term = [&](std::int64_t j) {
    const auto jj = static_cast<long double>(j);
    return static_cast<double>(
        std::exp(log_choose(nn, jj) + jj * lt + (nn - jj) * l1t));
  };

  const auto mode = std::clamp<std::int64_t>(
      static_cast<std::int64_t>(std::floor((nn + 1) * t)), 0, n);
  const std::int64_t start = std::max(lo, mode);
  constexpr double kNegligible = 0x1p-64;

  CompensatedSum<double> sum;
  for (std::int64_t j = start; j <= n; ++j) {
    const double x = term(j);
    sum += x;
    if (j > mode && x <= kNegligible * sum.value()) break;
  }
  for (std::int64_t j = start - 1; j >= lo; --j) {
    const double x = term(j);
    sum += x;
    if (x <= kNegligible * sum.value()) break;
  }
  return std::min(1.0, sum.value());
}

}  // namespace detail

/// H(t) = P(C_inf <= t). Evaluated as the regularized incomplete beta
/// I_t(b, g) through its integer-shape identity
///   I_t(b, g) = sum_{j=b}^{n} C(n,j) t^j (1-t)^(n-j).
inline double limit_cdf(const LimitDistribution& dist, double t) {
  if (!(t > 0.0)) return 0.0;
  if (t >= 1.0) return 1.0;
  return detail::binomial_upper_tail(dist.params().n(), dist.shape_a(), t);
}

/// Beta(b, g) density, computed in log space.
inline double limit_pdf(const LimitDistribution& dist, double t) {
  if (!(t > 0.0 && t < 1.0)) {
    throw InvalidArgument("limit_pdf is defined on the open interval (0,1)");
  }
  const auto a = static_cast<long double>(dist.shape_a());
  const auto b = static_cast<long double>(dist.shape_b());
  const long double log_norm =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  const auto tt = static_cast<long double>(t);
  return static_cast<double>(std::exp(log_norm + (a - 1) * std::log(tt) +
                                      (b - 1) * std::log1p(-tt)));
}

struct LimitMoments {
  double mean;
  double variance;
  Rational mean_exact;
  // Absent when (n+1)^2 (n+2) overflows 64 bits.
  std::optional<Rational> variance_exact;
};

/// mean = b/(n+1), variance = b g / ((n+1)^2 (n+2)).
inline LimitMoments limit_moments(const LimitDistribution& dist) {
  const std::int64_t b = dist.shape_a();
  const std::int64_t g = dist.shape_b();
  const std::int64_t n1 = dist.params().n() + 1;

  LimitMoments out{};
  out.mean_exact = Rational(b, n1);
  out.mean = out.mean_exact.value();

  const auto nd = static_cast<double>(n1);
  out.variance = (static_cast<double>(b) / nd) * (static_cast<double>(g) / nd) /
                 (nd + 1.0);

  const auto num = detail::checked_mul(b, g);
  const auto sq = detail::checked_mul(n1, n1);
  if (num && sq) {
    if (const auto den = detail::checked_mul(*sq, n1 + 1)) {
      out.variance_exact = Rational(*num, *den);
    }
  }
  return out;
}

struct NormalApprox {
  double center;
  double variance;
};

/// Large-n approximation C_inf ~ N(1 - alpha, alpha (1 - alpha) / n).
inline NormalApprox limit_normal_approx(std::int64_t n, double alpha) {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  validate_alpha(alpha);
  return {1.0 - alpha, alpha * (1.0 - alpha) / static_cast<double>(n)};
}

}  // namespace covplan
