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
#include <span>
#include <utility>
#include <vector>

#include "covplan/error.hpp"
#include "covplan/numeric.hpp"
#include "covplan/params.hpp"

namespace covplan {

/// Law of the coverage C_m = k/m of m future observables, k = 0..m.
///
/// This is the beta-binomial distribution with shapes (black, gray):
///
///   P(C = k/m) = C(m,k) (b)_k (g)_{m-k} / (n+1)_m
///
/// with (x)_j the rising factorial. Stored as log-probabilities so horizons
/// of 10^5 and beyond neither overflow nor underflow.
class FiniteHorizonPmf {
 public:
  FiniteHorizonPmf(CoverageParams params, std::vector<double> log_probs)
      : params_(params), log_probs_(std::move(log_probs)) {
    if (log_probs_.size() < 2) {
      throw InvalidArgument("pmf needs at least two support points");
    }
  }

  [[nodiscard]] const CoverageParams& params() const noexcept {
    return params_;
  }
  [[nodiscard]] std::int64_t horizon() const noexcept {
    return static_cast<std::int64_t>(log_probs_.size()) - 1;
  }
  [[nodiscard]] std::span<const double> log_probs() const noexcept {
    return log_probs_;
  }
  [[nodiscard]] double log_prob(std::int64_t k) const {
    return log_probs_.at(static_cast<std::size_t>(k));
  }
  [[nodiscard]] double prob(std::int64_t k) const {
    return std::exp(log_prob(k));
  }
  [[nodiscard]] std::vector<double> probs() const {
    std::vector<double> out(log_probs_.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] = std::exp(log_probs_[k]);
    }
    return out;
  }
  /// Support point k/m.
  [[nodiscard]] double coverage(std::int64_t k) const noexcept {
    return static_cast<double>(k) / static_cast<double>(horizon());
  }

  /// P(C <= t), summed over support points k/m <= t.
  [[nodiscard]] double cdf(double t) const {
    const auto m = horizon();
    if (t < 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    // Largest k with k/m <= t, guarding against k/m rounding.
    auto kmax = static_cast<std::int64_t>(std::floor(t * static_cast<double>(m)));
    while (kmax + 1 <= m && coverage(kmax + 1) <= t) ++kmax;
    while (kmax >= 0 && coverage(kmax) > t) --kmax;
    CompensatedSum<double> s;
    for (std::int64_t k = 0; k <= kmax; ++k) s += prob(k);
    return std::min(1.0, s.value());
  }

  /// Probability mass on successes k < threshold_k.
  [[nodiscard]] double mass_below(std::int64_t threshold_k) const {
    CompensatedSum<double> s;
    for (std::int64_t k = 0; k < threshold_k && k <= horizon(); ++k) {
      s += prob(k);
    }
    return s.value();
  }

  [[nodiscard]] double total_mass() const { return mass_below(horizon() + 1); }

 private:
  CoverageParams params_;
  std::vector<double> log_probs_;
};

/// Exact law of the future coverage over a horizon of m observables.
/// All products are evaluated as log-gamma differences in extended precision.
inline FiniteHorizonPmf finite_horizon_pmf(const CoverageParams& params,
                                           std::int64_t m) {
  if (m < 1) {
    throw InvalidArgument("horizon m must be >= 1, got " + std::to_string(m));
  }
  const auto b = static_cast<long double>(params.black());
  const auto g = static_cast<long double>(params.gray());
  const auto n = static_cast<long double>(params.n());
  const auto mm = static_cast<long double>(m);

  const long double log_denominator = detail::log_rising(n + 1, mm);
  std::vector<double> log_probs(static_cast<std::size_t>(m) + 1);
  for (std::int64_t k = 0; k <= m; ++k) {
    const auto kk = static_cast<long double>(k);
    // Paired terms are summed before combining so that b == g gives
    // bit-identical log_probs[k] and log_probs[m - k].
    const long double log_binom =
        std::lgamma(mm + 1) -
        (std::lgamma(kk + 1) + std::lgamma(mm - kk + 1));
    const long double log_rising =
        detail::log_rising(b, kk) + detail::log_rising(g, mm - kk);
    const long double lp = log_binom + log_rising - log_denominator;
    // Extended-precision rounding can push a certain event a hair above 0.
    log_probs[static_cast<std::size_t>(k)] =
        static_cast<double>(std::min(lp, 0.0L));
  }
  return FiniteHorizonPmf(params, std::move(log_probs));
}

/// E[C] = sum_k (k/m) P(C = k/m). Equals black/(n+1) for every m.
inline double pmf_mean(const FiniteHorizonPmf& pmf) {
  CompensatedSum<double> s;
  for (std::int64_t k = 1; k <= pmf.horizon(); ++k) {
    s += pmf.coverage(k) * pmf.prob(k);
  }
  return s.value();
}

/// Exact mean black/(n+1) as a fraction.
inline Rational exact_mean(const CoverageParams& params) {
  return {params.black(), params.n() + 1};
}

}  // namespace covplan
