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
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "covplan/conformal.hpp"
#include "covplan/error.hpp"
#include "covplan/finite_horizon.hpp"
#include "covplan/params.hpp"
#include "covplan/rng.hpp"

namespace covplan::sim {

using ExactRational = boost::multiprecision::cpp_rational;

inline constexpr std::int64_t kOracleMaxHorizon = 64;

/// Pólya urn: draw a ball, return it with one more of the same colour.
/// Black draws are covered observations.
struct UrnState {
  std::int64_t black;
  std::int64_t gray;

  explicit UrnState(const CoverageParams& p)
      : black(p.black()), gray(p.gray()) {}

  [[nodiscard]] std::int64_t total() const noexcept { return black + gray; }
  void add(bool black_drawn) noexcept { ++(black_drawn ? black : gray); }
};

/// Law of the number of black draws in m urn steps, by dynamic programming
/// over (draws, successes) in exact rational arithmetic:
///   p(t+1, s+1) += p(t, s) (b + s)     / (n + 1 + t)
///   p(t+1, s)   += p(t, s) (g + t - s) / (n + 1 + t)
inline std::vector<ExactRational> urn_pmf_exact(const CoverageParams& params,
                                                std::int64_t m) {
  if (m < 1) throw InvalidArgument("horizon m must be >= 1");
  if (m > kOracleMaxHorizon) throw OracleTooLarge(m);
  const std::int64_t b = params.black();
  const std::int64_t g = params.gray();
  const std::int64_t n1 = params.n() + 1;

  std::vector<ExactRational> p(static_cast<std::size_t>(m) + 1);
  p[0] = 1;
  for (std::int64_t t = 0; t < m; ++t) {
    std::vector<ExactRational> next(p.size());
    const ExactRational total = n1 + t;
    for (std::int64_t s = 0; s <= t; ++s) {
      const auto& cur = p[static_cast<std::size_t>(s)];
      if (cur == 0) continue;
      next[static_cast<std::size_t>(s) + 1] += cur * (b + s) / total;
      next[static_cast<std::size_t>(s)] += cur * (g + t - s) / total;
    }
    p = std::move(next);
  }
  return p;
}

/// The exact urn law rounded into a FiniteHorizonPmf.
inline FiniteHorizonPmf urn_pmf_oracle(const CoverageParams& params,
                                       std::int64_t m) {
  const auto exact = urn_pmf_exact(params, m);
  std::vector<double> logs(exact.size());
  for (std::size_t k = 0; k < exact.size(); ++k) {
    logs[k] = std::log(exact[k].convert_to<double>());
  }
  return FiniteHorizonPmf(params, std::move(logs));
}

/// One realization of m urn draws; 1 = black.
inline conformal::Indicators urn_sample(const CoverageParams& params,
                                        std::int64_t m, std::uint64_t seed) {
  if (m < 1) throw InvalidArgument("horizon m must be >= 1");
  Rng rng(seed);
  UrnState urn(params);
  conformal::Indicators z(static_cast<std::size_t>(m));
  for (auto& zi : z) {
    const bool black = rng.uniform() * static_cast<double>(urn.total()) <
                       static_cast<double>(urn.black);
    urn.add(black);
    zi = black ? 1 : 0;
  }
  return z;
}

}  // namespace covplan::sim
