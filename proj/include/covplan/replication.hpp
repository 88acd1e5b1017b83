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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "covplan/conformal.hpp"
#include "covplan/error.hpp"
#include "covplan/finite_horizon.hpp"
#include "covplan/friedman.hpp"
#include "covplan/numeric.hpp"
#include "covplan/params.hpp"
#include "covplan/pipeline.hpp"
#include "covplan/rng.hpp"

namespace covplan::sim {

struct ReplicationConfig {
  std::size_t r = 100;  // training size
  std::size_t n = 10;   // calibration size
  std::size_t m = 500;  // horizon
  double alpha = 0.2;
  std::size_t replications = 2000;
  std::uint64_t master_seed = 0;
  ScorerConfig scorer;
  // 0 = std::thread::hardware_concurrency(). Never affects results.
  std::size_t workers = 0;
};

struct ReplicationSummary {
  std::int64_t horizon{};
  // Covered count k and realized coverage k/m, indexed by replication.
  std::vector<std::int64_t> covered;
  std::vector<double> coverages;
  // Frequency of each k in 0..m; sums to 1.
  std::vector<double> empirical_pmf;
  double mean_coverage{};
  double min_coverage{};
  // Fraction of replications with coverage strictly below 1 - alpha.
  double below_lower_bound_fraction{};
  // Replications whose calibration scores had exact ties.
  std::size_t tied_replications{};
};

/// Number of k in 0..m with k/m < level, i.e. ceil(level * m) with decimal
/// snapping (0.8 * 500 is 400, not 400.00000000000006).
inline std::int64_t successes_below(double level, std::int64_t m) {
  const double x = covplan::detail::snap_to_integer(level * static_cast<double>(m));
  return std::clamp<std::int64_t>(static_cast<std::int64_t>(std::ceil(x)), 0,
                                  m + 1);
}

/// Exact P(C_m < 1 - alpha) under the finite-horizon law.
inline double exact_below_lower_bound(const FiniteHorizonPmf& pmf) {
  return pmf.mass_below(
      successes_below(1.0 - pmf.params().alpha(), pmf.horizon()));
}

struct ReplicationOutcome {
  std::int64_t covered;
  bool tied;
};

/// One replication: its own seed, one shared shift w ~ Exp(1), then
/// r + n + m Friedman rows split into training / calibration / future.
inline ReplicationOutcome run_one_replication(const ReplicationConfig& config,
                                              std::uint64_t index) {
  const std::uint64_t seed = mix_seed(config.master_seed, index);
  Rng shift_rng(mix_seed(seed, 0));
  const double w = shift_rng.exponential();
  const auto data =
      friedman_generate(config.r + config.n + config.m, w, mix_seed(seed, 1));

  auto scorer = make_scorer(config.scorer, data.slice(0, config.r),
                            config.alpha);
  const auto cp = conformal::calibrate(
      std::move(scorer), data.slice(config.r, config.n), config.alpha, false);
  const auto z = conformal::coverage_indicators(
      cp, data.slice(config.r + config.n, config.m));
  return {conformal::count_covered(z), cp.tie_flag()};
}

/// Monte Carlo over independent replications of the exchangeable sequence.
/// Each replication depends only on (master_seed, index) and results are
/// gathered by index, so output is identical for any worker count.
inline ReplicationSummary run_replications(const ReplicationConfig& config) {
  if (config.r < 1 || config.n < 1 || config.m < 1 ||
      config.replications < 1) {
    throw InvalidArgument("r, n, m and replications must all be >= 1");
  }
  // Fail fast (and on the calling thread) on a degenerate calibration.
  derive_params(static_cast<std::int64_t>(config.n), config.alpha);

  const std::size_t reps = config.replications;
  std::vector<ReplicationOutcome> outcomes(reps);

  std::size_t workers = config.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, reps);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= reps) return;
      try {
        outcomes[i] = run_one_replication(config, i);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(reps);
        return;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  ReplicationSummary out;
  const auto m = static_cast<std::int64_t>(config.m);
  out.horizon = m;
  out.covered.resize(reps);
  out.coverages.resize(reps);
  out.empirical_pmf.assign(config.m + 1, 0.0);
  const std::int64_t below = successes_below(1.0 - config.alpha, m);
  std::vector<std::size_t> counts(config.m + 1, 0);
  std::size_t n_below = 0;
  std::int64_t total = 0;
  std::int64_t min_k = m;
  for (std::size_t i = 0; i < reps; ++i) {
    const std::int64_t k = outcomes[i].covered;
    out.covered[i] = k;
    out.coverages[i] = static_cast<double>(k) / static_cast<double>(m);
    ++counts[static_cast<std::size_t>(k)];
    total += k;
    min_k = std::min(min_k, k);
    if (k < below) ++n_below;
    if (outcomes[i].tied) ++out.tied_replications;
  }
  const auto dr = static_cast<double>(reps);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    out.empirical_pmf[k] = static_cast<double>(counts[k]) / dr;
  }
  out.mean_coverage =
      static_cast<double>(total) / (static_cast<double>(m) * dr);
  out.min_coverage = static_cast<double>(min_k) / static_cast<double>(m);
  out.below_lower_bound_fraction = static_cast<double>(n_below) / dr;
  return out;
}

/// sup_k |F_emp(k/m) - F(k/m)| over the support of the exact law.
inline double ks_distance(std::span<const double> coverages,
                          const FiniteHorizonPmf& theoretical) {
  if (coverages.empty()) throw InvalidArgument("no coverages to compare");
  std::vector<double> sorted(coverages.begin(), coverages.end());
  std::sort(sorted.begin(), sorted.end());
  const auto total = static_cast<double>(sorted.size());
  constexpr double kTol = 1e-12;

  double worst = 0.0;
  std::size_t seen = 0;
  CompensatedSum<double> cdf;
  for (std::int64_t k = 0; k <= theoretical.horizon(); ++k) {
    cdf += theoretical.prob(k);
    const double point = theoretical.coverage(k);
    while (seen < sorted.size() && sorted[seen] <= point + kTol) ++seen;
    const double emp = static_cast<double>(seen) / total;
    worst = std::max(worst, std::abs(emp - std::min(1.0, cdf.value())));
  }
  return worst;
}

}  // namespace covplan::sim
