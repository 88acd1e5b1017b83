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
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "covplan/dataset.hpp"
#include "covplan/error.hpp"
#include "covplan/models.hpp"
#include "covplan/numeric.hpp"
#include "covplan/params.hpp"

namespace covplan {

using WarningHandler = std::function<void(std::string_view)>;

namespace detail {
inline WarningHandler& warning_handler() {
  static WarningHandler handler = [](std::string_view msg) {
    std::clog << "covplan: warning: " << msg << '\n';
  };
  return handler;
}
}  // namespace detail

/// Replaces the sink for non-fatal diagnostics (default: std::clog). Not
/// synchronized; set it before starting worker threads.
inline void set_warning_handler(WarningHandler handler) {
  detail::warning_handler() = std::move(handler);
}

inline void warn(std::string_view msg) {
  if (detail::warning_handler()) detail::warning_handler()(msg);
}

}  // namespace covplan

namespace covplan::conformal {

using models::Regressor;

/// |y - psi(x)|
template <Regressor M>
struct Standard {
  M psi;
};

/// |y - psi(x)| / sigma(x)
template <Regressor M>
struct LocallyWeighted {
  M psi;
  M sigma;
};

/// max{lo(x) - y, y - hi(x)}; negative inside the quantile band.
template <Regressor M>
struct Cqr {
  M lo;
  M hi;
};

enum class ScoreKind { kStandard, kLocallyWeighted, kCqr };

/// Open interval (lower, upper). Endpoints are the first excluded doubles on
/// either side, so contains(y) agrees with the score comparison for every
/// double y, not just up to rounding.
struct PredictionInterval {
  double lower;
  double upper;

  [[nodiscard]] bool contains(double y) const noexcept {
    return lower < y && y < upper;
  }
  /// True when no double lies strictly between the endpoints.
  [[nodiscard]] bool empty() const noexcept {
    return !(std::nextafter(lower, std::numeric_limits<double>::infinity()) <
             upper);
  }
};

namespace detail {

// Order-preserving map between doubles and integers (-0.0 folds onto +0.0).
inline std::int64_t ordered_key(double x) noexcept {
  const auto bits = std::bit_cast<std::int64_t>(x);
  return bits >= 0 ? bits : -(bits & std::numeric_limits<std::int64_t>::max());
}
inline double from_ordered_key(std::int64_t k) noexcept {
  if (k >= 0) return std::bit_cast<double>(k);
  return std::bit_cast<double>((-k) | std::numeric_limits<std::int64_t>::min());
}

// Smallest double y in [-inf, +inf] with pred(y) true, for a predicate that is
// monotone (false ... false true ... true) and true at +inf. Starts from
// guess and gallops, so near-exact guesses cost a handful of evaluations.
// Signed keys span nearly 2^64, so distances and midpoints are computed in
// unsigned arithmetic.
inline std::uint64_t key_distance(std::int64_t from, std::int64_t to) noexcept {
  return static_cast<std::uint64_t>(to) - static_cast<std::uint64_t>(from);
}
inline std::int64_t key_advance(std::int64_t from, std::uint64_t by,
                                bool up) noexcept {
  const auto f = static_cast<std::uint64_t>(from);
  return static_cast<std::int64_t>(up ? f + by : f - by);
}

template <typename Pred>
double first_true(Pred&& pred, double guess) {
  constexpr std::int64_t kMin = -0x7FF0000000000000LL;  // -inf
  constexpr std::int64_t kMax = 0x7FF0000000000000LL;   // +inf
  constexpr std::uint64_t kMaxStep = std::uint64_t{1} << 62;
  const std::int64_t g = std::isnan(guess) ? 0 : ordered_key(guess);
  std::int64_t lo = 0;  // pred false
  std::int64_t hi = 0;  // pred true
  std::uint64_t step = 1;
  if (pred(from_ordered_key(g))) {
    hi = g;
    for (;;) {
      if (hi == kMin) return from_ordered_key(kMin);
      const std::int64_t probe =
          key_advance(hi, std::min(step, key_distance(kMin, hi)), false);
      if (!pred(from_ordered_key(probe))) {
        lo = probe;
        break;
      }
      hi = probe;
      step = std::min(step * 2, kMaxStep);
    }
  } else {
    lo = g;
    for (;;) {
      const std::int64_t probe =
          key_advance(lo, std::min(step, key_distance(lo, kMax)), true);
      if (probe == kMax || pred(from_ordered_key(probe))) {
        hi = probe;
        break;
      }
      lo = probe;
      step = std::min(step * 2, kMaxStep);
    }
  }
  while (key_distance(lo, hi) > 1) {
    const std::int64_t mid = key_advance(lo, key_distance(lo, hi) / 2, true);
    if (pred(from_ordered_key(mid))) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return from_ordered_key(hi);
}

// A scorer evaluated at one x. Every score is max(left(y), right(y)) where
// right is nondecreasing in y and left is nonincreasing, both as computed in
// floating point. The prediction set {y : score < s} is therefore an
// interval whose exact endpoints can be searched for.
struct ScoreFrame {
  ScoreKind kind;
  double a;      // psi, or the lower quantile for CQR
  double b;      // psi, or the upper quantile for CQR
  double sigma;  // 1 unless locally weighted

  [[nodiscard]] double right(double y) const noexcept {
    switch (kind) {
      case ScoreKind::kStandard: return y - b;
      case ScoreKind::kLocallyWeighted: return (y - b) / sigma;
      case ScoreKind::kCqr: return y - b;
    }
    return y - b;
  }
  [[nodiscard]] double left(double y) const noexcept {
    switch (kind) {
      case ScoreKind::kStandard: return a - y;
      case ScoreKind::kLocallyWeighted: return (a - y) / sigma;
      case ScoreKind::kCqr: return a - y;
    }
    return a - y;
  }
  [[nodiscard]] double score(double y) const noexcept {
    return std::max(left(y), right(y));
  }

  [[nodiscard]] PredictionInterval interval(double s) const {
    const double scale = kind == ScoreKind::kLocallyWeighted ? sigma : 1.0;
    // lower: last y with left(y) >= s; upper: first y with right(y) >= s.
    const double first_inside =
        first_true([&](double y) { return left(y) < s; }, a - s * scale);
    const double upper =
        first_true([&](double y) { return right(y) >= s; }, b + s * scale);
    const double lower =
        std::nextafter(first_inside, -std::numeric_limits<double>::infinity());
    return {lower, upper};
  }
};

}  // namespace detail

/// A conformity function built from models fitted on the training split.
/// It holds no calibration or future data.
template <Regressor M = models::FittedModel>
class ConformityScorer {
 public:
  using Variant = std::variant<Standard<M>, LocallyWeighted<M>, Cqr<M>>;

  ConformityScorer(Standard<M> s) : v_(std::move(s)) {}         // NOLINT
  ConformityScorer(LocallyWeighted<M> s) : v_(std::move(s)) {}  // NOLINT
  ConformityScorer(Cqr<M> s) : v_(std::move(s)) {}              // NOLINT

  [[nodiscard]] ScoreKind kind() const noexcept {
    return static_cast<ScoreKind>(v_.index());
  }
  [[nodiscard]] const Variant& variant() const noexcept { return v_; }

  /// Throws DispersionNotPositive if sigma(x) <= 0.
  [[nodiscard]] detail::ScoreFrame frame(std::span<const double> x) const {
    return std::visit(
        [&](const auto& s) -> detail::ScoreFrame {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Standard<M>>) {
            const double p = s.psi.predict(x);
            return {ScoreKind::kStandard, p, p, 1.0};
          } else if constexpr (std::is_same_v<T, LocallyWeighted<M>>) {
            const double p = s.psi.predict(x);
            const double sig = s.sigma.predict(x);
            if (!(sig > 0.0)) throw DispersionNotPositive(sig);
            return {ScoreKind::kLocallyWeighted, p, p, sig};
          } else {
            return {ScoreKind::kCqr, s.lo.predict(x), s.hi.predict(x), 1.0};
          }
        },
        v_);
  }

  [[nodiscard]] double score(std::span<const double> x, double y) const {
    return frame(x).score(y);
  }

 private:
  Variant v_;
};

/// Scorer plus the ordered calibration scores and the threshold at rank
/// black = ceil((1 - alpha)(n + 1)). Immutable.
template <Regressor M = models::FittedModel>
class CalibratedPredictor {
 public:
  CalibratedPredictor(ConformityScorer<M> scorer, CoverageParams params,
                      std::vector<double> sorted_scores)
      : scorer_(std::move(scorer)),
        params_(params),
        sorted_(std::move(sorted_scores)) {
    if (static_cast<std::int64_t>(sorted_.size()) != params_.n()) {
      throw InvalidArgument("score count does not match calibration size");
    }
    if (!std::is_sorted(sorted_.begin(), sorted_.end())) {
      throw InvalidArgument("calibration scores must be sorted");
    }
    threshold_ = sorted_[static_cast<std::size_t>(params_.black() - 1)];
    tie_flag_ = std::adjacent_find(sorted_.begin(), sorted_.end()) !=
                sorted_.end();
  }

  [[nodiscard]] const ConformityScorer<M>& scorer() const noexcept {
    return scorer_;
  }
  [[nodiscard]] const CoverageParams& params() const noexcept {
    return params_;
  }
  [[nodiscard]] std::span<const double> sorted_scores() const noexcept {
    return sorted_;
  }
  [[nodiscard]] double threshold() const noexcept { return threshold_; }
  [[nodiscard]] bool tie_flag() const noexcept { return tie_flag_; }

  [[nodiscard]] bool covers(std::span<const double> x, double y) const {
    return scorer_.score(x, y) < threshold_;
  }

 private:
  ConformityScorer<M> scorer_;
  CoverageParams params_;
  std::vector<double> sorted_;
  double threshold_{};
  bool tie_flag_{false};
};

/// Scores the calibration sample and fixes the threshold. Warns (without
/// perturbing anything) when two calibration scores coincide.
template <Regressor M>
CalibratedPredictor<M> calibrate(ConformityScorer<M> scorer,
                                 const Dataset& calib, double alpha,
                                 bool warn_on_ties = true) {
  if (calib.empty()) throw InvalidArgument("calibration set is empty");
  const auto params =
      derive_params(static_cast<std::int64_t>(calib.rows()), alpha);
  std::vector<double> scores(calib.rows());
  for (std::size_t i = 0; i < calib.rows(); ++i) {
    scores[i] = scorer.score(calib.row(i), calib.response(i));
    if (std::isnan(scores[i])) {
      throw InvalidArgument("conformity score is NaN at calibration row " +
                            std::to_string(i));
    }
  }
  std::sort(scores.begin(), scores.end());
  CalibratedPredictor<M> cp(std::move(scorer), params, std::move(scores));
  if (warn_on_ties && cp.tie_flag()) {
    warn("calibration scores contain exact ties; the coverage laws assume "
         "distinct scores");
  }
  return cp;
}

template <Regressor M>
PredictionInterval predict_interval(const CalibratedPredictor<M>& cp,
                                    std::span<const double> x) {
  return cp.scorer().frame(x).interval(cp.threshold());
}

using Indicators = std::vector<std::uint8_t>;

/// Z_i = 1 iff the i-th future response falls inside its prediction set.
template <Regressor M>
Indicators coverage_indicators(const CalibratedPredictor<M>& cp,
                               const Dataset& future) {
  if (future.empty()) throw InvalidArgument("future set is empty");
  Indicators z(future.rows());
  for (std::size_t i = 0; i < future.rows(); ++i) {
    z[i] = cp.covers(future.row(i), future.response(i)) ? 1 : 0;
  }
  return z;
}

/// Number of ones in an indicator sequence.
inline std::int64_t count_covered(std::span<const std::uint8_t> z) {
  return std::count_if(z.begin(), z.end(), [](auto v) { return v != 0; });
}

/// C_m = (1/m) sum Z_i as an exact fraction.
inline Rational future_coverage(std::span<const std::uint8_t> z) {
  if (z.empty()) throw InvalidArgument("empty indicator sequence");
  return {count_covered(z), static_cast<std::int64_t>(z.size())};
}

}  // namespace covplan::conformal
