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
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "covplan/conformal.hpp"
#include "covplan/dataset.hpp"
#include "covplan/error.hpp"
#include "covplan/models.hpp"

namespace covplan {

/// How to turn a training sample into a conformity scorer.
///
/// `model` is the point predictor for the standard and locally weighted
/// scores. The dispersion model and the CQR quantile models reuse its
/// neighbour count (a constant-mean model means "all training rows").
struct ScorerConfig {
  conformal::ScoreKind kind = conformal::ScoreKind::kStandard;
  models::ModelSpec model = models::KnnMeanSpec{10};
  // CQR quantile levels; default alpha/2 and 1 - alpha/2.
  std::optional<double> p_lo;
  std::optional<double> p_hi;
};

inline conformal::ScoreKind parse_score_kind(std::string_view s) {
  if (s == "standard") return conformal::ScoreKind::kStandard;
  if (s == "lw" || s == "locally-weighted") {
    return conformal::ScoreKind::kLocallyWeighted;
  }
  if (s == "cqr") return conformal::ScoreKind::kCqr;
  throw InvalidArgument("unknown score kind '" + std::string(s) +
                        "' (expected standard, lw or cqr)");
}

inline std::string_view score_kind_name(conformal::ScoreKind k) {
  switch (k) {
    case conformal::ScoreKind::kStandard: return "standard";
    case conformal::ScoreKind::kLocallyWeighted: return "lw";
    case conformal::ScoreKind::kCqr: return "cqr";
  }
  return "standard";
}

namespace detail {

inline std::size_t neighbour_count(const models::ModelSpec& spec,
                                   std::size_t train_rows) {
  return std::visit(
      [&](const auto& s) -> std::size_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, models::ConstantMeanSpec>) {
          return train_rows;
        } else {
          return s.k;
        }
      },
      spec);
}

inline models::BaseSpec as_base(const models::ModelSpec& spec) {
  return std::visit(
      [](const auto& s) -> models::BaseSpec {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, models::KnnDispersionSpec>) {
          throw BadHyperparameter(
              "a dispersion model cannot serve as the point predictor");
        } else {
          return s;
        }
      },
      spec);
}

}  // namespace detail

/// Fits every model the chosen score needs on `train` only.
inline conformal::ConformityScorer<> make_scorer(const ScorerConfig& config,
                                                 Dataset train, double alpha) {
  using conformal::Cqr;
  using conformal::LocallyWeighted;
  using conformal::ScoreKind;
  using conformal::Standard;
  const auto shared = std::make_shared<const Dataset>(std::move(train));
  const std::size_t k = covplan::detail::neighbour_count(config.model, shared->rows());
  switch (config.kind) {
    case ScoreKind::kStandard:
      return Standard<models::FittedModel>{models::fit(config.model, shared)};
    case ScoreKind::kLocallyWeighted: {
      auto psi = models::fit(config.model, shared);
      auto sigma = models::fit(
          models::KnnDispersionSpec{k, covplan::detail::as_base(config.model)}, shared);
      return LocallyWeighted<models::FittedModel>{std::move(psi),
                                                  std::move(sigma)};
    }
    case ScoreKind::kCqr: {
      const double lo = config.p_lo.value_or(alpha / 2.0);
      const double hi = config.p_hi.value_or(1.0 - alpha / 2.0);
      if (lo > hi) throw BadHyperparameter("p_lo must not exceed p_hi");
      return Cqr<models::FittedModel>{
          models::fit(models::KnnQuantileSpec{k, lo}, shared),
          models::fit(models::KnnQuantileSpec{k, hi}, shared)};
    }
  }
  throw InvalidArgument("unknown score kind");
}

}  // namespace covplan
