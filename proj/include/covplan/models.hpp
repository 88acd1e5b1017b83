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
#include <concepts>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "covplan/dataset.hpp"
#include "covplan/error.hpp"
#include "covplan/numeric.hpp"

namespace covplan::models {

/// Anything that maps a feature vector to a real number. The conformal
/// layer is written against this, so any fitted estimator plugs in.
template <typename M>
concept Regressor = requires(const M& m, std::span<const double> x) {
  { m.predict(x) } -> std::convertible_to<double>;
};

/// Lower bound applied to k-NN dispersion estimates.
inline constexpr double kDispersionFloor = 1e-8;

// Hyperparameters.
struct ConstantMeanSpec {};
struct KnnMeanSpec {
  std::size_t k;
};
struct KnnQuantileSpec {
  std::size_t k;
  double p;
};
using BaseSpec = std::variant<ConstantMeanSpec, KnnMeanSpec, KnnQuantileSpec>;
struct KnnDispersionSpec {
  std::size_t k;
  BaseSpec base;
};
using ModelSpec = std::variant<ConstantMeanSpec, KnnMeanSpec, KnnQuantileSpec,
                               KnnDispersionSpec>;

class FittedModel;

// Fitted states.
struct ConstantMean {
  double mu;
};
struct KnnMean {
  std::shared_ptr<const Dataset> train;
  std::size_t k;
};
struct KnnQuantile {
  std::shared_ptr<const Dataset> train;
  std::size_t k;
  double p;
};
struct KnnDispersion {
  std::shared_ptr<const Dataset> train;
  std::shared_ptr<const FittedModel> base;
  std::size_t k;
  // |y_i - base(x_i)| over the training rows.
  std::vector<double> abs_residuals;
};

namespace detail {

/// Indices of the k training rows nearest to x (Euclidean), ordered by
/// distance with ties going to the lower row index.
inline std::vector<std::size_t> nearest_rows(const Dataset& train,
                                             std::span<const double> x,
                                             std::size_t k) {
  if (x.size() != train.columns()) {
    throw InvalidArgument("feature vector has dimension " +
                          std::to_string(x.size()) + ", model expects " +
                          std::to_string(train.columns()));
  }
  std::vector<std::pair<double, std::size_t>> dist(train.rows());
  for (std::size_t i = 0; i < train.rows(); ++i) {
    const auto row = train.row(i);
    double d2 = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double diff = row[j] - x[j];
      d2 += diff * diff;
    }
    dist[i] = {d2, i};
  }
  const auto kth = dist.begin() + static_cast<std::ptrdiff_t>(k);
  std::partial_sort(dist.begin(), kth, dist.end());
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = dist[i].second;
  return out;
}

/// Inverse of the empirical CDF: the ceil(p k)-th smallest value.
inline double lower_quantile(std::vector<double> values, double p) {
  const auto k = values.size();
  const double pos = covplan::detail::snap_to_integer(p * static_cast<double>(k));
  auto rank = static_cast<std::size_t>(std::ceil(pos));
  rank = std::clamp<std::size_t>(rank, 1, k);
  const auto it = values.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(values.begin(), it, values.end());
  return *it;
}

inline void check_k(std::size_t k, const Dataset& train) {
  if (k < 1 || k > train.rows()) {
    throw BadHyperparameter("neighbor count k=" + std::to_string(k) +
                            " outside [1, " + std::to_string(train.rows()) +
                            "]");
  }
}

}  // namespace detail

/// A regressor fitted on a training sample. Immutable; predict() is safe to
/// call concurrently.
class FittedModel {
 public:
  using State = std::variant<ConstantMean, KnnMean, KnnQuantile, KnnDispersion>;

  explicit FittedModel(State state) : state_(std::move(state)) {}

  [[nodiscard]] const State& state() const noexcept { return state_; }

  [[nodiscard]] double predict(std::span<const double> x) const {
    return std::visit([&](const auto& s) { return predict_one(s, x); },
                      state_);
  }

 private:
  static double predict_one(const ConstantMean& s, std::span<const double>) {
    return s.mu;
  }
  static double predict_one(const KnnMean& s, std::span<const double> x) {
    const auto idx = detail::nearest_rows(*s.train, x, s.k);
    CompensatedSum<double> sum;
    for (auto i : idx) sum += s.train->response(i);
    return sum.value() / static_cast<double>(s.k);
  }
  static double predict_one(const KnnQuantile& s, std::span<const double> x) {
    const auto idx = detail::nearest_rows(*s.train, x, s.k);
    std::vector<double> ys;
    ys.reserve(idx.size());
    for (auto i : idx) ys.push_back(s.train->response(i));
    return detail::lower_quantile(std::move(ys), s.p);
  }
  static double predict_one(const KnnDispersion& s,
                            std::span<const double> x) {
    const auto idx = detail::nearest_rows(*s.train, x, s.k);
    CompensatedSum<double> sum;
    for (auto i : idx) sum += s.abs_residuals[i];
    return std::max(sum.value() / static_cast<double>(s.k), kDispersionFloor);
  }

  State state_;
};

namespace detail {

inline FittedModel fit_impl(const ConstantMeanSpec&,
                            const std::shared_ptr<const Dataset>& train) {
  CompensatedSum<double> sum;
  for (double y : train->responses()) sum += y;
  return FittedModel(
      ConstantMean{sum.value() / static_cast<double>(train->rows())});
}

inline FittedModel fit_impl(const KnnMeanSpec& spec,
                            const std::shared_ptr<const Dataset>& train) {
  check_k(spec.k, *train);
  return FittedModel(KnnMean{train, spec.k});
}

inline FittedModel fit_impl(const KnnQuantileSpec& spec,
                            const std::shared_ptr<const Dataset>& train) {
  check_k(spec.k, *train);
  if (!(spec.p > 0.0 && spec.p < 1.0)) {
    throw BadHyperparameter("quantile level p must lie in (0, 1)");
  }
  return FittedModel(KnnQuantile{train, spec.k, spec.p});
}

inline FittedModel fit_impl(const KnnDispersionSpec& spec,
                            const std::shared_ptr<const Dataset>& train) {
  check_k(spec.k, *train);
  auto base = std::make_shared<const FittedModel>(std::visit(
      [&](const auto& b) { return fit_impl(b, train); }, spec.base));
  std::vector<double> residuals(train->rows());
  for (std::size_t i = 0; i < train->rows(); ++i) {
    residuals[i] = std::abs(train->response(i) - base->predict(train->row(i)));
  }
  return FittedModel(
      KnnDispersion{train, std::move(base), spec.k, std::move(residuals)});
}

}  // namespace detail

/// Fits a model on the training split. Predictions depend on nothing else.
inline FittedModel fit(const ModelSpec& spec, Dataset train) {
  if (train.empty()) throw InvalidArgument("training set is empty");
  const auto shared = std::make_shared<const Dataset>(std::move(train));
  return std::visit([&](const auto& s) { return detail::fit_impl(s, shared); },
                    spec);
}

inline FittedModel fit(const ModelSpec& spec,
                       std::shared_ptr<const Dataset> train) {
  if (!train || train->empty()) throw InvalidArgument("training set is empty");
  return std::visit([&](const auto& s) { return detail::fit_impl(s, train); },
                    spec);
}

}  // namespace covplan::models
