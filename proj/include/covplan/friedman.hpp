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
#include <numbers>
#include <span>
#include <vector>

#include "covplan/dataset.hpp"
#include "covplan/error.hpp"
#include "covplan/rng.hpp"

namespace covplan::sim {

inline constexpr std::size_t kFriedmanFeatures = 10;

/// Friedman regression surface plus a shared shift w and noise eps. Only the
/// first five features enter; the rest are pure noise.
inline double friedman_response(std::span<const double> x, double w,
                                double eps) {
  if (x.size() < 5) throw InvalidArgument("friedman needs >= 5 features");
  const double c = x[2] - 0.5;
  return 10.0 * std::sin(std::numbers::pi * x[0] * x[1]) + 20.0 * c * c +
         10.0 * x[3] + 5.0 * x[4] + w + eps;
}

/// `rows` exchangeable draws: ten U[0,1] features and N(0,1) noise per row,
/// all sharing the shift w. Draw w ~ Exp(1) once per replication; that
/// common shift is what makes rows dependent yet exchangeable.
inline Dataset friedman_generate(std::size_t rows, double w,
                                 std::uint64_t seed) {
  if (rows < 1) throw InvalidArgument("rows must be >= 1");
  Rng rng(seed);
  std::vector<double> x(rows * kFriedmanFeatures);
  std::vector<double> y(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::span<double> row(x.data() + i * kFriedmanFeatures,
                                kFriedmanFeatures);
    for (auto& v : row) v = rng.uniform();
    y[i] = friedman_response(row, w, rng.normal());
  }
  return Dataset(kFriedmanFeatures, std::move(x), std::move(y));
}

}  // namespace covplan::sim
