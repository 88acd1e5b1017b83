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

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "covplan/friedman.hpp"
#include "covplan/rng.hpp"

namespace covplan::sim {
namespace {

TEST(Friedman, HandComputedValue) {
  const std::vector<double> x(kFriedmanFeatures, 0.5);
  // 10 sin(pi/4) + 0 + 5 + 2.5
  EXPECT_NEAR(friedman_response(x, 0.0, 0.0), 14.571067811865476, 1e-12);
  EXPECT_NEAR(friedman_response(x, 1.25, -0.5), 14.571067811865476 + 0.75,
              1e-12);
}

TEST(Friedman, TrailingFeaturesAreNoise) {
  std::vector<double> x{0.1, 0.7, 0.3, 0.9, 0.2, 0, 0, 0, 0, 0};
  const double base = friedman_response(x, 0.4, 0.1);
  for (std::size_t j = 5; j < kFriedmanFeatures; ++j) x[j] = 0.37 * j - 1;
  EXPECT_EQ(friedman_response(x, 0.4, 0.1), base);
  EXPECT_THROW((void)friedman_response(std::vector<double>(4, 0.0), 0, 0),
               InvalidArgument);
}

TEST(Friedman, FeaturesLieInUnitCube) {
  const auto d = friedman_generate(500, 0.3, 1);
  EXPECT_EQ(d.columns(), kFriedmanFeatures);
  EXPECT_EQ(d.rows(), 500u);
  for (std::size_t i = 0; i < d.rows(); ++i) {
    for (double v : d.row(i)) {
      EXPECT_GE(v, 0.0);
      EXPECT_LT(v, 1.0);
    }
  }
}

TEST(Friedman, SeedDeterminesData) {
  const auto a = friedman_generate(50, 0.8, 99);
  const auto b = friedman_generate(50, 0.8, 99);
  const auto c = friedman_generate(50, 0.8, 100);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    EXPECT_EQ(a.response(i), b.response(i));
  }
  EXPECT_NE(a.response(0), c.response(0));
}

TEST(Friedman, ShiftMovesEveryResponse) {
  const auto a = friedman_generate(20, 0.0, 5);
  const auto b = friedman_generate(20, 2.5, 5);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    EXPECT_NEAR(b.response(i) - a.response(i), 2.5, 1e-12);
  }
}

TEST(Rng, MomentsOfBasicDraws) {
  Rng rng(3);
  const int n = 200000;
  double su = 0, se = 0, sn = 0, sn2 = 0;
  for (int i = 0; i < n; ++i) {
    su += rng.uniform();
    se += rng.exponential();
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  EXPECT_NEAR(su / n, 0.5, 4 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(se / n, 1.0, 4 * std::sqrt(1.0 / n));
  EXPECT_NEAR(sn / n, 0.0, 4 * std::sqrt(1.0 / n));
  EXPECT_NEAR(sn2 / n, 1.0, 4 * std::sqrt(2.0 / n));
}

TEST(Rng, SeedMixingSeparatesStreams) {
  EXPECT_NE(mix_seed(0, 0), mix_seed(0, 1));
  EXPECT_NE(mix_seed(0, 1), mix_seed(1, 0));
  EXPECT_EQ(mix_seed(12, 34), mix_seed(12, 34));
}

}  // namespace
}  // namespace covplan::sim
