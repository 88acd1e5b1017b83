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

// Reference computations used only by tests. None of these share code paths
// with the library's production evaluation.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace covplan::testing {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

/// Closed-form beta-binomial law in exact rationals:
///   C(m,k) prod(b+i-1) prod(g+i-1) / prod(n+i).
inline std::vector<cpp_rational> closed_form_exact(std::int64_t n,
                                                   std::int64_t b,
                                                   std::int64_t g,
                                                   std::int64_t m) {
  cpp_int den = 1;
  for (std::int64_t i = 1; i <= m; ++i) den *= (n + i);
  std::vector<cpp_rational> out;
  cpp_int binom = 1;  // C(m, k), updated incrementally
  for (std::int64_t k = 0; k <= m; ++k) {
    if (k > 0) binom = binom * (m - k + 1) / k;
    cpp_int num = binom;
    for (std::int64_t i = 1; i <= k; ++i) num *= (b + i - 1);
    for (std::int64_t i = 1; i <= m - k; ++i) num *= (g + i - 1);
    out.emplace_back(num, den);
  }
  return out;
}

/// Regularized incomplete beta from Boost.Math.
inline double beta_cdf(double a, double b, double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return boost::math::ibeta(a, b, t);
}

/// Composite Simpson rule with `intervals` (even) panels.
inline double simpson(const std::function<double(double)>& f, double lo,
                      double hi, int intervals) {
  if (intervals % 2 != 0) throw std::invalid_argument("need even panels");
  const double h = (hi - lo) / intervals;
  double s = f(lo) + f(hi);
  for (int i = 1; i < intervals; ++i) {
    s += f(lo + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return s * h / 3.0;
}

/// Beta(a, b) density straight from the factorial formula (integer shapes).
inline double beta_pdf_direct(int a, int b, double t) {
  double coef = 1.0;  // (a+b-1)! / ((a-1)! (b-1)!)
  for (int i = 1; i <= a + b - 1; ++i) coef *= i;
  for (int i = 1; i <= a - 1; ++i) coef /= i;
  for (int i = 1; i <= b - 1; ++i) coef /= i;
  return coef * std::pow(t, a - 1) * std::pow(1.0 - t, b - 1);
}

/// The planning scan again, with Boost's incomplete beta and integer urn
/// counts derived independently of covplan::derive_params.
inline std::int64_t brute_force_plan(double alpha, double eps, double gamma,
                                     std::int64_t n_max) {
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const double v = alpha * static_cast<double>(n + 1);
    auto g = static_cast<std::int64_t>(std::floor(v + 1e-9));
    if (g < 1) continue;
    const std::int64_t b = n + 1 - g;
    const double p = beta_cdf(double(b), double(g), 1 - alpha + eps) -
                     beta_cdf(double(b), double(g), 1 - alpha - eps);
    if (p >= gamma) return n;
  }
  return -1;
}

}  // namespace covplan::testing
