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
#include <numeric>
#include <optional>
#include <ostream>
#include <string>

#include "covplan/error.hpp"

namespace covplan {

/// Neumaier's variant of Kahan summation. Order-sensitive but with an error
/// bound independent of the number of terms.
template <typename Real = double>
class CompensatedSum {
 public:
  constexpr void add(Real x) noexcept {
    const Real t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  constexpr CompensatedSum& operator+=(Real x) noexcept {
    add(x);
    return *this;
  }
  [[nodiscard]] constexpr Real value() const noexcept { return sum_ + comp_; }

 private:
  Real sum_{0};
  Real comp_{0};
};

/// Reduced fraction with a positive denominator.
struct Rational {
  std::int64_t num{0};
  std::int64_t den{1};

  constexpr Rational() = default;
  constexpr Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) throw InvalidArgument("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  [[nodiscard]] constexpr double value() const noexcept {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  [[nodiscard]] std::string str() const {
    return std::to_string(num) + "/" + std::to_string(den);
  }
  friend constexpr bool operator==(const Rational&, const Rational&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

namespace detail {

// Checked a*b for nonnegative operands.
inline std::optional<std::int64_t> checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) return std::nullopt;
  return out;
}

// Products like alpha*(n+1) are meant as decimal arithmetic ("alpha = 0.7,
// n = 9" means exactly 7). Values within a relative 1e-9 of an integer are
// taken to be that integer before floor/ceil.
inline double snap_to_integer(double v) {
  const double r = std::nearbyint(v);
  if (std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v))) return r;
  return v;
}

// log Gamma(x + h) - log Gamma(x) in extended precision. Used for the rising
// factorial (x)_h = x (x+1) ... (x+h-1).
inline long double log_rising(long double x, long double h) {
  if (h == 0) return 0.0L;
  return std::lgamma(x + h) - std::lgamma(x);
}

// log C(n, k) in extended precision.
inline long double log_choose(long double n, long double k) {
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

}  // namespace detail
}  // namespace covplan
