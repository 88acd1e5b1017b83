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
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "covplan/error.hpp"

namespace covplan {

/// Regression data: a row-major predictor matrix plus one response per row.
/// Every entry is finite; this is checked on construction.
class Dataset {
 public:
  Dataset() = default;

  Dataset(std::size_t columns, std::vector<double> predictors,
          std::vector<double> response)
      : columns_(columns),
        predictors_(std::move(predictors)),
        response_(std::move(response)) {
    if (columns_ == 0) throw InvalidArgument("dataset needs >= 1 feature");
    if (predictors_.size() != columns_ * response_.size()) {
      throw InvalidArgument("predictor matrix has " +
                            std::to_string(predictors_.size()) +
                            " entries, expected rows*columns = " +
                            std::to_string(columns_ * response_.size()));
    }
    for (double v : predictors_) {
      if (!std::isfinite(v)) throw InvalidArgument("non-finite predictor");
    }
    for (double v : response_) {
      if (!std::isfinite(v)) throw InvalidArgument("non-finite response");
    }
  }

  [[nodiscard]] std::size_t rows() const noexcept { return response_.size(); }
  [[nodiscard]] std::size_t columns() const noexcept { return columns_; }
  [[nodiscard]] bool empty() const noexcept { return response_.empty(); }

  [[nodiscard]] std::span<const double> row(std::size_t i) const {
    return std::span<const double>(predictors_).subspan(i * columns_,
                                                        columns_);
  }
  [[nodiscard]] double response(std::size_t i) const { return response_[i]; }
  [[nodiscard]] std::span<const double> responses() const noexcept {
    return response_;
  }

  /// Rows [first, first + count) as a new dataset.
  [[nodiscard]] Dataset slice(std::size_t first, std::size_t count) const {
    if (first + count > rows()) throw InvalidArgument("slice out of range");
    const auto begin = predictors_.begin() +
                       static_cast<std::ptrdiff_t>(first * columns_);
    std::vector<double> x(begin,
                          begin + static_cast<std::ptrdiff_t>(count * columns_));
    const auto rb = response_.begin() + static_cast<std::ptrdiff_t>(first);
    std::vector<double> y(rb, rb + static_cast<std::ptrdiff_t>(count));
    return Dataset(columns_, std::move(x), std::move(y));
  }

 private:
  std::size_t columns_{0};
  std::vector<double> predictors_;
  std::vector<double> response_;
};

}  // namespace covplan
