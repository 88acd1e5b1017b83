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

#include <stdexcept>
#include <string>

namespace covplan {

// Base of everything this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed something outside an operation's domain (bad size, alpha
// outside (0,1), NaN, ragged table, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Valid input for which the requested statistical object does not exist.
// The CLI maps these to exit status 2.
class DomainError : public Error {
 public:
  using Error::Error;
};

// floor(alpha * (n + 1)) == 0: the prediction set would need a calibration
// rank beyond n.
class DegenerateCalibration : public DomainError {
 public:
  DegenerateCalibration(long long n, double alpha)
      : DomainError("degenerate calibration: floor(alpha*(n+1)) = 0 for n=" +
                    std::to_string(n) + ", alpha=" + std::to_string(alpha) +
                    "; the calibration sample is too small for this alpha") {}
};

class PlanNotFound : public DomainError {
 public:
  explicit PlanNotFound(long long n_max)
      : DomainError("no calibration size n <= " + std::to_string(n_max) +
                    " meets the requested concentration") {}
};

class DispersionNotPositive : public DomainError {
 public:
  explicit DispersionNotPositive(double sigma)
      : DomainError("dispersion estimate must be positive, got " +
                    std::to_string(sigma)) {}
};

class BadHyperparameter : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class OracleTooLarge : public InvalidArgument {
 public:
  explicit OracleTooLarge(long long m)
      : InvalidArgument("exact urn oracle supports m <= 64, got m=" +
                        std::to_string(m)) {}
};

}  // namespace covplan
