// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0

#ifndef APCALC_ERRORS_HPP
#define APCALC_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace apcalc {

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Raised when an operation cannot be carried out exactly in exact mode.
struct ExactnessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Evaluation hit a vanishing denominator or a non-finite value; carries the point.
struct EvalDomainError : std::runtime_error {
  EvalDomainError(const std::string& what, std::vector<double> pt)
      : std::runtime_error(what), point(std::move(pt)) {}
  std::vector<double> point;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace apcalc

#endif
