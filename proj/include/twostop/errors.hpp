// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace twostop {

/// A model parameter that must be strictly positive was not.
struct NonPositiveParameter : std::invalid_argument {
  explicit NonPositiveParameter(const std::string& field)
      : std::invalid_argument("parameter must be strictly positive: " + field), field_name(field) {}
  std::string field_name;
};

/// A model parameter was NaN or infinite.
struct NonFinite : std::invalid_argument {
  explicit NonFinite(const std::string& field)
      : std::invalid_argument("parameter must be finite: " + field), field_name(field) {}
  std::string field_name;
};

/// An evaluation point fell outside a function's domain.
struct OutOfDomain : std::domain_error {
  explicit OutOfDomain(const std::string& what) : std::domain_error(what) {}
};

/// A density was evaluated outside the support of its law.
struct OutOfSupport : std::domain_error {
  explicit OutOfSupport(const std::string& what) : std::domain_error(what) {}
};

/// A root or fixed-point search failed to reach its tolerance.
struct SolverFailure : std::runtime_error {
  explicit SolverFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Two quantities that must agree by construction disagreed.
struct ConsistencyFailure : std::runtime_error {
  explicit ConsistencyFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Panel refinement stopped improving before reaching the target accuracy.
struct QuadratureNonConvergence : std::runtime_error {
  explicit QuadratureNonConvergence(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace twostop
