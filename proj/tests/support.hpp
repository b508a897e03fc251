// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

#include "twostop/model.hpp"
#include "twostop/monte_carlo.hpp"

namespace testsupport {

/// Log-uniform draw on [1/4, 4]; random models stay well conditioned, so the
/// library's absolute tolerances remain meaningful.
inline double log_uniform(twostop::PathRng& rng) {
  const double lo = std::log(0.25), hi = std::log(4.0);
  return std::exp(lo + rng.uniform01() * (hi - lo));
}

inline twostop::ModelParams random_params(std::uint64_t seed, std::uint64_t index) {
  twostop::PathRng rng(seed, index);
  const double a1 = log_uniform(rng);
  const double l1 = log_uniform(rng);
  const double a2 = log_uniform(rng);
  const double l2 = log_uniform(rng);
  const double r = log_uniform(rng);
  return twostop::validate(a1, l1, a2, l2, r);
}

}  // namespace testsupport
