// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <cstddef>
#include <string>

#include "twostop/errors.hpp"

namespace twostop {

/// Composite 16-point Gauss-Legendre rule over [a, b], doubling the panel
/// count until two successive estimates agree to `tol` (absolute, scaled by
/// max(1, |estimate|)).  Throws QuadratureNonConvergence if even `fail_tol`
/// cannot be met.
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-10, double fail_tol = 1e-9) {
  if (a == b) return 0.0;
  using rule = boost::math::quadrature::gauss<double, 16>;
  double prev = 0.0;
  bool have_prev = false;
  double last_disagreement = 0.0;
  for (std::size_t panels = 1; panels <= (std::size_t{1} << 15); panels *= 2) {
    double sum = 0.0;
    const double h = (b - a) / static_cast<double>(panels);
    for (std::size_t i = 0; i < panels; ++i) {
      const double lo = a + h * static_cast<double>(i);
      sum += rule::integrate(f, lo, lo + h);
    }
    if (have_prev) {
      last_disagreement = std::fabs(sum - prev);
      if (last_disagreement <= tol * std::max(1.0, std::fabs(sum))) return sum;
    }
    prev = sum;
    have_prev = true;
  }
  if (last_disagreement <= fail_tol * std::max(1.0, std::fabs(prev))) return prev;
  throw QuadratureNonConvergence("panel refinement stalled at disagreement " +
                                 std::to_string(last_disagreement));
}

}  // namespace twostop
