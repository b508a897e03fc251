// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include "twostop/errors.hpp"
#include "twostop/value_function.hpp"

namespace twostop {

enum class Threshold { lower, upper };

/// The angle of the value function at a threshold: the jump of the first
/// derivative, computed two independent ways.  For this model the jump is
/// strictly positive at both thresholds, so smooth pasting fails.
struct AngleReport {
  Threshold threshold;
  double direct_jump;
  double theorem_jump;
  double agreement_residual;
  bool smooth_pasting_holds;
  /// Characteristic exponent at the probe argument used for the exponential
  /// moment hypothesis behind the identity; the hypothesis asks for < r.
  double moment_check_value;
  bool moment_check_holds;
};

/// V'(x0+) - V'(x0-) straight from the piecewise closed form.
inline double direct_jump(const ValueModel& m, Threshold t) {
  const Solution& s = m.solution;
  const double r1 = m.roots.r1, r2 = m.roots.r2;
  if (t == Threshold::upper)
    return 1.0 - (-r1 * s.D1 * std::exp(-r1 * s.u) + r2 * s.D2);
  return (-r1 * s.D1 + r2 * s.D2 * std::exp(-r2 * s.u)) - (-1.0);
}

/// The same jump via the atom identity: the outward slope of the averaging
/// function at the threshold times the atom mass of the relevant extremum.
/// The lower threshold uses the reflected process, swapping the roles of the
/// supremum and the infimum.
inline double theorem_jump(const ValueModel& m, Threshold t) {
  const Solution& s = m.solution;
  const double r1 = m.roots.r1, r2 = m.roots.r2;
  if (t == Threshold::upper) {
    const double q2_slope = 1.0 + r1 * m.constants.F2 * s.D1 * std::exp(-r1 * s.u);
    return q2_slope * (r2 / m.params.alpha2);
  }
  const double q1_slope = 1.0 + r2 * m.constants.F1 * s.D2 * std::exp(-r2 * s.u);
  return q1_slope * (r1 / m.params.alpha1);
}

inline AngleReport angle_report(const ValueModel& m, Threshold t) {
  AngleReport rep{};
  rep.threshold = t;
  rep.direct_jump = direct_jump(m, t);
  rep.theorem_jump = theorem_jump(m, t);
  rep.agreement_residual = std::fabs(rep.direct_jump - rep.theorem_jump);
  rep.smooth_pasting_holds = std::fabs(rep.direct_jump) <= 1e-10;
  const double probe = t == Threshold::upper ? 0.5 * m.roots.r2 : -0.5 * m.roots.r1;
  rep.moment_check_value = psi(m.params, probe);
  rep.moment_check_holds = rep.moment_check_value < m.params.r;
  return rep;
}

/// Finite-difference estimate of the derivative jump at an interior point;
/// the value function is analytic inside the continuation region, so this
/// must vanish to discretization accuracy.  Uses one-sided second-order
/// three-point stencils on each side.
inline double interior_smoothness_check(const ValueModel& m, double x, double h = 1e-4) {
  const Solution& s = m.solution;
  if (!(x >= -s.x1 + 1e-3 && x <= s.x2 - 1e-3))
    throw OutOfDomain("interior_smoothness_check: x too close to a threshold");
  const double dp =
      (4.0 * value_at(m, x + h) - 3.0 * value_at(m, x) - value_at(m, x + 2.0 * h)) /
      (2.0 * h);
  const double dm =
      (3.0 * value_at(m, x) - 4.0 * value_at(m, x - h) + value_at(m, x - 2.0 * h)) /
      (2.0 * h);
  return dp - dm;
}

}  // namespace twostop
