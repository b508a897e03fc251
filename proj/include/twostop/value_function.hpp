// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "twostop/errors.hpp"
#include "twostop/extrema_law.hpp"
#include "twostop/model.hpp"
#include "twostop/quadrature.hpp"
#include "twostop/threshold.hpp"

namespace twostop {

/// Everything needed to evaluate the closed-form value function and the
/// averaging functions: parameters, roots, derived constants, solution.
struct ValueModel {
  ModelParams params;
  RootPair roots;
  WHConstants constants;
  Solution solution;
};

inline ValueModel build_value_model(const ModelParams& p) {
  const RootPair roots = solve_roots(p);
  return ValueModel{p, roots, constants(p, roots), solve(p)};
}

/// Value function: |x| on the closed stopping region, a combination of two
/// exponentials inside.  The branches agree at the thresholds; taking the
/// payoff branch there makes V exact where stopping is immediate.
inline double value_at(const ValueModel& m, double x) {
  const Solution& s = m.solution;
  if (x <= -s.x1) return -x;
  if (x >= s.x2) return x;
  return s.D1 * std::exp(-m.roots.r1 * (x + s.x1)) +
         s.D2 * std::exp(m.roots.r2 * (x - s.x2));
}

/// Averaging function for the infimum: zero on (-x1, inf), and on the lower
/// stopping region the gap between the payoff there and what the exponential
/// tail of the value function accounts for.  Vanishes at -x1.
inline double q1(const ValueModel& m, double x) {
  const Solution& s = m.solution;
  if (x >= -s.x1) return 0.0;
  return -x - m.constants.E1 -
         m.constants.F1 * s.D2 * std::exp(m.roots.r2 * (x - s.x2));
}

/// Averaging function for the supremum, mirror of q1: zero on (-inf, x2),
/// vanishing at x2 and growing like x - E2 beyond.
inline double q2(const ValueModel& m, double x) {
  const Solution& s = m.solution;
  if (x <= s.x2) return 0.0;
  return x - m.constants.E2 -
         m.constants.F2 * s.D1 * std::exp(-m.roots.r1 * (x + s.x1));
}

/// E_x q1(I) in closed form, valid for x >= -x1.
inline double expected_q1_closed(const ValueModel& m, double x) {
  if (x < -m.solution.x1) throw OutOfDomain("expected_q1_closed: x below -x1");
  return m.solution.D1 * std::exp(-m.roots.r1 * (x + m.solution.x1));
}

/// E_x q2(M) in closed form, valid for x <= x2.
inline double expected_q2_closed(const ValueModel& m, double x) {
  if (x > m.solution.x2) throw OutOfDomain("expected_q2_closed: x above x2");
  return m.solution.D2 * std::exp(m.roots.r2 * (x - m.solution.x2));
}

/// E_x q(extremum) by direct convolution against the defective exponential
/// law: the atom at zero contributes q at x itself, the continuous part is
/// integrated with the tail truncated where its remaining mass drops below
/// e^{-40}.  The integral is split at the point where q switches branch.
inline double expected_q_quadrature(const ValueModel& m, double x, Orientation which) {
  if (which == Orientation::infimum) {
    const ExtremaLaw law = law_of_infimum(m.params, m.roots);
    const double T = 40.0 / law.rate;
    auto f = [&](double y) { return q1(m, x + y) * density(law, y); };
    const double kink = -m.solution.x1 - x;
    double integral;
    if (kink > -T && kink < 0.0)
      integral = integrate(f, -T, kink) + integrate(f, kink, 0.0);
    else
      integral = integrate(f, -T, 0.0);
    return law.atom_mass * q1(m, x) + integral;
  }
  const ExtremaLaw law = law_of_supremum(m.params, m.roots);
  const double T = 40.0 / law.rate;
  auto f = [&](double y) { return q2(m, x + y) * density(law, y); };
  const double kink = m.solution.x2 - x;
  double integral;
  if (kink > 0.0 && kink < T)
    integral = integrate(f, 0.0, kink) + integrate(f, kink, T);
  else
    integral = integrate(f, 0.0, T);
  return law.atom_mass * q2(m, x) + integral;
}

struct GridSpec {
  int interior_points = 1001;
  int exterior_points = 500;
  /// Exterior grids reach this many mean-extremum lengths beyond each threshold.
  double span_factor = 10.0;
};

/// Numerical check of the two hypotheses that certify optimality, plus
/// monotonicity and threshold continuity of the averaging functions.
struct VerificationReport {
  double representation_sup_error;
  double majorant_min_gap;
  bool q1_monotone;
  bool q2_monotone;
  bool q1_continuous_at_threshold;
  bool q2_continuous_at_threshold;
  double q1_threshold_residual;
  double q2_threshold_residual;
  bool passed;
};

inline constexpr double kRepresentationTol = 1e-6;
inline constexpr double kMajorantTol = 1e-12;
inline constexpr double kContinuityTol = 1e-12;

/// Verifies, on grids:
///  - E_x q1(I) + E_x q2(M) = |x| on the stopping region (by quadrature);
///  - V >= |x| on the continuation region;
///  - q1 non-increasing, q2 non-decreasing;
///  - both averaging functions vanish at their thresholds.
inline VerificationReport verify_hypotheses(const ValueModel& m,
                                            const GridSpec& grid = GridSpec{}) {
  const Solution& s = m.solution;
  VerificationReport rep{};

  const int half = std::max(2, grid.exterior_points / 2);
  const double left_lo = -s.x1 - grid.span_factor * m.constants.E1;
  const double right_hi = s.x2 + grid.span_factor * m.constants.E2;
  std::vector<double> exterior;
  exterior.reserve(2 * static_cast<std::size_t>(half));
  for (int i = 0; i < half; ++i)
    exterior.push_back(left_lo + (-s.x1 - left_lo) * i / double(half - 1));
  for (int i = 0; i < half; ++i)
    exterior.push_back(s.x2 + (right_hi - s.x2) * i / double(half - 1));

  rep.representation_sup_error = 0.0;
  for (double x : exterior) {
    const double total = expected_q_quadrature(m, x, Orientation::infimum) +
                         expected_q_quadrature(m, x, Orientation::supremum);
    rep.representation_sup_error =
        std::max(rep.representation_sup_error, std::fabs(total - std::fabs(x)));
  }

  rep.majorant_min_gap = std::numeric_limits<double>::infinity();
  const int n = std::max(2, grid.interior_points);
  for (int i = 0; i < n; ++i) {
    const double x = -s.x1 + (s.x2 + s.x1) * i / double(n - 1);
    rep.majorant_min_gap = std::min(rep.majorant_min_gap, value_at(m, x) - std::fabs(x));
  }

  rep.q1_monotone = true;
  for (std::size_t i = 1; i < static_cast<std::size_t>(half); ++i)
    if (!(q1(m, exterior[i]) < q1(m, exterior[i - 1]))) rep.q1_monotone = false;
  rep.q2_monotone = true;
  for (std::size_t i = half + 1; i < exterior.size(); ++i)
    if (!(q2(m, exterior[i]) > q2(m, exterior[i - 1]))) rep.q2_monotone = false;

  rep.q1_threshold_residual =
      std::fabs(s.x1 - m.constants.E1 -
                m.constants.F1 * s.D2 * std::exp(-m.roots.r2 * s.u));
  rep.q2_threshold_residual =
      std::fabs(s.x2 - m.constants.E2 -
                m.constants.F2 * s.D1 * std::exp(-m.roots.r1 * s.u));
  rep.q1_continuous_at_threshold = rep.q1_threshold_residual <= kContinuityTol;
  rep.q2_continuous_at_threshold = rep.q2_threshold_residual <= kContinuityTol;

  rep.passed = rep.representation_sup_error <= kRepresentationTol &&
               rep.majorant_min_gap >= -kMajorantTol && rep.q1_monotone &&
               rep.q2_monotone && rep.q1_continuous_at_threshold &&
               rep.q2_continuous_at_threshold;
  return rep;
}

}  // namespace twostop
