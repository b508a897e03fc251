// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "twostop/errors.hpp"
#include "twostop/extrema_law.hpp"
#include "twostop/model.hpp"

namespace twostop {

/// Closed-form solution of the two-sided stopping problem with payoff |x|:
/// the continuation region is (-x1, x2) of width u = x1 + x2, and inside it
/// the value function is D1 e^{-r1 (x + x1)} + D2 e^{r2 (x - x2)}.
struct Solution {
  double u;
  double x1;
  double x2;
  double D1;
  double D2;
};

/// Right-hand side of the scalar fixed-point equation satisfied by the
/// continuation-region width u.  Strictly decreasing in u, from
/// 2 (E1 F2 + E2 F1) / (1 - G1 G2) at u = 0 down to E1 + E2.
inline double fixed_point_rhs(const WHConstants& c, const RootPair& roots, double u) {
  const double es = std::exp(-(roots.r1 + roots.r2) * u);
  const double e1 = std::exp(-roots.r1 * u);
  const double e2 = std::exp(-roots.r2 * u);
  const double num =
      c.E1 + c.E2 + (c.E1 * c.G2 + c.E2 * c.G1) * es + c.E1 * c.F2 * e1 + c.E2 * c.F1 * e2;
  const double den = 1.0 - c.G1 * c.G2 * es;
  return num / den;
}

/// Solves u = fixed_point_rhs(u) by bisection over the a-priori bracket
/// [E1 + E2, E1 (1 + F2) + E2 (1 + F1)], then one finite-difference Newton
/// polish.  The gap u - rhs(u) is strictly increasing, so the sign change
/// pins the unique root.
inline double solve_u(const WHConstants& c, const RootPair& roots) {
  auto gap = [&](double u) { return u - fixed_point_rhs(c, roots, u); };
  double lo = c.E1 + c.E2;
  double hi = c.E1 * (1.0 + c.F2) + c.E2 * (1.0 + c.F1);
  if (gap(lo) > 0.0) throw SolverFailure("fixed-point bracket lost its left sign");
  for (int k = 0; gap(hi) < 0.0; ++k) {
    if (k >= 60) throw SolverFailure("fixed-point bracket lost its right sign");
    hi *= 2.0;
  }
  while (hi - lo > 1e-14 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (gap(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  double u = 0.5 * (lo + hi);
  const double h = 1e-7 * std::max(1.0, u);
  const double slope = (gap(u + h) - gap(u - h)) / (2.0 * h);
  if (slope > 0.0) u -= gap(u) / slope;
  const double residual = std::fabs(gap(u));
  if (residual > 1e-12)
    throw SolverFailure("fixed-point residual " + std::to_string(residual) +
                        " exceeds tolerance");
  return u;
}

/// Splits the width u into the two threshold magnitudes.
inline std::pair<double, double> thresholds(const WHConstants& c, const RootPair& roots,
                                            double u) {
  const double es = std::exp(-(roots.r1 + roots.r2) * u);
  const double e1 = std::exp(-roots.r1 * u);
  const double e2 = std::exp(-roots.r2 * u);
  const double x1 = (c.E1 * (1.0 - es) + c.F1 * u * e2) / (1.0 + c.G1 * es + c.F1 * e2);
  const double x2 = (c.E2 * (1.0 - es) + c.F2 * u * e1) / (1.0 + c.G2 * es + c.F2 * e1);
  if (std::fabs(x1 + x2 - u) > 1e-10 * std::max(1.0, u))
    throw ConsistencyFailure("threshold split does not sum back to the width");
  return {x1, x2};
}

namespace detail {

/// The defining 2x2 linear system for the coefficients:
///   D1 + D2 e^{-r2 u} = x1,   D1 e^{-r1 u} + D2 = x2,
/// solved by elimination with partial pivoting (independent arithmetic route
/// used to cross-check the closed form).
inline std::pair<double, double> coefficients_by_elimination(double x1, double x2,
                                                             const RootPair& roots) {
  const double u = x1 + x2;
  double a11 = 1.0, a12 = std::exp(-roots.r2 * u), b1 = x1;
  double a21 = std::exp(-roots.r1 * u), a22 = 1.0, b2 = x2;
  if (std::fabs(a21) > std::fabs(a11)) {
    std::swap(a11, a21);
    std::swap(a12, a22);
    std::swap(b1, b2);
  }
  const double m = a21 / a11;
  const double d2 = (b2 - m * b1) / (a22 - m * a12);
  const double d1 = (b1 - a12 * d2) / a11;
  return {d1, d2};
}

}  // namespace detail

/// Coefficients of the two exponentials in the value function, from the
/// closed-form solution of the linear system tying them to the thresholds.
inline std::pair<double, double> coefficients(double x1, double x2, const RootPair& roots) {
  const double u = x1 + x2;
  const double es = std::exp(-(roots.r1 + roots.r2) * u);
  const double D1 = (x1 - x2 * std::exp(-roots.r2 * u)) / (1.0 - es);
  const double D2 = (x2 - x1 * std::exp(-roots.r1 * u)) / (1.0 - es);
  const auto [d1, d2] = detail::coefficients_by_elimination(x1, x2, roots);
  if (std::fabs(D1 - d1) > 1e-10 * std::max(1.0, std::fabs(D1)) ||
      std::fabs(D2 - d2) > 1e-10 * std::max(1.0, std::fabs(D2)))
    throw ConsistencyFailure("coefficient closed form disagrees with the linear system");
  return {D1, D2};
}

/// Residuals of every identity a Solution is supposed to satisfy; all of
/// them are ~1e-15 for a healthy solve.
struct SolutionDiagnostics {
  double fixed_point_residual;
  double width_split_residual;
  double system_lower_residual;
  double system_upper_residual;
  /// Averaging-function boundary identities x1 = E1 + F1 D2 e^{-r2 u} and
  /// x2 = E2 + F2 D1 e^{-r1 u}.
  double boundary_lower_residual;
  double boundary_upper_residual;
};

inline SolutionDiagnostics diagnose(const WHConstants& c, const RootPair& roots,
                                    const Solution& s) {
  const double e1 = std::exp(-roots.r1 * s.u);
  const double e2 = std::exp(-roots.r2 * s.u);
  return SolutionDiagnostics{
      std::fabs(s.u - fixed_point_rhs(c, roots, s.u)),
      std::fabs(s.x1 + s.x2 - s.u),
      std::fabs(s.D1 + s.D2 * e2 - s.x1),
      std::fabs(s.D1 * e1 + s.D2 - s.x2),
      std::fabs(s.x1 - c.E1 - c.F1 * s.D2 * e2),
      std::fabs(s.x2 - c.E2 - c.F2 * s.D1 * e1)};
}

/// Full pipeline: roots, constants, width, thresholds, coefficients.  After
/// the first pass the thresholds are re-expressed through the boundary
/// identities x1 = E1 + F1 D2 e^{-r2 u} and x2 = E2 + F2 D1 e^{-r1 u}, which
/// makes the lower bounds x1 >= E1, x2 >= E2 hold exactly in floating point,
/// and the coefficients are recomputed to match.
inline Solution solve(const ModelParams& p) {
  const RootPair roots = solve_roots(p);
  const WHConstants c = constants(p, roots);
  const double u = solve_u(c, roots);
  auto [x1, x2] = thresholds(c, roots, u);
  auto [D1, D2] = coefficients(x1, x2, roots);
  x1 = c.E1 + c.F1 * D2 * std::exp(-roots.r2 * u);
  x2 = c.E2 + c.F2 * D1 * std::exp(-roots.r1 * u);
  std::tie(D1, D2) = coefficients(x1, x2, roots);
  if (!(D1 > 0.0 && D2 > 0.0))
    throw ConsistencyFailure("value-function coefficients must be strictly positive");
  if (std::fabs(x1 + x2 - u) > 1e-12 * std::max(1.0, u))
    throw ConsistencyFailure("refined thresholds drifted away from the width");
  return Solution{u, x1, x2, D1, D2};
}

}  // namespace twostop
