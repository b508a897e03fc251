// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "twostop/errors.hpp"

namespace twostop {

/// Compound Poisson process with two-sided exponential jumps, observed under
/// a constant discount rate: downward jumps of size Exp(alpha1) arrive at
/// intensity lambda1, upward jumps of size Exp(alpha2) at intensity lambda2.
struct ModelParams {
  double alpha1;
  double lambda1;
  double alpha2;
  double lambda2;
  double r;
};

/// Roots of psi(z) = r: the negative root is -r1 with r1 in (0, alpha1),
/// the positive root is r2 in (0, alpha2).
struct RootPair {
  double r1;
  double r2;
};

inline ModelParams validate(double alpha1, double lambda1, double alpha2,
                            double lambda2, double r) {
  const struct {
    const char* name;
    double value;
  } fields[] = {{"alpha1", alpha1},
                {"lambda1", lambda1},
                {"alpha2", alpha2},
                {"lambda2", lambda2},
                {"r", r}};
  for (const auto& f : fields) {
    if (!std::isfinite(f.value)) throw NonFinite(f.name);
    if (f.value <= 0.0) throw NonPositiveParameter(f.name);
  }
  return ModelParams{alpha1, lambda1, alpha2, lambda2, r};
}

/// Characteristic exponent psi(z) = -lambda1 z/(alpha1+z) + lambda2 z/(alpha2-z),
/// finite strictly between the poles at -alpha1 and alpha2.
inline double psi(const ModelParams& p, double z) {
  if (!(z > -p.alpha1 && z < p.alpha2))
    throw OutOfDomain("psi: argument outside (-alpha1, alpha2)");
  return -p.lambda1 * z / (p.alpha1 + z) + p.lambda2 * z / (p.alpha2 - z);
}

inline double psi_derivative(const ModelParams& p, double z) {
  if (!(z > -p.alpha1 && z < p.alpha2))
    throw OutOfDomain("psi_derivative: argument outside (-alpha1, alpha2)");
  const double d1 = p.alpha1 + z;
  const double d2 = p.alpha2 - z;
  return -p.lambda1 * p.alpha1 / (d1 * d1) + p.lambda2 * p.alpha2 / (d2 * d2);
}

namespace detail {

/// One Newton step on psi(z) - r, clamped to keep z inside (lo, hi).
inline double polish_root(const ModelParams& p, double z, double lo, double hi) {
  const double f = psi(p, z) - p.r;
  const double d = psi_derivative(p, z);
  if (d == 0.0) return z;
  double step = f / d;
  double next = z - step;
  if (next <= lo || next >= hi) return z;
  return next;
}

}  // namespace detail

/// Finds the two roots of psi(z) = r.  Clearing denominators gives the
/// quadratic a z^2 + b z + c = 0 with a = lambda1 + lambda2 + r,
/// b = lambda2 alpha1 - lambda1 alpha2 - r (alpha2 - alpha1), c = -r alpha1 alpha2;
/// c < 0 forces one root on each side of zero.  Roots are extracted with the
/// cancellation-free quadratic formula and polished on psi itself.
inline RootPair solve_roots(const ModelParams& p) {
  const double a = p.lambda1 + p.lambda2 + p.r;
  const double b = p.lambda2 * p.alpha1 - p.lambda1 * p.alpha2 - p.r * (p.alpha2 - p.alpha1);
  const double c = -p.r * p.alpha1 * p.alpha2;
  const double disc = b * b - 4.0 * a * c;
  if (disc <= 0.0) throw SolverFailure("root quadratic has no real separation");
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  double za = q / a;
  double zb = c / q;
  double neg = std::min(za, zb);
  double pos = std::max(za, zb);

  neg = detail::polish_root(p, neg, -p.alpha1, 0.0);
  pos = detail::polish_root(p, pos, 0.0, p.alpha2);

  const RootPair roots{-neg, pos};
  const double res1 = std::fabs(psi(p, -roots.r1) - p.r);
  const double res2 = std::fabs(psi(p, roots.r2) - p.r);
  if (!(roots.r1 > 0.0 && roots.r1 < p.alpha1 && roots.r2 > 0.0 && roots.r2 < p.alpha2))
    throw SolverFailure("roots escaped their brackets");
  if (res1 > 1e-12 * p.r || res2 > 1e-12 * p.r)
    throw SolverFailure("root residuals exceed tolerance: " + std::to_string(res1) +
                        ", " + std::to_string(res2));
  return roots;
}

/// Distance from each root to its pole; small margins flag ill-conditioned
/// parameter sets in diagnostics.
inline double root_margin(const ModelParams& p, const RootPair& roots) {
  return std::min(p.alpha1 - roots.r1, p.alpha2 - roots.r2);
}

/// Independent route to the same roots: bracketed bisection on psi(z) = r,
/// marching the outer bracket toward the pole until the sign flips.
inline RootPair solve_roots_bisection(const ModelParams& p) {
  auto bisect = [&p](double inner, double pole) {
    double hi = pole;
    for (int k = 1; k < 60; ++k) {
      hi = inner + (pole - inner) * (1.0 - std::ldexp(1.0, -k));
      if (psi(p, hi) - p.r > 0.0) break;
    }
    double lo = inner;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (psi(p, mid) - p.r < 0.0)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  };
  const double pos = bisect(0.0, p.alpha2);
  const double neg = bisect(0.0, -p.alpha1);
  return RootPair{-neg, pos};
}

}  // namespace twostop
