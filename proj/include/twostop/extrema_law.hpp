// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include "twostop/errors.hpp"
#include "twostop/model.hpp"

namespace twostop {

enum class Orientation { supremum, infimum };

/// Law of the overall supremum M or infimum I of the discounted process:
/// a defective exponential, i.e. an atom at zero plus an exponential
/// density on the rest of the support.
struct ExtremaLaw {
  double atom_mass;
  double rate;
  Orientation orientation;
};

/// Constants derived from the extrema laws.  E1 and E2 are the mean
/// magnitudes of I and M; F1 and F2 the reciprocal exponential moments
/// (E e^{r2 I})^{-1} and (E e^{-r1 M})^{-1}; G1 = F1 - 1, G2 = F2 - 1.
struct WHConstants {
  double E1;
  double E2;
  double F1;
  double F2;
  double G1;
  double G2;
};

/// M is exponential with rate r2 on (0, inf) plus an atom of mass r2/alpha2 at 0.
inline ExtremaLaw law_of_supremum(const ModelParams& p, const RootPair& roots) {
  return ExtremaLaw{roots.r2 / p.alpha2, roots.r2, Orientation::supremum};
}

/// I is exponential with rate r1 on (-inf, 0) plus an atom of mass r1/alpha1 at 0.
inline ExtremaLaw law_of_infimum(const ModelParams& p, const RootPair& roots) {
  return ExtremaLaw{roots.r1 / p.alpha1, roots.r1, Orientation::infimum};
}

/// Absolutely continuous part of the law only; the atom is carried separately
/// in atom_mass.
inline double density(const ExtremaLaw& law, double x) {
  if (law.orientation == Orientation::supremum) {
    if (x < 0.0) throw OutOfSupport("supremum law has support [0, inf)");
    return (1.0 - law.atom_mass) * law.rate * std::exp(-law.rate * x);
  }
  if (x > 0.0) throw OutOfSupport("infimum law has support (-inf, 0]");
  return (1.0 - law.atom_mass) * law.rate * std::exp(law.rate * x);
}

inline WHConstants constants(const ModelParams& p, const RootPair& roots) {
  const double E1 = 1.0 / roots.r1 - 1.0 / p.alpha1;
  const double E2 = 1.0 / roots.r2 - 1.0 / p.alpha2;
  const double F1 = (p.alpha1 / roots.r1) * (roots.r1 + roots.r2) / (p.alpha1 + roots.r2);
  const double F2 = (p.alpha2 / roots.r2) * (roots.r1 + roots.r2) / (roots.r1 + p.alpha2);
  return WHConstants{E1, E2, F1, F2, F1 - 1.0, F2 - 1.0};
}

}  // namespace twostop
