// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace twostop {

/// One-sample Kolmogorov-Smirnov statistic of `values` against the
/// continuous distribution function `cdf`.
template <class Cdf>
double ks_statistic(std::vector<double> values, Cdf&& cdf) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = cdf(values[i]);
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

namespace detail {

/// Tail of the Kolmogorov distribution, 2 sum_{k>=1} (-1)^{k-1} e^{-2 k^2 t^2}.
inline double kolmogorov_tail(double t) {
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * double(k) * double(k) * t * t);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-18) break;
  }
  return 2.0 * sum;
}

}  // namespace detail

/// Critical value for the KS statistic at significance `alpha` and sample
/// size n, from the asymptotic law: smallest d with P(sqrt(n) D > sqrt(n) d)
/// = alpha.
inline double ks_critical(double alpha, std::size_t n) {
  double lo = 0.3, hi = 3.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (detail::kolmogorov_tail(mid) > alpha)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi) / std::sqrt(static_cast<double>(n));
}

}  // namespace twostop
