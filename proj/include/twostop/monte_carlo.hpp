// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "twostop/errors.hpp"
#include "twostop/model.hpp"
#include "twostop/threshold.hpp"

namespace twostop {

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

}  // namespace detail

/// Random stream addressed by (seed, path index): the state is derived by
/// avalanche mixing, so any path's draws can be reproduced independently of
/// execution order or worker count.
class PathRng {
 public:
  PathRng(std::uint64_t seed, std::uint64_t path)
      : state_(detail::mix64(seed + 0x9e3779b97f4a7c15ULL * (path + 1))) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return detail::mix64(state_);
  }

  /// Uniform on the open interval (0, 1); never returns an endpoint.
  double uniform01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  double exponential(double rate) { return -std::log(uniform01()) / rate; }

 private:
  std::uint64_t state_;
};

/// First exit of one path from the open interval (lower, upper).
struct PathOutcome {
  double exit_time;
  double exit_position;
  double discounted_payoff;
  bool truncated;
};

/// Event-driven simulation with no time discretization: the path is constant
/// between jumps, so the first exit happens exactly at a jump epoch.
/// Interarrival times are Exp(lambda1 + lambda2); each event is a downward
/// Exp(alpha1) jump with probability lambda1/(lambda1 + lambda2), otherwise
/// an upward Exp(alpha2) jump.  Paths still inside at t_max are truncated
/// and contribute payoff zero.
inline PathOutcome simulate_path(const ModelParams& p, double start, double lower,
                                 double upper, PathRng& rng, double t_max) {
  if (start <= lower || start >= upper) return PathOutcome{0.0, start, std::fabs(start), false};
  const double total = p.lambda1 + p.lambda2;
  const double p_down = p.lambda1 / total;
  double t = 0.0;
  double pos = start;
  for (;;) {
    t += rng.exponential(total);
    if (t > t_max) return PathOutcome{t_max, pos, 0.0, true};
    if (rng.uniform01() < p_down)
      pos -= rng.exponential(p.alpha1);
    else
      pos += rng.exponential(p.alpha2);
    if (pos <= lower || pos >= upper)
      return PathOutcome{t, pos, std::exp(-p.r * t) * std::fabs(pos), false};
  }
}

struct SimEstimate {
  double mean;
  double standard_error;
  long long n;
  long long truncated_count;
};

namespace detail {

/// Streaming mean and second central moment.  The pairwise combination keeps
/// results exact when every sample is identical, and both update rules are
/// deterministic, so block-wise accumulation in index order is bit-stable.
struct RunningMoments {
  long long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  void combine(const RunningMoments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double d = o.mean - mean;
    const long long t = n + o.n;
    mean += d * (static_cast<double>(o.n) / static_cast<double>(t));
    m2 += o.m2 + d * d * (static_cast<double>(n) * static_cast<double>(o.n) /
                          static_cast<double>(t));
    n = t;
  }
};

constexpr long long kBlockSize = 4096;

/// Dispatches fixed-size index blocks to a worker pool.  Block boundaries do
/// not depend on the worker count, so per-block results combined in block
/// order are identical for any number of threads.
template <class BlockFn>
void for_each_block(long long n, int threads, BlockFn&& fn) {
  const long long nblocks = (n + kBlockSize - 1) / kBlockSize;
  long long nthreads = threads > 0 ? threads : static_cast<long long>(std::thread::hardware_concurrency());
  nthreads = std::max<long long>(1, std::min(nthreads, nblocks));
  if (nthreads == 1) {
    for (long long b = 0; b < nblocks; ++b)
      fn(b, b * kBlockSize, std::min(n, (b + 1) * kBlockSize));
    return;
  }
  std::atomic<long long> cursor{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nthreads));
  for (long long w = 0; w < nthreads; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const long long b = cursor.fetch_add(1, std::memory_order_relaxed);
        if (b >= nblocks) return;
        fn(b, b * kBlockSize, std::min(n, (b + 1) * kBlockSize));
      }
    });
  for (auto& worker : pool) worker.join();
}

}  // namespace detail

/// Mean discounted payoff of the two-sided stopping rule with the given
/// thresholds, over n independent paths.  Deterministic for fixed (seed, n)
/// regardless of worker count.
inline SimEstimate estimate_value_with_thresholds(const ModelParams& p, double lower,
                                                  double upper, double start, long long n,
                                                  std::uint64_t seed, int threads = 0) {
  if (n < 1) throw OutOfDomain("estimate: need at least one path");
  if (!(lower < upper)) throw OutOfDomain("estimate: thresholds must satisfy lower < upper");
  const double t_max = 50.0 / p.r;
  const long long nblocks = (n + detail::kBlockSize - 1) / detail::kBlockSize;
  std::vector<detail::RunningMoments> moments(static_cast<std::size_t>(nblocks));
  std::vector<long long> truncated(static_cast<std::size_t>(nblocks), 0);
  detail::for_each_block(n, threads, [&](long long b, long long begin, long long end) {
    detail::RunningMoments acc;
    long long trunc = 0;
    for (long long i = begin; i < end; ++i) {
      PathRng rng(seed, static_cast<std::uint64_t>(i));
      const PathOutcome out = simulate_path(p, start, lower, upper, rng, t_max);
      acc.add(out.discounted_payoff);
      trunc += out.truncated ? 1 : 0;
    }
    moments[static_cast<std::size_t>(b)] = acc;
    truncated[static_cast<std::size_t>(b)] = trunc;
  });
  detail::RunningMoments total;
  long long trunc = 0;
  for (long long b = 0; b < nblocks; ++b) {
    total.combine(moments[static_cast<std::size_t>(b)]);
    trunc += truncated[static_cast<std::size_t>(b)];
  }
  const double variance =
      total.n > 1 ? std::max(0.0, total.m2 / static_cast<double>(total.n - 1)) : 0.0;
  return SimEstimate{total.mean, std::sqrt(variance / static_cast<double>(total.n)),
                     total.n, trunc};
}

/// Estimate under the optimal rule: stop on first exit from (-x1, x2).
inline SimEstimate estimate_value(const ModelParams& p, const Solution& s, double start,
                                  long long n, std::uint64_t seed, int threads = 0) {
  return estimate_value_with_thresholds(p, -s.x1, s.x2, start, n, seed, threads);
}

/// Supremum and infimum of the path over an independent Exp(r) horizon,
/// sampled from start 0.  The extremum equals zero exactly when no jump
/// pushed the path past zero on that side before the horizon, which is the
/// atom of the defective exponential law.
struct ExtremaSample {
  long long n;
  double atom_freq_sup;
  double atom_freq_inf;
  std::vector<double> sup_continuous;
  std::vector<double> inf_continuous;
};

inline ExtremaSample sample_extrema(const ModelParams& p, long long n, std::uint64_t seed,
                                    int threads = 0) {
  if (n < 1) throw OutOfDomain("sample_extrema: need at least one path");
  std::vector<double> mx(static_cast<std::size_t>(n));
  std::vector<double> mn(static_cast<std::size_t>(n));
  const double total = p.lambda1 + p.lambda2;
  const double p_down = p.lambda1 / total;
  detail::for_each_block(n, threads, [&](long long, long long begin, long long end) {
    for (long long i = begin; i < end; ++i) {
      PathRng rng(seed, static_cast<std::uint64_t>(i));
      const double horizon = rng.exponential(p.r);
      double t = 0.0, pos = 0.0, hi = 0.0, lo = 0.0;
      for (;;) {
        t += rng.exponential(total);
        if (t > horizon) break;
        if (rng.uniform01() < p_down)
          pos -= rng.exponential(p.alpha1);
        else
          pos += rng.exponential(p.alpha2);
        hi = std::max(hi, pos);
        lo = std::min(lo, pos);
      }
      mx[static_cast<std::size_t>(i)] = hi;
      mn[static_cast<std::size_t>(i)] = lo;
    }
  });
  ExtremaSample out;
  out.n = n;
  long long atom_sup = 0, atom_inf = 0;
  for (long long i = 0; i < n; ++i) {
    const double hi = mx[static_cast<std::size_t>(i)];
    const double lo = mn[static_cast<std::size_t>(i)];
    if (hi == 0.0)
      ++atom_sup;
    else
      out.sup_continuous.push_back(hi);
    if (lo == 0.0)
      ++atom_inf;
    else
      out.inf_continuous.push_back(-lo);
  }
  out.atom_freq_sup = static_cast<double>(atom_sup) / static_cast<double>(n);
  out.atom_freq_inf = static_cast<double>(atom_inf) / static_cast<double>(n);
  return out;
}

}  // namespace twostop
