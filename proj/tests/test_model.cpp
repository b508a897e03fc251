// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <limits>
#include <vector>

#include "support.hpp"
#include "twostop/model.hpp"

using namespace twostop;

namespace {
const ModelParams kAsym = validate(1, 3, 3, 1, 1);
const ModelParams kSym = validate(1, 1, 1, 1, 1);
}  // namespace

TEST_CASE("validate accepts the reference parameter sets") {
  REQUIRE_NOTHROW(validate(1, 3, 3, 1, 1));
  REQUIRE_NOTHROW(validate(1, 1, 1, 1, 1));
}

TEST_CASE("validate names the offending field") {
  REQUIRE_THROWS_AS(validate(0, 1, 1, 1, 1), NonPositiveParameter);
  try {
    validate(0, 1, 1, 1, 1);
    FAIL("expected NonPositiveParameter");
  } catch (const NonPositiveParameter& e) {
    REQUIRE(e.field_name == "alpha1");
  }
  REQUIRE_THROWS_AS(validate(1, -0.5, 1, 1, 1), NonPositiveParameter);
  REQUIRE_THROWS_AS(validate(1, 1, 1, 1, 0), NonPositiveParameter);
  REQUIRE_THROWS_AS(validate(1, 1, std::numeric_limits<double>::quiet_NaN(), 1, 1), NonFinite);
  REQUIRE_THROWS_AS(validate(1, 1, 1, std::numeric_limits<double>::infinity(), 1), NonFinite);
}

TEST_CASE("psi vanishes at zero and matches the symmetric closed form") {
  REQUIRE(psi(kSym, 0.0) == 0.0);
  REQUIRE(psi(kAsym, 0.0) == 0.0);
  // symmetric parameters collapse psi to 2 z^2 / (1 - z^2)
  REQUIRE(std::fabs(psi(kSym, 0.5) - 2.0 / 3.0) <= 1e-15);
  for (double z : {-0.9, -0.4, 0.3, 0.8})
    REQUIRE(std::fabs(psi(kSym, z) - 2.0 * z * z / (1.0 - z * z)) <= 1e-12);
}

TEST_CASE("psi blows up toward the poles and rejects points beyond them") {
  REQUIRE(psi(kAsym, -1.0 + 1e-9) > 1e8);
  REQUIRE(psi(kAsym, 3.0 - 1e-9) > 1e8);
  REQUIRE_THROWS_AS(psi(kAsym, -1.0), OutOfDomain);
  REQUIRE_THROWS_AS(psi(kAsym, 3.0), OutOfDomain);
  REQUIRE_THROWS_AS(psi(kAsym, -2.5), OutOfDomain);
}

TEST_CASE("psi is convex with a single valley between the poles") {
  // The exponent of a pure-jump process with exponential tails is strictly
  // convex on the strip; sign of its slope at 0 depends on the parameters,
  // so convexity (not monotonicity on each side of 0) is the stable shape.
  for (const ModelParams& p : {kSym, kAsym}) {
    const int n = 400;
    std::vector<double> vals;
    const double lo = -p.alpha1 + 1e-3, hi = p.alpha2 - 1e-3;
    for (int i = 0; i <= n; ++i) vals.push_back(psi(p, lo + (hi - lo) * i / n));
    std::size_t valley = 0;
    for (std::size_t i = 1; i < vals.size(); ++i)
      if (vals[i] < vals[valley]) valley = i;
    for (std::size_t i = 1; i < valley; ++i) REQUIRE(vals[i] <= vals[i - 1]);
    for (std::size_t i = valley + 1; i < vals.size(); ++i) REQUIRE(vals[i] >= vals[i - 1]);
    for (std::size_t i = 1; i + 1 < vals.size(); ++i)
      REQUIRE(vals[i + 1] - 2.0 * vals[i] + vals[i - 1] > 0.0);
  }
}

TEST_CASE("solve_roots reproduces the quadratic closed forms") {
  // (1,3,3,1,1): clearing denominators in psi(z) = r gives 5 z^2 - 10 z - 3 = 0.
  const RootPair asym = solve_roots(kAsym);
  REQUIRE(std::fabs(asym.r1 - 0.26491106406735173) <= 1e-14);
  REQUIRE(std::fabs(asym.r2 - 2.2649110640673517) <= 1e-14);
  // (1,1,1,1,1): 2 z^2 / (1 - z^2) = 1 gives z = 3^{-1/2}.
  const RootPair sym = solve_roots(kSym);
  REQUIRE(std::fabs(sym.r1 - 1.0 / std::sqrt(3.0)) <= 1e-14);
  REQUIRE(std::fabs(sym.r2 - 1.0 / std::sqrt(3.0)) <= 1e-14);
  REQUIRE(std::fabs(sym.r1 - sym.r2) <= 1e-12);
}

TEST_CASE("root residuals and brackets hold for random parameters") {
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const ModelParams p = testsupport::random_params(991, i);
    const RootPair roots = solve_roots(p);
    REQUIRE(roots.r1 > 0.0);
    REQUIRE(roots.r1 < p.alpha1);
    REQUIRE(roots.r2 > 0.0);
    REQUIRE(roots.r2 < p.alpha2);
    REQUIRE(std::fabs(psi(p, -roots.r1) - p.r) <= 1e-12 * p.r);
    REQUIRE(std::fabs(psi(p, roots.r2) - p.r) <= 1e-12 * p.r);
    REQUIRE(root_margin(p, roots) > 0.0);
  }
}

TEST_CASE("quadratic and bisection routes agree") {
  for (std::uint64_t i = 0; i < 300; ++i) {
    const ModelParams p = testsupport::random_params(992, i);
    const RootPair a = solve_roots(p);
    const RootPair b = solve_roots_bisection(p);
    REQUIRE(std::fabs(a.r1 - b.r1) <= 1e-10);
    REQUIRE(std::fabs(a.r2 - b.r2) <= 1e-10);
  }
}

TEST_CASE("mirrored parameters give mirrored roots") {
  for (std::uint64_t i = 0; i < 200; ++i) {
    const ModelParams p = testsupport::random_params(993, i);
    const ModelParams mirrored = validate(p.alpha2, p.lambda2, p.alpha1, p.lambda1, p.r);
    const RootPair a = solve_roots(p);
    const RootPair b = solve_roots(mirrored);
    REQUIRE(std::fabs(a.r1 - b.r2) <= 1e-12 * std::max(1.0, a.r1));
    REQUIRE(std::fabs(a.r2 - b.r1) <= 1e-12 * std::max(1.0, a.r2));
  }
}
