// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "support.hpp"
#include "twostop/smooth_pasting.hpp"

using namespace twostop;

namespace {

const ValueModel kAsym = build_value_model(validate(1, 3, 3, 1, 1));
const ValueModel kSym = build_value_model(validate(1, 1, 1, 1, 1));

/// One-sided second-order finite-difference jump of V' at x0.
double fd_jump(const ValueModel& m, double x0, double h) {
  const double dp =
      (4.0 * value_at(m, x0 + h) - 3.0 * value_at(m, x0) - value_at(m, x0 + 2.0 * h)) /
      (2.0 * h);
  const double dm =
      (3.0 * value_at(m, x0) - 4.0 * value_at(m, x0 - h) + value_at(m, x0 - 2.0 * h)) /
      (2.0 * h);
  return dp - dm;
}

}  // namespace

TEST_CASE("derivative jumps match the frozen reference values") {
  REQUIRE(std::fabs(direct_jump(kSym, Threshold::upper) - 0.67900407318157044) <= 1e-13);
  REQUIRE(std::fabs(direct_jump(kSym, Threshold::lower) - 0.67900407318157044) <= 1e-13);
  REQUIRE(std::fabs(direct_jump(kAsym, Threshold::upper) - 0.95782118028970264) <= 1e-13);
  REQUIRE(std::fabs(direct_jump(kAsym, Threshold::lower) - 0.26494561584609984) <= 1e-13);
}

TEST_CASE("atom identity reproduces the direct jump") {
  for (const ValueModel& m : {kSym, kAsym}) {
    for (Threshold t : {Threshold::lower, Threshold::upper}) {
      REQUIRE(std::fabs(direct_jump(m, t) - theorem_jump(m, t)) <= 1e-12);
      REQUIRE(direct_jump(m, t) > 0.0);
    }
  }
}

TEST_CASE("atom identity holds across random parameters") {
  for (std::uint64_t i = 0; i < 100; ++i) {
    const ModelParams p = testsupport::random_params(551, i);
    const ValueModel m = build_value_model(p);
    for (Threshold t : {Threshold::lower, Threshold::upper}) {
      REQUIRE(std::fabs(direct_jump(m, t) - theorem_jump(m, t)) <= 1e-10);
      REQUIRE(direct_jump(m, t) > 0.0);
    }
  }
}

TEST_CASE("direct jumps agree with finite differences of the value function") {
  for (const ValueModel& m : {kSym, kAsym}) {
    REQUIRE(std::fabs(direct_jump(m, Threshold::upper) - fd_jump(m, m.solution.x2, 1e-5)) <= 1e-6);
    REQUIRE(std::fabs(direct_jump(m, Threshold::lower) - fd_jump(m, -m.solution.x1, 1e-5)) <= 1e-6);
  }
}

TEST_CASE("angle reports flag the failure of smooth pasting") {
  for (const ValueModel& m : {kSym, kAsym}) {
    for (Threshold t : {Threshold::lower, Threshold::upper}) {
      const AngleReport rep = angle_report(m, t);
      REQUIRE(rep.agreement_residual <= 1e-10);
      REQUIRE_FALSE(rep.smooth_pasting_holds);
      REQUIRE(rep.moment_check_holds);
      REQUIRE(rep.moment_check_value < m.params.r);
    }
  }
}

TEST_CASE("exponential moment hypothesis holds for random parameters") {
  // psi is convex and zero at the origin, so psi at half the root stays
  // below half the discount rate on both sides.
  for (std::uint64_t i = 0; i < 200; ++i) {
    const ModelParams p = testsupport::random_params(552, i);
    const ValueModel m = build_value_model(p);
    REQUIRE(psi(p, 0.5 * m.roots.r2) < p.r);
    REQUIRE(psi(p, -0.5 * m.roots.r1) < p.r);
  }
}

TEST_CASE("the value function is smooth strictly inside the thresholds") {
  REQUIRE(std::fabs(interior_smoothness_check(kSym, 0.0)) <= 1e-10);
  for (const ValueModel& m : {kSym, kAsym}) {
    REQUIRE(std::fabs(interior_smoothness_check(m, m.solution.x2 / 2.0)) <= 1e-6);
    REQUIRE(std::fabs(interior_smoothness_check(m, -m.solution.x1 / 2.0)) <= 1e-6);
  }
  REQUIRE_THROWS_AS(interior_smoothness_check(kSym, kSym.solution.x2 - 1e-4), OutOfDomain);
  REQUIRE_THROWS_AS(interior_smoothness_check(kSym, kSym.solution.x2 + 1.0), OutOfDomain);
}

TEST_CASE("symmetric model has equal jumps at both thresholds") {
  REQUIRE(std::fabs(direct_jump(kSym, Threshold::upper) - direct_jump(kSym, Threshold::lower)) <=
          1e-12);
  REQUIRE(std::fabs(theorem_jump(kSym, Threshold::upper) - theorem_jump(kSym, Threshold::lower)) <=
          1e-12);
}
