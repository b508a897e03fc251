// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: solves the two-sided optimal stopping problem for
// a compound Poisson process with two-sided exponential jumps and payoff |x|,
// verifies the optimality hypotheses numerically, reports the smooth-pasting
// angles, cross-checks the solution by exact Monte Carlo simulation, and
// exports value-function curves.

#include <CLI11.hpp>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "twostop/twostop.hpp"

namespace {

using nlohmann::ordered_json;
using namespace twostop;

constexpr std::array<const char*, 5> kParamNames = {"alpha1", "lambda1", "alpha2",
                                                    "lambda2", "r"};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct ParamFlags {
  double alpha1 = 0, lambda1 = 0, alpha2 = 0, lambda2 = 0, r = 0;
};

void add_param_flags(CLI::App* cmd, ParamFlags& f) {
  cmd->add_option("--alpha1", f.alpha1, "rate of downward jump sizes");
  cmd->add_option("--lambda1", f.lambda1, "intensity of downward jumps");
  cmd->add_option("--alpha2", f.alpha2, "rate of upward jump sizes");
  cmd->add_option("--lambda2", f.lambda2, "intensity of upward jumps");
  cmd->add_option("--r", f.r, "discount rate");
}

/// Flat key=value configuration file mirroring the long flag names.  Lines
/// may carry '#' comments; unknown keys are ignored so one file can serve
/// several subcommands.  Values are injected only for flags absent from the
/// command line, so explicit flags take precedence.
int apply_config(CLI::App* cmd, const std::string& path) {
  std::ifstream f(path);
  if (!f) {
    std::cerr << "error: cannot read config file " << path << "\n";
    return 1;
  }
  std::string line;
  while (std::getline(f, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (!CLI::detail::trim_copy(line).empty()) {
        std::cerr << "error: config line is not key=value: " << line << "\n";
        return 1;
      }
      continue;
    }
    const std::string key = CLI::detail::trim_copy(line.substr(0, eq));
    const std::string value = CLI::detail::trim_copy(line.substr(eq + 1));
    if (key.empty() || key == "config") continue;
    CLI::Option* op = cmd->get_option_no_throw("--" + key);
    if (op == nullptr || !op->empty()) continue;
    op->add_result(value);
    op->run_callback();
  }
  return 0;
}

/// Names of the five model-parameter flags still missing after the config
/// merge; empty means the parameter set is complete.
std::string missing_params(const CLI::App* cmd) {
  std::string missing;
  for (const char* name : kParamNames)
    if (cmd->get_option_no_throw(std::string("--") + name)->empty())
      missing += (missing.empty() ? "--" : ", --") + std::string(name);
  return missing;
}

ordered_json params_json(const ModelParams& p) {
  return ordered_json{{"alpha1", p.alpha1},
                      {"lambda1", p.lambda1},
                      {"alpha2", p.alpha2},
                      {"lambda2", p.lambda2},
                      {"r", p.r}};
}

ordered_json roots_json(const ModelParams& p, const RootPair& roots) {
  return ordered_json{{"r1", roots.r1},
                      {"r2", roots.r2},
                      {"residual_r1", std::fabs(psi(p, -roots.r1) - p.r)},
                      {"residual_r2", std::fabs(psi(p, roots.r2) - p.r)},
                      {"pole_margin", root_margin(p, roots)}};
}

ordered_json constants_json(const WHConstants& c) {
  return ordered_json{{"E1", c.E1}, {"E2", c.E2}, {"F1", c.F1},
                      {"F2", c.F2}, {"G1", c.G1}, {"G2", c.G2}};
}

ordered_json solution_json(const Solution& s) {
  return ordered_json{
      {"u", s.u}, {"x1", s.x1}, {"x2", s.x2}, {"D1", s.D1}, {"D2", s.D2}};
}

ordered_json diagnostics_json(const SolutionDiagnostics& d) {
  return ordered_json{{"fixed_point", d.fixed_point_residual},
                      {"width_split", d.width_split_residual},
                      {"system_lower", d.system_lower_residual},
                      {"system_upper", d.system_upper_residual},
                      {"boundary_lower", d.boundary_lower_residual},
                      {"boundary_upper", d.boundary_upper_residual}};
}

ordered_json verification_json(const VerificationReport& r) {
  return ordered_json{{"representation_sup_error", r.representation_sup_error},
                      {"majorant_min_gap", r.majorant_min_gap},
                      {"q1_monotone", r.q1_monotone},
                      {"q2_monotone", r.q2_monotone},
                      {"q1_continuous_at_threshold", r.q1_continuous_at_threshold},
                      {"q2_continuous_at_threshold", r.q2_continuous_at_threshold},
                      {"q1_threshold_residual", r.q1_threshold_residual},
                      {"q2_threshold_residual", r.q2_threshold_residual},
                      {"passed", r.passed}};
}

ordered_json angle_json(const AngleReport& a) {
  return ordered_json{
      {"threshold", a.threshold == Threshold::lower ? "lower" : "upper"},
      {"direct_jump", a.direct_jump},
      {"theorem_jump", a.theorem_jump},
      {"agreement_residual", a.agreement_residual},
      {"smooth_pasting_holds", a.smooth_pasting_holds},
      {"moment_check_value", a.moment_check_value},
      {"moment_check_holds", a.moment_check_holds}};
}

void render_table(const ordered_json& doc, const std::string& prefix, std::ostream& out) {
  for (const auto& [key, value] : doc.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      render_table(value, path, out);
    } else if (value.is_array()) {
      int i = 0;
      for (const auto& item : value) render_table(item, path + "." + std::to_string(i++), out);
    } else if (value.is_number_float()) {
      out << path << " = " << fmt(value.get<double>()) << "\n";
    } else {
      out << path << " = " << value.dump() << "\n";
    }
  }
}

int emit(const ordered_json& doc, const std::string& format, const std::string& output) {
  std::ostringstream text;
  if (format == "json")
    text << doc.dump(2) << "\n";
  else
    render_table(doc, "", text);
  if (output.empty()) {
    std::cout << text.str();
    return 0;
  }
  std::ofstream f(output);
  if (!f) {
    std::cerr << "error: cannot write to " << output << "\n";
    return 1;
  }
  f << text.str();
  return f.good() ? 0 : 1;
}

int cmd_solve(const ParamFlags& flags, const std::string& format, const std::string& output) {
  const ModelParams p = validate(flags.alpha1, flags.lambda1, flags.alpha2, flags.lambda2, flags.r);
  const RootPair roots = solve_roots(p);
  const WHConstants c = constants(p, roots);
  const Solution s = solve(p);
  const SolutionDiagnostics d = diagnose(c, roots, s);
  ordered_json doc{{"params", params_json(p)},
                   {"roots", roots_json(p, roots)},
                   {"constants", constants_json(c)},
                   {"solution", solution_json(s)},
                   {"residuals", diagnostics_json(d)}};
  return emit(doc, format, output);
}

int cmd_verify(const ParamFlags& flags, bool have_params, const std::string& solution_path,
               double corrupt_x2, const std::string& format, const std::string& output) {
  ModelParams p{};
  Solution s{};
  if (!solution_path.empty()) {
    std::ifstream f(solution_path);
    if (!f) {
      std::cerr << "error: cannot read " << solution_path << "\n";
      return 1;
    }
    ordered_json doc = ordered_json::parse(f);
    const auto& pj = doc.at("params");
    p = validate(pj.at("alpha1").get<double>(), pj.at("lambda1").get<double>(),
                 pj.at("alpha2").get<double>(), pj.at("lambda2").get<double>(),
                 pj.at("r").get<double>());
    const auto& sj = doc.at("solution");
    s = Solution{sj.at("u").get<double>(), sj.at("x1").get<double>(),
                 sj.at("x2").get<double>(), sj.at("D1").get<double>(),
                 sj.at("D2").get<double>()};
  } else {
    if (!have_params) {
      std::cerr << "error: verify needs either --solution or all five model parameters\n";
      return 1;
    }
    p = validate(flags.alpha1, flags.lambda1, flags.alpha2, flags.lambda2, flags.r);
    s = solve(p);
  }
  if (corrupt_x2 != 0.0) s.x2 += corrupt_x2;
  const RootPair roots = solve_roots(p);
  const ValueModel m{p, roots, constants(p, roots), s};
  const VerificationReport rep = verify_hypotheses(m);
  const AngleReport lower = angle_report(m, Threshold::lower);
  const AngleReport upper = angle_report(m, Threshold::upper);
  const bool angles_ok = lower.agreement_residual <= 1e-10 && upper.agreement_residual <= 1e-10 &&
                         lower.moment_check_holds && upper.moment_check_holds;
  const bool passed = rep.passed && angles_ok;
  ordered_json doc{{"params", params_json(p)},
                   {"solution", solution_json(s)},
                   {"verification", verification_json(rep)},
                   {"angles", ordered_json::array({angle_json(lower), angle_json(upper)})},
                   {"passed", passed}};
  const int rc = emit(doc, format, output);
  if (rc != 0) return rc;
  return passed ? 0 : 2;
}

int cmd_angle(const ParamFlags& flags, const std::string& format, const std::string& output) {
  const ModelParams p = validate(flags.alpha1, flags.lambda1, flags.alpha2, flags.lambda2, flags.r);
  const ValueModel m = build_value_model(p);
  const AngleReport lower = angle_report(m, Threshold::lower);
  const AngleReport upper = angle_report(m, Threshold::upper);
  const bool passed = lower.agreement_residual <= 1e-10 && upper.agreement_residual <= 1e-10 &&
                      lower.moment_check_holds && upper.moment_check_holds;
  ordered_json doc{{"params", params_json(p)},
                   {"solution", solution_json(m.solution)},
                   {"angles", ordered_json::array({angle_json(lower), angle_json(upper)})},
                   {"passed", passed}};
  const int rc = emit(doc, format, output);
  if (rc != 0) return rc;
  return passed ? 0 : 2;
}

int cmd_simulate(const ParamFlags& flags, long long n, std::uint64_t seed,
                 std::vector<double> starts, double perturb, int threads,
                 const std::string& format, const std::string& output) {
  const ModelParams p = validate(flags.alpha1, flags.lambda1, flags.alpha2, flags.lambda2, flags.r);
  if (n < 1) {
    std::cerr << "error: --n must be at least 1\n";
    return 1;
  }
  const RootPair roots = solve_roots(p);
  const Solution s = solve(p);
  const ValueModel m{p, roots, constants(p, roots), s};
  const double lower = -s.x1 - perturb;
  const double upper = s.x2 + perturb;
  if (!(lower < upper)) {
    std::cerr << "error: --perturb collapses the stopping interval\n";
    return 1;
  }
  if (starts.empty())
    starts = perturb == 0.0
                 ? std::vector<double>{-s.x1, -s.x1 / 2.0, 0.0, s.x2 / 2.0, s.x2}
                 : std::vector<double>{0.0};
  ordered_json estimates = ordered_json::array();
  bool passed = true;
  for (double start : starts) {
    const SimEstimate est = estimate_value_with_thresholds(p, lower, upper, start, n, seed, threads);
    const double ref = value_at(m, start);
    // Starts on or beyond a threshold stop every path immediately, so both
    // sides of the gate are exact and the comparison holds with zero slack.
    const bool value_ok = perturb == 0.0
                              ? std::fabs(est.mean - ref) <= 4.0 * est.standard_error
                              : est.mean <= ref + 3.0 * est.standard_error;
    const bool truncation_ok =
        static_cast<double>(est.truncated_count) <= 1e-6 * static_cast<double>(est.n);
    const bool ok = value_ok && truncation_ok;
    passed = passed && ok;
    estimates.push_back(ordered_json{{"start", start},
                                     {"mean", est.mean},
                                     {"standard_error", est.standard_error},
                                     {"n", est.n},
                                     {"truncated_count", est.truncated_count},
                                     {"reference_value", ref},
                                     {"pass", ok}});
  }
  ordered_json doc{{"params", params_json(p)},
                   {"solution", solution_json(s)},
                   {"rule", ordered_json{{"lower", lower}, {"upper", upper}, {"perturb", perturb}}},
                   {"n", n},
                   {"seed", seed},
                   {"gate", perturb == 0.0 ? "two_sided_four_stderr" : "upper_three_stderr"},
                   {"estimates", estimates},
                   {"passed", passed}};
  const int rc = emit(doc, format, output);
  if (rc != 0) return rc;
  return passed ? 0 : 2;
}

int cmd_curve(const ParamFlags& flags, double grid_min, double grid_max, int grid_points,
              const std::string& output) {
  const ModelParams p = validate(flags.alpha1, flags.lambda1, flags.alpha2, flags.lambda2, flags.r);
  if (grid_points < 1) {
    std::cerr << "error: --grid-points must be at least 1\n";
    return 1;
  }
  if (!(grid_min <= grid_max)) {
    std::cerr << "error: --grid-min must not exceed --grid-max\n";
    return 1;
  }
  const ValueModel m = build_value_model(p);
  std::ostringstream text;
  text << "x,V,g\n";
  for (int i = 0; i < grid_points; ++i) {
    const double x = grid_points == 1
                         ? grid_min
                         : grid_min + (grid_max - grid_min) * i / double(grid_points - 1);
    text << fmt(x) << "," << fmt(value_at(m, x)) << "," << fmt(std::fabs(x)) << "\n";
  }
  if (output.empty()) {
    std::cout << text.str();
    return 0;
  }
  std::ofstream f(output);
  if (!f) {
    std::cerr << "error: cannot write to " << output << "\n";
    return 1;
  }
  f << text.str();
  return f.good() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-sided optimal stopping of a compound Poisson process with "
               "two-sided exponential jumps, payoff |x|"};
  app.require_subcommand(1);

  std::string format = "table";
  std::string output;
  std::string config_path;
  auto add_io_flags = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"table", "json"}));
    cmd->add_option("--output", output, "write output to this path instead of stdout");
    cmd->add_option("--config", config_path, "flat flag=value configuration file");
  };

  ParamFlags pf_solve, pf_verify, pf_angle, pf_simulate, pf_curve;

  auto* solve_cmd = app.add_subcommand("solve", "compute roots, constants, thresholds, coefficients");
  add_param_flags(solve_cmd, pf_solve);
  add_io_flags(solve_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "check the optimality hypotheses and angle identities");
  add_param_flags(verify_cmd, pf_verify);
  std::string solution_path;
  double corrupt_x2 = 0.0;
  verify_cmd->add_option("--solution", solution_path, "re-ingest a solve --format json document");
  verify_cmd->add_option("--corrupt-x2", corrupt_x2, "")->group("");
  add_io_flags(verify_cmd);

  auto* angle_cmd = app.add_subcommand("angle", "smooth-pasting angles at both thresholds");
  add_param_flags(angle_cmd, pf_angle);
  add_io_flags(angle_cmd);

  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo cross-check of the value function");
  add_param_flags(simulate_cmd, pf_simulate);
  long long n = 1000000;
  std::uint64_t seed = 42;
  std::vector<double> starts;
  double perturb = 0.0;
  int threads = 0;
  simulate_cmd->add_option("--n", n, "number of simulated paths");
  simulate_cmd->add_option("--seed", seed, "master seed; per-path streams derive from it");
  simulate_cmd->add_option("--starts", starts, "comma-separated start positions")->delimiter(',');
  simulate_cmd->add_option("--perturb", perturb, "widen (+) or narrow (-) both thresholds");
  simulate_cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
  add_io_flags(simulate_cmd);

  auto* curve_cmd = app.add_subcommand("curve", "export x,V,g rows for plotting");
  add_param_flags(curve_cmd, pf_curve);
  double grid_min = -3.0, grid_max = 3.0;
  int grid_points = 601;
  curve_cmd->add_option("--grid-min", grid_min, "left end of the grid");
  curve_cmd->add_option("--grid-max", grid_max, "right end of the grid");
  curve_cmd->add_option("--grid-points", grid_points, "number of grid points");
  add_io_flags(curve_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  CLI::App* active = app.get_subcommands().front();
  if (!config_path.empty()) {
    try {
      const int rc = apply_config(active, config_path);
      if (rc != 0) return rc;
    } catch (const CLI::ParseError& e) {
      std::cerr << "error: bad config value: " << e.what() << "\n";
      return 1;
    }
  }
  if (active != verify_cmd && !missing_params(active).empty()) {
    std::cerr << "error: missing model parameter(s): " << missing_params(active)
              << " (pass as flags or in --config)\n";
    return 1;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(pf_solve, format, output);
    if (verify_cmd->parsed()) {
      const bool have_params = missing_params(verify_cmd).empty();
      return cmd_verify(pf_verify, have_params, solution_path, corrupt_x2, format, output);
    }
    if (angle_cmd->parsed()) return cmd_angle(pf_angle, format, output);
    if (simulate_cmd->parsed())
      return cmd_simulate(pf_simulate, n, seed, starts, perturb, threads, format, output);
    if (curve_cmd->parsed()) return cmd_curve(pf_curve, grid_min, grid_max, grid_points, output);
  } catch (const NonPositiveParameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NonFinite& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const OutOfDomain& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const OutOfSupport& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
