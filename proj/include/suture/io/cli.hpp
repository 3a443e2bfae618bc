#pragma once

// Command-line front end: plan, eval, trajectory.
//
// Exit codes: 0 success, 1 infeasible, 2 invalid input.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "suture/io/config.hpp"
#include "suture/io/report.hpp"
#include "suture/io/svg.hpp"
#include "suture/optimizer.hpp"
#include "suture/trajectory.hpp"

namespace suture::io {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInfeasible = 1;
inline constexpr int kExitInvalid = 2;

namespace detail {

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << content;
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

inline std::optional<Plan> run_optimizer(const RunConfig& cfg, unsigned threads) {
  return optimize(cfg.tissue, cfg.desired, cfg.weights, cfg.space, cfg.policy, cfg.normalization,
                  OptimizeOptions{threads});
}

}  // namespace detail

/// Runs optimize + catalog match, writes the JSON report and optionally the
/// SVG rendering. Returns the process exit code.
inline int run_plan(const RunConfig& cfg, const std::string& report_path, const std::string& svg_path,
                    unsigned threads, std::ostream& out) {
  const auto plan = detail::run_optimizer(cfg, threads);
  if (!plan) {
    detail::write_file(report_path, infeasible_report(cfg).dump(2) + "\n");
    out << "no feasible candidate\n";
    return kExitInfeasible;
  }
  detail::write_file(report_path, plan_report(cfg, *plan).dump(2) + "\n");
  if (!svg_path.empty()) detail::write_file(svg_path, render_svg(build_wound_frame(cfg.tissue), *plan));
  out << "plan: s0=" << format_fixed(plan->needle.s0, 3) << " l0=" << format_fixed(plan->needle.l0, 3)
      << " dc=" << format_fixed(plan->needle.dc, 3) << " an=" << to_string(plan->needle.an)
      << " cost=" << format_fixed(plan->cost.normalized_cost, 6) << "\n";
  return kExitOk;
}

inline int export_trajectory(const RunConfig& cfg, const Plan& plan, std::size_t n, const std::string& path) {
  const auto waypoints = fcm_trajectory(plan, build_wound_frame(cfg.tissue), cfg.policy, n);
  detail::write_file(path, trajectory_csv(waypoints));
  return kExitOk;
}

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Constant-curvature suture path planner"};
  app.require_subcommand(1);

  std::string config_path, out_path, svg_path, normalization, an_text;
  unsigned threads = 0;
  double s0 = 0.0, l0 = 0.0, dc = 0.0;
  long n_waypoints = 0;

  auto* plan_cmd = app.add_subcommand("plan", "Select needle and path, write a JSON report");
  plan_cmd->add_option("--config", config_path, "Run configuration (JSON)")->required();
  plan_cmd->add_option("--out", out_path, "Report file")->required();
  plan_cmd->add_option("--svg", svg_path, "Optional SVG rendering");
  plan_cmd->add_option("--normalization", normalization, "minmax | fixed")
      ->check(CLI::IsMember({"minmax", "fixed"}));
  plan_cmd->add_option("--threads", threads, "Evaluation threads (0 = all cores)");

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate one needle configuration");
  eval_cmd->add_option("--config", config_path, "Run configuration (JSON)")->required();
  eval_cmd->add_option("--s0", s0, "Needle center x [mm]")->required();
  eval_cmd->add_option("--l0", l0, "Needle center y [mm]")->required();
  eval_cmd->add_option("--dc", dc, "Needle diameter [mm]")->required();
  eval_cmd->add_option("--an", an_text, "Needle shape (1/4, 3/8, 1/2, 5/8 or decimal)")->required();

  auto* traj_cmd = app.add_subcommand("trajectory", "Plan, then export the fixed-center waypoints as CSV");
  traj_cmd->add_option("--config", config_path, "Run configuration (JSON)")->required();
  traj_cmd->add_option("--n", n_waypoints, "Number of waypoints (>= 2)")->required();
  traj_cmd->add_option("--out", out_path, "CSV file")->required();
  traj_cmd->add_option("--normalization", normalization, "minmax | fixed")
      ->check(CLI::IsMember({"minmax", "fixed"}));
  traj_cmd->add_option("--threads", threads, "Evaluation threads (0 = all cores)");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    RunConfig cfg = load_config(config_path);
    if (!normalization.empty()) cfg.normalization = parse_normalization(normalization);

    if (*plan_cmd) return run_plan(cfg, out_path, svg_path, threads, out);

    if (*eval_cmd) {
      NeedleShape shape;
      try {
        shape = parse_shape(an_text);
      } catch (const GeometryError&) {
        shape = shape_from_fraction(std::stod(an_text));
      }
      const NeedleVariables needle{s0, l0, dc, shape};
      needle.validate();
      const Evaluation ev = evaluate_candidate(needle, build_wound_frame(cfg.tissue), cfg.policy);
      out << evaluation_report(needle, ev).dump(2) << "\n";
      return ev.report.overall ? kExitOk : kExitInfeasible;
    }

    if (*traj_cmd) {
      if (n_waypoints < 2) throw ConfigError("--n must be >= 2");
      const auto plan = detail::run_optimizer(cfg, threads);
      if (!plan) {
        err << "no feasible candidate\n";
        return kExitInfeasible;
      }
      return export_trajectory(cfg, *plan, static_cast<std::size_t>(n_waypoints), out_path);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const GeometryError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    err << "error: invalid number: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace suture::io
