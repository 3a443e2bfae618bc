// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include "support/oracles.hpp"
#include "suture/io/cli.hpp"
#include "suture/suture.hpp"

#ifndef SUTURE_SOURCE_DIR
#error "SUTURE_SOURCE_DIR must be defined"
#endif

namespace fs = std::filesystem;
using namespace suture;
using nlohmann::json;

namespace {

fs::path data(const std::string& name) { return fs::path(SUTURE_SOURCE_DIR) / "data" / name; }

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("failed: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int decimals = 6) { return io::format_fixed(v, decimals); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_comparison(Outcome& out, const io::RunConfig& cfg, const Plan& plan) {
  std::ostringstream s;
  s << "      parameter  unit  desired   actual    abs_err   ref_desired  ref_sim";
  out.note(s.str());
  const json rows = io::comparison_table(cfg, plan.parameters);
  for (const auto& row : rows) {
    char line[160];
    const bool has_ref = row.contains("reference");
    std::snprintf(line, sizeof line, "      %-9s  %-4s  %8.4f  %8.4f  %8.4f  %11s  %7s",
                  row["parameter"].get<std::string>().c_str(), row["unit"].get<std::string>().c_str(),
                  row["desired"].get<double>(), row["actual"].get<double>(), row["abs_error"].get<double>(),
                  has_ref ? fmt(row["reference"]["desired"].get<double>(), 2).c_str() : "-",
                  has_ref ? fmt(row["reference"]["simulation"].get<double>(), 2).c_str() : "-");
    out.note(line);
  }
}

// --- 1 ---------------------------------------------------------------------

Outcome flat_zero_cost() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const io::RunConfig cfg = io::load_config(data("scenario_flat.json"));
  const auto plan = optimize(cfg.tissue, cfg.desired, cfg.weights, cfg.space, cfg.policy, cfg.normalization);
  const double elapsed = seconds_since(t0);
  out.require(plan.has_value(), "a feasible plan exists");
  if (!plan) return out;
  out.require(plan->needle.s0 == 0.0 && plan->needle.l0 == 0.0 && plan->needle.dc == 16.0,
              "winner is s0=0, l0=0, dc=16");
  for (std::size_t i = 0; i < kParameterCount; ++i)
    out.require(plan->cost.deltas[i] <= 1e-9, std::string("delta ") + std::string(kParameterNames[i]) + " = 0");
  out.require(plan->cost.raw_cost <= 1e-9 && plan->cost.normalized_cost <= 1e-9, "cost = 0");
  out.require(elapsed < 1.0, "runtime < 1 s");
  out.note("winner s0=" + fmt(plan->needle.s0, 3) + " l0=" + fmt(plan->needle.l0, 3) + " dc=" +
           fmt(plan->needle.dc, 3) + " an=" + to_string(plan->needle.an) + ", raw cost " +
           fmt(plan->cost.raw_cost, 12) + ", " + fmt(elapsed, 3) + " s");
  return out;
}

// --- 2 ---------------------------------------------------------------------

void check_symmetric_plan(Outcome& out, const io::RunConfig& cfg, const std::string& label) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto plan = optimize(cfg.tissue, cfg.desired, cfg.weights, cfg.space, cfg.policy, cfg.normalization,
                             OptimizeOptions{0});
  const double elapsed = seconds_since(t0);
  out.require(plan.has_value(), label + ": a feasible plan exists");
  if (!plan) return;
  const auto& p = plan->parameters;
  out.require(p.s_n == 0.0, label + ": s_n = 0");
  out.require(std::abs(p.beta_in - p.beta_out) < 1e-9, label + ": |beta_in - beta_out| < 1e-9");
  out.require(std::abs(p.e_in - p.e_out) < 1e-9, label + ": |e_in - e_out| < 1e-9");
  out.require(elapsed < 30.0, label + ": runtime < 30 s");
  std::string match = "none";
  if (cfg.catalog) {
    try {
      const auto m = match_catalog(*plan, *cfg.catalog);
      match = m.entry.name + " (residual " + fmt(m.residual, 3) + " mm)";
    } catch (const std::exception&) {
    }
  }
  out.note(label + ": s0=" + fmt(plan->needle.s0, 3) + " l0=" + fmt(plan->needle.l0, 3) + " dc=" +
           fmt(plan->needle.dc, 3) + " an=" + to_string(plan->needle.an) + ", catalog " + match + ", " +
           std::to_string(enumerate_candidates(cfg.space).size()) + " candidates in " + fmt(elapsed, 2) + " s");
  print_comparison(out, cfg, *plan);
}

Outcome reference_symmetry() {
  Outcome out;
  io::RunConfig cfg = io::load_config(data("scenario_reference.json"));
  out.require(cfg.space.s0.min == -cfg.space.s0.max && cfg.space.s0.step <= 0.25, "s0 grid symmetric at 0.25 mm");
  check_symmetric_plan(out, cfg, "full catalog");

  NeedleCatalog ctx;
  for (const auto& e : cfg.catalog->entries)
    if (e.shape == NeedleShape::Half && e.dc == 30.55) ctx.entries.push_back(e);
  out.require(ctx.entries.size() == 1, "catalog holds the 1/2, 30.55 mm needle");
  cfg.catalog = ctx;
  cfg.space.dc_values = ctx.diameters();
  cfg.space.shapes = {NeedleShape::Half};
  check_symmetric_plan(out, cfg, "30.55 mm only");
  return out;
}

// --- 3 ---------------------------------------------------------------------

Outcome reference_cost_arithmetic() {
  Outcome out;
  const io::ReferenceTable table = io::load_reference_table(data("reference_table.json"));
  ParameterArray desired{}, simulated{};
  for (std::size_t i = 0; i < kParameterCount; ++i) {
    const io::ReferenceRow* row = table.find(kParameterNames[i]);
    out.require(row != nullptr, "reference row " + std::string(kParameterNames[i]));
    if (!row) return out;
    desired[i] = row->desired;
    simulated[i] = row->simulation;
  }
  const CostBreakdown c =
      raw_cost(SutureParameters::from_array(simulated), SutureParameters::from_array(desired), Weights{});
  const ParameterArray expected{0.34, 4.56, 1.16, 0.0, 0.34, 4.56};
  for (std::size_t i = 0; i < kParameterCount; ++i)
    out.require(std::abs(c.deltas[i] - expected[i]) <= 1e-12, "delta " + std::string(kParameterNames[i]));
  out.require(std::abs(c.raw_cost - 10.96) <= 1e-12, "J = 10.96");
  out.note("J = " + fmt(c.raw_cost, 15));
  return out;
}

// --- 4 ---------------------------------------------------------------------

Outcome oracle_equivalence() {
  Outcome out;
  std::mt19937_64 rng(2024);
  int spaces = 0, feasible = 0, mismatches = 0;
  std::size_t largest = 0;
  for (int trial = 0; trial < 24; ++trial) {
    const oracle::RandomProblem p = oracle::random_problem(rng, 9, 9, 3, 3);
    largest = std::max(largest, enumerate_candidates(p.space).size());
    const DesiredParameters d(p.tissue);
    for (auto mode : {Normalization::MinMax, Normalization::Fixed}) {
      const auto got = optimize(p.tissue, d, p.weights, p.space, GraspPolicy{}, mode, OptimizeOptions{0});
      const auto want = oracle::exhaustive_search(p.tissue, d, p.weights, p.space, GraspPolicy{}, mode);
      ++spaces;
      if (got.has_value() != want.has_value() || (got && !(*got == *want))) ++mismatches;
      if (got) ++feasible;
    }
  }
  out.require(largest <= 10000, "spaces hold at most 1e4 candidates");
  out.require(feasible >= 20, "at least 20 spaces with a feasible plan");
  out.require(mismatches == 0, "optimize matches exhaustive search");
  out.note(std::to_string(spaces) + " searches (" + std::to_string(feasible) + " feasible), " +
           std::to_string(mismatches) + " mismatches");

  std::mt19937_64 rng2(77);
  int checked = 0;
  double worst_len = 0.0, worst_ang = 0.0;
  while (checked < 1000) {
    const TissueGeometry t = oracle::random_tissue(rng2);
    const NeedleVariables n = oracle::random_needle(rng2, t);
    const WoundFrame f = build_wound_frame(t);
    if (!check_feasibility(n, f, GraspPolicy{}).overall) continue;
    const auto a = compute_suture_parameters(n, f);
    const auto s = oracle::sampled_parameters(t, n);
    if (!a || !s) {
      out.require(false, "parameters defined on a feasible candidate");
      break;
    }
    worst_len = std::max({worst_len, std::abs(a->e_in - s->params.e_in), std::abs(a->e_out - s->params.e_out),
                          std::abs(a->d_h - s->params.d_h), std::abs(a->s_n - s->params.s_n)});
    worst_ang = std::max({worst_ang, std::abs(a->beta_in - s->params.beta_in),
                          std::abs(a->beta_out - s->params.beta_out)});
    ++checked;
  }
  out.require(worst_len <= 1e-4, "lengths within 1e-4 mm of sampling");
  out.require(worst_ang <= 1e-6, "angles within 1e-6 rad of sampling");
  out.note(std::to_string(checked) + " feasible candidates, worst length error " + fmt(worst_len, 12) +
           " mm, worst angle error " + fmt(worst_ang, 12) + " rad");
  return out;
}

// --- 5 ---------------------------------------------------------------------

Outcome property_suite() {
  Outcome out;
  std::mt19937_64 rng(5150);

  int reflection_bad = 0, shape_bad = 0, reflected = 0;
  while (reflected < 500) {
    const TissueGeometry t = oracle::random_tissue(rng);
    NeedleVariables n = oracle::random_needle(rng, t);
    const WoundFrame f = build_wound_frame(t);
    const auto p = compute_suture_parameters(n, f);
    if (!p) continue;
    NeedleVariables m = n;
    m.s0 = -n.s0;
    const auto q = compute_suture_parameters(m, f);
    if (!q || std::abs(p->beta_in - q->beta_out) > 1e-12 || std::abs(p->beta_out - q->beta_in) > 1e-12 ||
        std::abs(p->e_in - q->e_out) > 1e-12 || std::abs(p->e_out - q->e_in) > 1e-12 ||
        std::abs(p->d_h - q->d_h) > 1e-12 || p->s_n != q->s_n)
      ++reflection_bad;
    for (NeedleShape s : kAllShapes) {
      n.an = s;
      const auto r = compute_suture_parameters(n, f);
      if (!r || !(*r == *p)) ++shape_bad;
    }
    ++reflected;
  }
  out.require(reflection_bad == 0, "reflection equivariance of metrics");
  out.require(shape_bad == 0, "parameters independent of shape");

  int scaling_bad = 0, range_bad = 0, refine_bad = 0, problems = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const oracle::RandomProblem p = oracle::random_problem(rng, 7, 9, 2, 3);
    const DesiredParameters d(p.tissue);
    const auto base = optimize(p.tissue, d, p.weights, p.space, GraspPolicy{}, Normalization::MinMax);
    for (double k : {0.25, 7.0}) {
      Weights scaled = p.weights;
      for (double& l : scaled.lambda) l *= k;
      const auto s = optimize(p.tissue, d, scaled, p.space, GraspPolicy{}, Normalization::MinMax);
      if (base.has_value() != s.has_value() || (base && base->candidate_index != s->candidate_index)) ++scaling_bad;
    }

    std::vector<ParameterArray> deltas;
    const WoundFrame f = build_wound_frame(p.tissue);
    for (const auto& n : enumerate_candidates(p.space)) {
      const Evaluation ev = evaluate_candidate(n, f, GraspPolicy{});
      if (ev.report.overall) deltas.push_back(raw_cost(*ev.parameters, d, p.weights).deltas);
    }
    for (auto mode : {Normalization::MinMax, Normalization::Fixed})
      for (const auto& row : normalize_deltas(deltas, mode, p.tissue.bite_distance))
        for (double v : row)
          if (!(v >= 0.0 && v <= 1.0)) ++range_bad;

    SearchSpace fine = p.space;
    fine.s0.step /= 2;
    fine.l0.step /= 4;
    const auto coarse_plan = optimize(p.tissue, d, p.weights, p.space, GraspPolicy{}, Normalization::Fixed);
    const auto fine_plan = optimize(p.tissue, d, p.weights, fine, GraspPolicy{}, Normalization::Fixed);
    if (coarse_plan && (!fine_plan || fine_plan->cost.normalized_cost > coarse_plan->cost.normalized_cost))
      ++refine_bad;
    if (coarse_plan) ++problems;
  }
  out.require(scaling_bad == 0, "weight scaling keeps the argmin");
  out.require(range_bad == 0, "normalized deltas within [0, 1]");
  out.require(refine_bad == 0, "grid refinement never increases fixed-mode cost");
  out.require(problems > 0, "refinement exercised on a feasible problem");

  const io::RunConfig cfg = io::load_config(data("scenario_reference.json"));
  const auto plan = optimize(cfg.tissue, cfg.desired, cfg.weights, cfg.space, cfg.policy, cfg.normalization,
                             OptimizeOptions{0});
  out.require(plan.has_value(), "reference plan exists for trajectory checks");
  if (plan) {
    const WoundFrame f = build_wound_frame(cfg.tissue);
    const auto w = fcm_trajectory(*plan, f, cfg.policy, 200);
    const Circle c = plan->needle.circle();
    double worst = 0.0;
    for (const auto& wp : w) worst = std::max(worst, std::abs(distance(wp.tip_position, c.center) - c.radius));
    out.require(worst <= 1e-9, "trajectory tips on the circle within 1e-9 mm");
    const double total = plan->feasibility.embedded_arc_angle + plan->feasibility.margin_each_end;
    out.require(std::abs(w.back().rotation_angle - total) <= 1e-12, "total rotation = embedded arc + margin");
    out.note("worst on-circle deviation " + fmt(worst, 12) + " mm, total rotation " + fmt(total, 9) + " rad");
  }
  out.note(std::to_string(reflected) + " reflected candidates, 12 random search spaces");
  return out;
}

// --- 6 ---------------------------------------------------------------------

Outcome determinism() {
  Outcome out;
  const fs::path dir = fs::temp_directory_path() / ("suture_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::ostringstream sink;
  const std::string cfg = data("scenario_reference.json").string();
  // 0 selects every hardware thread; 8 forces real concurrency on small machines.
  const std::vector<std::string> thread_counts{"1", "0", "8"};
  std::vector<std::string> reports, svgs;
  for (std::size_t k = 0; k < thread_counts.size(); ++k) {
    const fs::path r = dir / ("r" + std::to_string(k) + ".json");
    const fs::path s = dir / ("p" + std::to_string(k) + ".svg");
    const int code = io::run_cli(
        {"plan", "--config", cfg, "--out", r.string(), "--svg", s.string(), "--threads", thread_counts[k]}, sink,
        sink);
    out.require(code == io::kExitOk, "run with --threads " + thread_counts[k] + " succeeds");
    reports.push_back(slurp(r));
    svgs.push_back(slurp(s));
  }
  for (std::size_t k = 1; k < thread_counts.size(); ++k) {
    out.require(!reports[0].empty() && reports[k] == reports[0], "report identical for --threads " + thread_counts[k]);
    out.require(!svgs[0].empty() && svgs[k] == svgs[0], "SVG identical for --threads " + thread_counts[k]);
  }
  out.note("--threads 1 / 0 (" + std::to_string(std::max(1u, std::thread::hardware_concurrency())) +
           " hardware) / 8: report " + std::to_string(reports[0].size()) + " bytes, svg " +
           std::to_string(svgs[0].size()) + " bytes");
  fs::remove_all(dir);
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 zero-cost optimum on flat tissue", flat_zero_cost},
      {"2 symmetric plan on the reference scenario", reference_symmetry},
      {"3 cost arithmetic on reference values", reference_cost_arithmetic},
      {"4 oracle equivalence", oracle_equivalence},
      {"5 property suite", property_suite},
      {"6 determinism across thread counts", determinism},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << name << "\n";
    for (const auto& n : o.notes) std::cout << "      " << n << "\n";
    std::cout.flush();
    if (!o.pass) ++failures;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
