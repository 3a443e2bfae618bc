#pragma once

// Plan reports (JSON) and trajectory tables (CSV).

#include <charconv>
#include <optional>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "suture/io/config.hpp"
#include "suture/optimizer.hpp"
#include "suture/trajectory.hpp"

namespace suture::io {

/// Locale-independent fixed-point formatting; never prints "-0.000".
inline std::string format_fixed(double v, int decimals) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  if (res.ec != std::errc{}) return "nan";
  std::string s(buf, res.ptr);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

inline json needle_to_json(const NeedleVariables& n) {
  return {{"s0", n.s0}, {"l0", n.l0}, {"dc", n.dc}, {"an", to_string(n.an)}};
}

inline json parameters_to_json(const SutureParameters& p) {
  json j = json::object();
  const ParameterArray v = p.to_array();
  for (std::size_t i = 0; i < kParameterCount; ++i) j[std::string(kParameterNames[i])] = v[i];
  return j;
}

inline json array_to_json(const ParameterArray& v) {
  json j = json::object();
  for (std::size_t i = 0; i < kParameterCount; ++i) j[std::string(kParameterNames[i])] = v[i];
  return j;
}

inline json feasibility_to_json(const FeasibilityReport& r) {
  return {{"bilateral_crossing", r.bilateral_crossing},
          {"single_pierce_per_side", r.single_pierce_per_side},
          {"submerged", r.submerged},
          {"grasp_margin_ok", r.grasp_margin_ok},
          {"depth_positive", r.depth_positive},
          {"overall", r.overall},
          {"embedded_arc_angle", r.embedded_arc_angle},
          {"margin_each_end", r.margin_each_end}};
}

inline json cost_to_json(const CostBreakdown& c) {
  return {{"deltas", array_to_json(c.deltas)},
          {"normalized_deltas", array_to_json(c.normalized_deltas)},
          {"raw_cost", c.raw_cost},
          {"normalized_cost", c.normalized_cost}};
}

/// Desired vs achieved values, one row per parameter in canonical order,
/// alongside the reference table when one is configured.
inline json comparison_table(const RunConfig& cfg, const SutureParameters& actual) {
  json rows = json::array();
  const ParameterArray desired = cfg.desired.to_array();
  const ParameterArray got = actual.to_array();
  for (std::size_t i = 0; i < kParameterCount; ++i) {
    json row = {{"parameter", std::string(kParameterNames[i])},
                {"unit", kIsAngle[i] ? "rad" : "mm"},
                {"desired", desired[i]},
                {"actual", got[i]},
                {"abs_error", std::abs(got[i] - desired[i])}};
    if (cfg.reference) {
      if (const ReferenceRow* ref = cfg.reference->find(kParameterNames[i])) {
        row["reference"] = {{"desired", ref->desired},
                            {"simulation", ref->simulation},
                            {"experiment_mean", ref->experiment_mean},
                            {"experiment_sd", ref->experiment_sd}};
      }
    }
    rows.push_back(row);
  }
  return rows;
}

inline json plan_report(const RunConfig& cfg, const Plan& plan) {
  json j;
  j["status"] = "ok";
  j["inputs"] = config_to_json(cfg);
  j["needle"] = needle_to_json(plan.needle);
  j["candidate_index"] = plan.candidate_index;
  j["parameters"] = parameters_to_json(plan.parameters);
  j["cost"] = cost_to_json(plan.cost);
  j["feasibility"] = feasibility_to_json(plan.feasibility);
  if (cfg.catalog) {
    try {
      const CatalogMatch m = match_catalog(plan, *cfg.catalog);
      j["catalog_match"] = {{"name", m.entry.name},
                            {"shape", to_string(m.entry.shape)},
                            {"diameter_mm", m.entry.dc},
                            {"residual_mm", m.residual}};
    } catch (const GeometryError& e) {
      j["catalog_match"] = {{"name", nullptr}, {"reason", e.what()}};
    }
  } else {
    j["catalog_match"] = nullptr;
  }
  j["comparison"] = comparison_table(cfg, plan.parameters);
  if (cfg.reference && !cfg.reference->description.empty()) j["reference_description"] = cfg.reference->description;
  return j;
}

inline json infeasible_report(const RunConfig& cfg) {
  return {{"status", "infeasible"}, {"message", "no feasible candidate"}, {"inputs", config_to_json(cfg)}};
}

inline json evaluation_report(const NeedleVariables& needle, const Evaluation& ev) {
  json j;
  j["needle"] = needle_to_json(needle);
  j["parameters"] = ev.parameters ? parameters_to_json(*ev.parameters) : json(nullptr);
  j["feasibility"] = feasibility_to_json(ev.report);
  return j;
}

inline std::string trajectory_csv(const std::vector<Waypoint>& waypoints) {
  std::string out = "index,x_mm,y_mm,heading_rad,rotation_rad,phase\n";
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    const Waypoint& w = waypoints[i];
    out += std::to_string(i);
    out += ',' + format_fixed(w.tip_position.x, 9);
    out += ',' + format_fixed(w.tip_position.y, 9);
    out += ',' + format_fixed(w.tip_heading, 9);
    out += ',' + format_fixed(w.rotation_angle, 9);
    out += ',' + to_string(w.phase);
    out += '\n';
  }
  return out;
}

}  // namespace suture::io
