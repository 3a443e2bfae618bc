#pragma once

// JSON run configuration, needle catalog and reference-table files.

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "suture/feasibility.hpp"
#include "suture/geometry.hpp"
#include "suture/metrics.hpp"
#include "suture/optimizer.hpp"

namespace suture::io {

using nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One row of a reference comparison table (externally supplied values).
struct ReferenceRow {
  std::string parameter;
  std::string unit;
  double desired = 0.0;
  double simulation = 0.0;
  double experiment_mean = 0.0;
  double experiment_sd = 0.0;
};

struct ReferenceTable {
  int version = 1;
  std::string description;
  std::vector<ReferenceRow> rows;

  const ReferenceRow* find(std::string_view parameter) const {
    for (const auto& r : rows)
      if (r.parameter == parameter) return &r;
    return nullptr;
  }
};

struct OutputPaths {
  std::optional<std::string> report;
  std::optional<std::string> svg;
  std::optional<std::string> trajectory;
  std::size_t trajectory_points = 50;
};

struct RunConfig {
  TissueGeometry tissue;
  DesiredParameters desired;
  Weights weights;
  SearchSpace space;
  std::optional<std::vector<double>> dc_explicit;  // as written in search.dc
  std::optional<Range> dc_range;
  std::optional<NeedleCatalog> catalog;
  std::optional<std::string> catalog_path;
  GraspPolicy policy;
  Normalization normalization = Normalization::MinMax;
  std::optional<ReferenceTable> reference;
  std::optional<std::string> reference_path;
  OutputPaths output;
  std::filesystem::path base_dir;
};

namespace detail {

inline std::string line_context(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline json parse_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": parse error at " + line_context(text, e.byte == 0 ? 0 : e.byte - 1) + ": " +
                      e.what());
  }
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), path.string());
}

inline void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
}

inline void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where + ": unknown field '" + key + "'");
  }
}

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + " must be a number");
  return j.get<double>();
}

inline std::string string_field(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where + " must be a string");
  return j.get<std::string>();
}

inline Range parse_range(const json& j, const std::string& where) {
  require_object(j, where);
  reject_unknown(j, where, {"min", "max", "step"});
  for (const char* k : {"min", "max", "step"})
    if (!j.contains(k)) throw ConfigError(where + "." + k + " is required");
  Range r{number(j["min"], where + ".min"), number(j["max"], where + ".max"), number(j["step"], where + ".step")};
  try {
    r.validate(where);
  } catch (const GeometryError& e) {
    throw ConfigError(e.what());
  }
  return r;
}

inline NeedleShape parse_shape_json(const json& j, const std::string& where) {
  try {
    if (j.is_string()) return parse_shape(j.get<std::string>());
    if (j.is_number()) return shape_from_fraction(j.get<double>());
  } catch (const GeometryError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + " must be a shape fraction such as \"1/2\"");
}

template <class Fn>
void validated(Fn&& fn) {
  try {
    fn();
  } catch (const GeometryError& e) {
    throw ConfigError(std::string("validation error: ") + e.what());
  }
}

}  // namespace detail

inline NeedleCatalog parse_catalog(const json& j, const std::string& where = "catalog") {
  const json* list = &j;
  if (j.is_object()) {
    detail::reject_unknown(j, where, {"needles"});
    if (!j.contains("needles")) throw ConfigError(where + ".needles is required");
    list = &j["needles"];
  }
  if (!list->is_array()) throw ConfigError(where + " must be a list of needles");
  NeedleCatalog cat;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const json& e = (*list)[i];
    const std::string at = where + "[" + std::to_string(i) + "]";
    detail::require_object(e, at);
    detail::reject_unknown(e, at, {"name", "shape", "diameter_mm"});
    for (const char* k : {"name", "shape", "diameter_mm"})
      if (!e.contains(k)) throw ConfigError(at + "." + k + " is required");
    cat.entries.push_back({detail::string_field(e["name"], at + ".name"),
                           detail::parse_shape_json(e["shape"], at + ".shape"),
                           detail::number(e["diameter_mm"], at + ".diameter_mm")});
  }
  if (cat.entries.empty()) throw ConfigError(where + " must not be empty");
  detail::validated([&] { cat.validate(); });
  return cat;
}

inline NeedleCatalog load_catalog(const std::filesystem::path& path) {
  return parse_catalog(detail::read_json_file(path), path.string());
}

inline ReferenceTable parse_reference_table(const json& j, const std::string& where = "reference_table") {
  detail::require_object(j, where);
  detail::reject_unknown(j, where, {"version", "description", "rows"});
  ReferenceTable t;
  if (j.contains("version")) t.version = j["version"].get<int>();
  if (j.contains("description")) t.description = detail::string_field(j["description"], where + ".description");
  if (!j.contains("rows") || !j["rows"].is_array()) throw ConfigError(where + ".rows must be a list");
  for (std::size_t i = 0; i < j["rows"].size(); ++i) {
    const json& r = j["rows"][i];
    const std::string at = where + ".rows[" + std::to_string(i) + "]";
    detail::require_object(r, at);
    detail::reject_unknown(r, at, {"parameter", "unit", "desired", "simulation", "experiment_mean", "experiment_sd"});
    ReferenceRow row;
    row.parameter = detail::string_field(r.at("parameter"), at + ".parameter");
    row.unit = detail::string_field(r.at("unit"), at + ".unit");
    row.desired = detail::number(r.at("desired"), at + ".desired");
    row.simulation = detail::number(r.at("simulation"), at + ".simulation");
    row.experiment_mean = detail::number(r.at("experiment_mean"), at + ".experiment_mean");
    row.experiment_sd = detail::number(r.at("experiment_sd"), at + ".experiment_sd");
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline ReferenceTable load_reference_table(const std::filesystem::path& path) {
  return parse_reference_table(detail::read_json_file(path), path.string());
}

/// Builds a validated RunConfig; relative file references resolve against
/// base_dir.
inline RunConfig parse_config(const json& j, const std::filesystem::path& base_dir = {}) {
  using detail::number;
  RunConfig cfg;
  cfg.base_dir = base_dir;
  detail::require_object(j, "config");
  detail::reject_unknown(j, "config", {"tissue", "desired", "weights", "search", "catalog", "grasp",
                                       "normalization", "reference_table", "output"});

  if (!j.contains("tissue")) throw ConfigError("tissue is required");
  const json& t = j["tissue"];
  detail::require_object(t, "tissue");
  detail::reject_unknown(t, "tissue", {"gamma", "wound_width", "bite_distance", "slope_convention"});
  for (const char* k : {"gamma", "wound_width", "bite_distance"})
    if (!t.contains(k)) throw ConfigError(std::string("tissue.") + k + " is required");
  cfg.tissue.gamma = number(t["gamma"], "tissue.gamma");
  cfg.tissue.wound_width = number(t["wound_width"], "tissue.wound_width");
  cfg.tissue.bite_distance = number(t["bite_distance"], "tissue.bite_distance");
  if (t.contains("slope_convention"))
    detail::validated([&] {
      cfg.tissue.slope = parse_slope_convention(detail::string_field(t["slope_convention"], "tissue.slope_convention"));
    });
  detail::validated([&] { build_wound_frame(cfg.tissue); });

  cfg.desired = DesiredParameters(cfg.tissue);
  if (j.contains("desired")) {
    const json& d = j["desired"];
    detail::require_object(d, "desired");
    detail::reject_unknown(d, "desired", {"beta_in", "e_in", "d_h", "s_n", "beta_out", "e_out"});
    ParameterArray v = cfg.desired.to_array();
    for (std::size_t i = 0; i < kParameterCount; ++i) {
      const std::string key(kParameterNames[i]);
      if (d.contains(key)) v[i] = number(d[key], "desired." + key);
    }
    cfg.desired = DesiredParameters(SutureParameters::from_array(v));
    detail::validated([&] { cfg.desired.validate("desired"); });
  }

  if (j.contains("weights")) {
    const json& w = j["weights"];
    if (!w.is_array() || w.size() != kParameterCount)
      throw ConfigError("weights must be a list of 6 numbers (beta_in, e_in, d_h, s_n, beta_out, e_out)");
    for (std::size_t i = 0; i < kParameterCount; ++i)
      cfg.weights.lambda[i] = number(w[i], "weights[" + std::to_string(i) + "]");
    detail::validated([&] { cfg.weights.validate(); });
  }

  if (j.contains("catalog")) {
    const json& c = j["catalog"];
    if (c.is_string()) {
      cfg.catalog_path = c.get<std::string>();
      cfg.catalog = load_catalog(base_dir / *cfg.catalog_path);
    } else {
      cfg.catalog = parse_catalog(c);
    }
  }

  if (j.contains("search")) {
    const json& s = j["search"];
    detail::require_object(s, "search");
    detail::reject_unknown(s, "search", {"s0", "l0", "dc", "shapes"});
    if (s.contains("s0")) cfg.space.s0 = detail::parse_range(s["s0"], "search.s0");
    if (s.contains("l0")) cfg.space.l0 = detail::parse_range(s["l0"], "search.l0");
    if (s.contains("dc")) {
      const json& d = s["dc"];
      if (d.is_array()) {
        std::vector<double> v;
        for (std::size_t i = 0; i < d.size(); ++i) v.push_back(number(d[i], "search.dc[" + std::to_string(i) + "]"));
        cfg.dc_explicit = v;
        cfg.space.dc_values = v;
      } else {
        cfg.dc_range = detail::parse_range(d, "search.dc");
        cfg.space.dc_values = cfg.dc_range->values();
      }
    }
    if (s.contains("shapes")) {
      const json& sh = s["shapes"];
      if (!sh.is_array()) throw ConfigError("search.shapes must be a list");
      cfg.space.shapes.clear();
      for (std::size_t i = 0; i < sh.size(); ++i)
        cfg.space.shapes.push_back(detail::parse_shape_json(sh[i], "search.shapes[" + std::to_string(i) + "]"));
    }
  }
  if (cfg.space.dc_values.empty() && cfg.catalog) cfg.space.dc_values = cfg.catalog->diameters();
  if (cfg.space.dc_values.empty()) throw ConfigError("search.dc is required when no catalog is given");
  detail::validated([&] { cfg.space.validate(); });

  if (j.contains("grasp")) {
    const json& g = j["grasp"];
    detail::require_object(g, "grasp");
    detail::reject_unknown(g, "grasp", {"min_margin"});
    if (g.contains("min_margin")) cfg.policy.min_margin = number(g["min_margin"], "grasp.min_margin");
    detail::validated([&] { cfg.policy.validate(); });
  }

  if (j.contains("normalization"))
    detail::validated(
        [&] { cfg.normalization = parse_normalization(detail::string_field(j["normalization"], "normalization")); });

  if (j.contains("reference_table")) {
    cfg.reference_path = detail::string_field(j["reference_table"], "reference_table");
    cfg.reference = load_reference_table(base_dir / *cfg.reference_path);
  }

  if (j.contains("output")) {
    const json& o = j["output"];
    detail::require_object(o, "output");
    detail::reject_unknown(o, "output", {"report", "svg", "trajectory", "trajectory_points"});
    if (o.contains("report")) cfg.output.report = detail::string_field(o["report"], "output.report");
    if (o.contains("svg")) cfg.output.svg = detail::string_field(o["svg"], "output.svg");
    if (o.contains("trajectory")) cfg.output.trajectory = detail::string_field(o["trajectory"], "output.trajectory");
    if (o.contains("trajectory_points")) {
      if (!o["trajectory_points"].is_number_unsigned() || o["trajectory_points"].get<std::size_t>() < 2)
        throw ConfigError("validation error: output.trajectory_points must be an integer >= 2");
      cfg.output.trajectory_points = o["trajectory_points"].get<std::size_t>();
    }
  }
  return cfg;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  const json j = detail::read_json_file(path);
  return parse_config(j, path.parent_path());
}

/// Parsed configuration as JSON, in the same schema it was read from.
inline json config_to_json(const RunConfig& cfg) {
  json j;
  j["tissue"] = {{"gamma", cfg.tissue.gamma},
                 {"wound_width", cfg.tissue.wound_width},
                 {"bite_distance", cfg.tissue.bite_distance},
                 {"slope_convention", to_string(cfg.tissue.slope)}};
  const ParameterArray d = cfg.desired.to_array();
  json desired = json::object();
  for (std::size_t i = 0; i < kParameterCount; ++i) desired[std::string(kParameterNames[i])] = d[i];
  j["desired"] = desired;
  j["weights"] = cfg.weights.lambda;

  json search;
  search["s0"] = {{"min", cfg.space.s0.min}, {"max", cfg.space.s0.max}, {"step", cfg.space.s0.step}};
  search["l0"] = {{"min", cfg.space.l0.min}, {"max", cfg.space.l0.max}, {"step", cfg.space.l0.step}};
  if (cfg.dc_range)
    search["dc"] = {{"min", cfg.dc_range->min}, {"max", cfg.dc_range->max}, {"step", cfg.dc_range->step}};
  else
    search["dc"] = cfg.space.dc_values;
  json shapes = json::array();
  for (NeedleShape s : cfg.space.shapes) shapes.push_back(to_string(s));
  search["shapes"] = shapes;
  j["search"] = search;

  if (cfg.catalog) {
    json needles = json::array();
    for (const auto& e : cfg.catalog->entries)
      needles.push_back({{"name", e.name}, {"shape", to_string(e.shape)}, {"diameter_mm", e.dc}});
    j["catalog"] = {{"needles", needles}};
  }
  j["grasp"] = {{"min_margin", cfg.policy.min_margin}};
  j["normalization"] = to_string(cfg.normalization);
  return j;
}

}  // namespace suture::io
