#pragma once

// Brute-force selection of needle shape, diameter and center.
//
// Every candidate of the search grid is evaluated; infeasible ones are
// dropped. The absolute parameter errors of the survivors are normalized to
// [0, 1] per component and the weighted sum of those normalized errors is
// minimized. Ties go to the earliest candidate in enumeration order, which
// makes the result independent of how many threads did the evaluation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "suture/feasibility.hpp"
#include "suture/geometry.hpp"
#include "suture/metrics.hpp"

namespace suture {

using ParameterArray = std::array<double, kParameterCount>;

/// Ordered (beta_in, e_in, d_h, s_n, beta_out, e_out).
struct Weights {
  ParameterArray lambda{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};

  void validate() const {
    bool any_positive = false;
    for (double l : lambda) {
      if (!std::isfinite(l) || l < 0.0) throw GeometryError("weights must be finite and >= 0");
      any_positive = any_positive || l > 0.0;
    }
    if (!any_positive) throw GeometryError("weights must contain at least one positive value");
  }

  double sum() const {
    double s = 0.0;
    for (double l : lambda) s += l;
    return s;
  }
};

/// Inclusive arithmetic range min, min + step, ..., <= max.
struct Range {
  double min = 0.0;
  double max = 0.0;
  double step = 1.0;

  void validate(const std::string& name) const {
    if (!std::isfinite(min) || !std::isfinite(max) || !std::isfinite(step))
      throw GeometryError(name + " range must be finite");
    if (!(step > 0.0)) throw GeometryError(name + ".step must be > 0");
    if (max < min) throw GeometryError(name + ".max must be >= " + name + ".min");
  }

  std::size_t size() const {
    return static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
  }

  /// Values are min + k*step, not accumulated, so symmetric ranges stay exact.
  std::vector<double> values() const {
    std::vector<double> v(size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = min + static_cast<double>(k) * step;
    return v;
  }
};

struct SearchSpace {
  Range s0{-10.0, 10.0, 0.25};
  Range l0{-15.0, 5.0, 0.25};
  std::vector<double> dc_values;
  std::vector<NeedleShape> shapes{kAllShapes.begin(), kAllShapes.end()};

  void validate() const {
    s0.validate("search.s0");
    l0.validate("search.l0");
    if (dc_values.empty()) throw GeometryError("search.dc must not be empty");
    for (double d : dc_values)
      if (!(d > 0.0) || !std::isfinite(d)) throw GeometryError("search.dc values must be > 0");
    if (shapes.empty()) throw GeometryError("search.shapes must not be empty");
  }
};

enum class Normalization { MinMax, Fixed };

inline std::string to_string(Normalization n) { return n == Normalization::MinMax ? "minmax" : "fixed"; }

inline Normalization parse_normalization(const std::string& s) {
  if (s == "minmax") return Normalization::MinMax;
  if (s == "fixed") return Normalization::Fixed;
  throw GeometryError("normalization must be 'minmax' or 'fixed', got '" + s + "'");
}

struct CostBreakdown {
  ParameterArray deltas{};
  ParameterArray normalized_deltas{};
  double raw_cost = 0.0;
  double normalized_cost = 0.0;

  friend bool operator==(const CostBreakdown&, const CostBreakdown&) = default;
};

struct Plan {
  NeedleVariables needle;
  SutureParameters parameters;
  CostBreakdown cost;
  FeasibilityReport feasibility;
  std::size_t candidate_index = 0;

  friend bool operator==(const Plan&, const Plan&) = default;
};

struct CatalogEntry {
  std::string name;
  NeedleShape shape = NeedleShape::Half;
  double dc = 0.0;

  friend bool operator==(const CatalogEntry&, const CatalogEntry&) = default;
};

struct NeedleCatalog {
  std::vector<CatalogEntry> entries;

  void validate() const {
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (!(entries[i].dc > 0.0) || !std::isfinite(entries[i].dc))
        throw GeometryError("catalog entry '" + entries[i].name + "' needs diameter_mm > 0");
      for (std::size_t j = 0; j < i; ++j)
        if (entries[j].name == entries[i].name)
          throw GeometryError("catalog entry names must be unique: '" + entries[i].name + "'");
    }
  }

  /// Distinct diameters, ascending.
  std::vector<double> diameters() const {
    std::vector<double> d;
    for (const auto& e : entries) d.push_back(e.dc);
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    return d;
  }
};

struct CatalogMatch {
  CatalogEntry entry;
  double residual = 0.0;  // |dc difference|
};

/// Absolute errors and their weighted sum (mixed units).
inline CostBreakdown raw_cost(const SutureParameters& actual, const SutureParameters& desired,
                              const Weights& weights) {
  CostBreakdown c;
  const ParameterArray a = actual.to_array();
  const ParameterArray d = desired.to_array();
  for (std::size_t i = 0; i < kParameterCount; ++i) {
    c.deltas[i] = std::abs(a[i] - d[i]);
    c.raw_cost += weights.lambda[i] * c.deltas[i];
  }
  return c;
}

/// Per-component scaling of error vectors into [0, 1].
///
/// MinMax rescales each component over the given set (a constant component
/// maps to 0). Fixed divides angles by pi/2 and lengths by the bite distance,
/// then clamps.
inline std::vector<ParameterArray> normalize_deltas(std::span<const ParameterArray> deltas, Normalization mode,
                                                    double bite_distance) {
  std::vector<ParameterArray> out(deltas.size());
  if (mode == Normalization::Fixed) {
    for (std::size_t k = 0; k < deltas.size(); ++k)
      for (std::size_t i = 0; i < kParameterCount; ++i) {
        const double scale = kIsAngle[i] ? kPi / 2.0 : bite_distance;
        out[k][i] = std::clamp(deltas[k][i] / scale, 0.0, 1.0);
      }
    return out;
  }

  ParameterArray lo, hi;
  lo.fill(std::numeric_limits<double>::infinity());
  hi.fill(-std::numeric_limits<double>::infinity());
  for (const auto& d : deltas)
    for (std::size_t i = 0; i < kParameterCount; ++i) {
      lo[i] = std::min(lo[i], d[i]);
      hi[i] = std::max(hi[i], d[i]);
    }
  for (std::size_t k = 0; k < deltas.size(); ++k)
    for (std::size_t i = 0; i < kParameterCount; ++i) {
      const double span = hi[i] - lo[i];
      out[k][i] = span > 0.0 ? std::clamp((deltas[k][i] - lo[i]) / span, 0.0, 1.0) : 0.0;
    }
  return out;
}

/// Lexicographic: shape, then diameter, then s0, then l0 (all ascending).
inline std::vector<NeedleVariables> enumerate_candidates(const SearchSpace& space) {
  space.validate();
  std::vector<NeedleShape> shapes = space.shapes;
  std::sort(shapes.begin(), shapes.end(),
            [](NeedleShape a, NeedleShape b) { return shape_fraction(a) < shape_fraction(b); });
  shapes.erase(std::unique(shapes.begin(), shapes.end()), shapes.end());
  std::vector<double> dcs = space.dc_values;
  std::sort(dcs.begin(), dcs.end());
  dcs.erase(std::unique(dcs.begin(), dcs.end()), dcs.end());
  const std::vector<double> s0s = space.s0.values();
  const std::vector<double> l0s = space.l0.values();

  std::vector<NeedleVariables> out;
  out.reserve(shapes.size() * dcs.size() * s0s.size() * l0s.size());
  for (NeedleShape an : shapes)
    for (double dc : dcs)
      for (double s0 : s0s)
        for (double l0 : l0s) out.push_back({s0, l0, dc, an});
  return out;
}

struct OptimizeOptions {
  /// Worker threads for candidate evaluation; 0 picks the hardware count.
  unsigned threads = 1;
};

namespace detail {

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, n);
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([&fn, begin, end] {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
}

}  // namespace detail

inline std::optional<Plan> optimize(const TissueGeometry& tissue, const DesiredParameters& desired,
                                    const Weights& weights, const SearchSpace& space, const GraspPolicy& policy,
                                    Normalization mode, const OptimizeOptions& options = {}) {
  weights.validate();
  policy.validate();
  const WoundFrame frame = build_wound_frame(tissue);
  const std::vector<NeedleVariables> candidates = enumerate_candidates(space);

  std::vector<Evaluation> evals(candidates.size());
  detail::parallel_for(candidates.size(), options.threads,
                       [&](std::size_t i) { evals[i] = evaluate_candidate(candidates[i], frame, policy); });

  // Normalization barrier: bounds need every feasible delta.
  std::vector<std::size_t> feasible;
  std::vector<CostBreakdown> costs;
  for (std::size_t i = 0; i < evals.size(); ++i) {
    if (!evals[i].report.overall) continue;
    feasible.push_back(i);
    costs.push_back(raw_cost(*evals[i].parameters, desired, weights));
  }
  if (feasible.empty()) return std::nullopt;

  std::vector<ParameterArray> deltas(costs.size());
  for (std::size_t k = 0; k < costs.size(); ++k) deltas[k] = costs[k].deltas;
  const std::vector<ParameterArray> normalized = normalize_deltas(deltas, mode, tissue.bite_distance);

  std::size_t best = 0;
  for (std::size_t k = 0; k < costs.size(); ++k) {
    costs[k].normalized_deltas = normalized[k];
    double j = 0.0;
    for (std::size_t i = 0; i < kParameterCount; ++i) j += weights.lambda[i] * normalized[k][i];
    costs[k].normalized_cost = j;
    if (j < costs[best].normalized_cost) best = k;
  }

  const std::size_t idx = feasible[best];
  return Plan{candidates[idx], *evals[idx].parameters, costs[best], evals[idx].report, idx};
}

/// Catalog needle of the plan's shape with the closest diameter (ties go to
/// the smaller diameter).
inline CatalogMatch match_catalog(const Plan& plan, const NeedleCatalog& catalog) {
  if (catalog.entries.empty()) throw GeometryError("needle catalog is empty");
  const CatalogEntry* best = nullptr;
  double best_residual = 0.0;
  for (const auto& e : catalog.entries) {
    if (e.shape != plan.needle.an) continue;
    const double r = std::abs(e.dc - plan.needle.dc);
    if (!best || r < best_residual || (r == best_residual && e.dc < best->dc)) {
      best = &e;
      best_residual = r;
    }
  }
  if (!best) throw GeometryError("needle catalog has no entry with shape " + to_string(plan.needle.an));
  return {*best, best_residual};
}

}  // namespace suture
