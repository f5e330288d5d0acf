#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "reident/graph.hpp"

namespace reident {

enum class MetricKind { nar, grh, blb };

inline const char* metric_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::nar: return "nar";
    case MetricKind::grh: return "grh";
    case MetricKind::blb: return "blb";
  }
  return "?";
}

// Metric choice; delta is the degree-ratio exponent and is meaningful for
// blb only.
struct MetricSpec {
  MetricKind kind = MetricKind::nar;
  double delta = 0.0;

  static MetricSpec nar() { return {MetricKind::nar, 0.0}; }
  static MetricSpec grh() { return {MetricKind::grh, 0.0}; }
  static MetricSpec blb(double delta) {
    if (delta < 0.0 || delta > 1.0)
      throw std::invalid_argument("blb delta must lie in [0, 1]");
    return {MetricKind::blb, delta};
  }
};

// Sparse score table: only candidates actually reached are materialized;
// untouched nodes have implicit score 0.
struct ScoreTable {
  std::unordered_map<NodeId, double> scores;

  bool empty() const { return scores.empty(); }
  std::size_t size() const { return scores.size(); }

  double max_score() const {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& [node, s] : scores) best = std::max(best, s);
    return best;
  }

  // All candidates holding the maximum score, ascending by id.
  std::vector<NodeId> argmax_set() const {
    const double best = max_score();
    std::vector<NodeId> out;
    for (const auto& [node, s] : scores) {
      if (s == best) out.push_back(node);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<double> values() const {
    std::vector<double> out;
    out.reserve(scores.size());
    for (const auto& [node, s] : scores) out.push_back(s);
    return out;
  }
};

// Per-mapping weights used by the grh metric; each weight is >= 1 and keys
// are nodes mapped at the start of the current propagation round.
struct WeightTable {
  std::unordered_map<NodeId, double> weights;

  double at(NodeId v) const {
    const auto it = weights.find(v);
    if (it == weights.end())
      throw std::logic_error("WeightTable: no weight for node " + std::to_string(v));
    return it->second;
  }
  // Nodes mapped mid-round have no weight yet and count at the base weight.
  double at_or(NodeId v, double fallback) const {
    const auto it = weights.find(v);
    return it == weights.end() ? fallback : it->second;
  }
};

// Common mapped neighbors over the square root of the candidate's degree.
inline double nar_sim(std::size_t common, std::size_t candidate_degree) {
  if (candidate_degree < 1)
    throw std::invalid_argument("nar_sim: candidate degree must be >= 1");
  return static_cast<double>(common) / std::sqrt(static_cast<double>(candidate_degree));
}

// min(deg_i/deg_j, deg_j/deg_i)^delta, the degree-balance penalty.
inline double degree_ratio_penalty(std::size_t deg_i, std::size_t deg_j, double delta) {
  const double a = static_cast<double>(deg_i);
  const double b = static_cast<double>(deg_j);
  return std::pow(a < b ? a / b : b / a, delta);
}

// Common mapped neighbors damped by the degree-balance penalty. Symmetric in
// the two degrees; delta = 0 reduces to the plain common-neighbor count.
inline double blb_sim(std::size_t common, std::size_t deg_i, std::size_t deg_j, double delta) {
  if (deg_i < 1 || deg_j < 1) throw std::invalid_argument("blb_sim: degrees must be >= 1");
  if (delta < 0.0 || delta > 1.0) throw std::invalid_argument("blb_sim: delta must lie in [0, 1]");
  return static_cast<double>(common) * degree_ratio_penalty(deg_i, deg_j, delta);
}

// Weight of one registered pair: common mapped neighbors over the geometric
// mean of the endpoint degrees, plus one.
inline double grh_weight(std::size_t common_of_pair, std::size_t deg_src, std::size_t deg_tar) {
  if (deg_src < 1 || deg_tar < 1) throw std::invalid_argument("grh_weight: degrees must be >= 1");
  return static_cast<double>(common_of_pair) /
             std::sqrt(static_cast<double>(deg_src) * static_cast<double>(deg_tar)) +
         1.0;
}

// Sum of mapping weights over the common mapped neighbors.
inline double grh_sim(std::span<const NodeId> common_mapped_neighbors, const WeightTable& weights) {
  double total = 0.0;
  for (const NodeId v : common_mapped_neighbors) total += weights.at(v);
  return total;
}

// (max - second max) / population standard deviation, over all candidate
// scores. Degenerate cases: empty or all-equal tables score 0; a single
// positive-score candidate is unrivalled and scores +infinity.
inline double eccentricity(std::span<const double> scores) {
  if (scores.empty()) return 0.0;
  if (scores.size() == 1)
    return scores[0] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;

  double max1 = -std::numeric_limits<double>::infinity();
  double max2 = -std::numeric_limits<double>::infinity();
  double mean = 0.0;
  for (const double s : scores) {
    if (s > max1) {
      max2 = max1;
      max1 = s;
    } else if (s > max2) {
      max2 = s;
    }
    mean += s;
  }
  mean /= static_cast<double>(scores.size());
  double var = 0.0;
  for (const double s : scores) var += (s - mean) * (s - mean);
  var /= static_cast<double>(scores.size());
  const double sigma = std::sqrt(var);
  if (sigma == 0.0) return 0.0;
  return (max1 - max2) / sigma;
}

inline double eccentricity(const ScoreTable& table) {
  const std::vector<double> vals = table.values();
  return eccentricity(std::span<const double>(vals));
}

}  // namespace reident
