#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "reident/graph.hpp"
#include "reident/mapping.hpp"
#include "reident/similarity.hpp"

namespace reident {

// Attack-quality measures against ground truth. A mapped pair is correct iff
// it appears in the ground truth; every other mapped pair is an error, even
// when its source lies outside the mutually existing set. That is why the
// error rate can exceed 1.
struct Metrics {
  double recall = 0.0;
  double error = 0.0;
  double precision = 0.0;
  std::size_t mapping_size = 0;
  std::size_t v_common_size = 0;
  std::size_t correct = 0;
};

inline Metrics evaluate(const Mapping& mu, const GroundTruth& gt) {
  Metrics m;
  m.mapping_size = mu.size();
  m.v_common_size = gt.size();
  for (const auto& [s, t] : mu.forward()) {
    const auto truth = gt.target_of(s);
    if (truth && *truth == t) ++m.correct;
  }
  const std::size_t incorrect = m.mapping_size - m.correct;
  if (m.v_common_size > 0) {
    m.recall = static_cast<double>(m.correct) / static_cast<double>(m.v_common_size);
    m.error = static_cast<double>(incorrect) / static_cast<double>(m.v_common_size);
  }
  m.precision = m.mapping_size == 0
                    ? 0.0
                    : static_cast<double>(m.correct) / static_cast<double>(m.mapping_size);
  return m;
}

struct DecisionCount {
  std::size_t correct = 0;
  std::size_t total = 0;
};

// Brute-force oracle for the within-graph node comparison problem: over all
// ordered pairs (a, b) of distinct degree->=1 nodes, counts the pairs where
// the metric's self score beats the cross score by more than theta. The self
// score uses common = deg(a); the cross score uses the actual common
// neighbor count. The grh entry is evaluated with unit weights.
inline DecisionCount decision_count_oracle(const Graph& g, const MetricSpec& metric,
                                           double theta) {
  if (g.empty()) throw std::invalid_argument("decision_count_oracle: empty graph");
  DecisionCount out;
  std::unordered_set<NodeId> mark;
  for (const NodeId a : g.node_ids()) {
    const std::size_t deg_a = g.degree(a);
    if (deg_a < 1) continue;
    mark.clear();
    mark.insert(g.neighbors(a).begin(), g.neighbors(a).end());

    double self = 0.0;
    switch (metric.kind) {
      case MetricKind::nar: self = nar_sim(deg_a, deg_a); break;
      case MetricKind::blb: self = blb_sim(deg_a, deg_a, deg_a, metric.delta); break;
      case MetricKind::grh: self = static_cast<double>(deg_a); break;
    }

    for (const NodeId b : g.node_ids()) {
      if (a == b) continue;
      const std::size_t deg_b = g.degree(b);
      if (deg_b < 1) continue;
      std::size_t common = 0;
      for (const NodeId n : g.neighbors(b)) {
        if (mark.contains(n)) ++common;
      }
      double cross = 0.0;
      switch (metric.kind) {
        case MetricKind::nar: cross = nar_sim(common, deg_b); break;
        case MetricKind::blb: cross = blb_sim(common, deg_a, deg_b, metric.delta); break;
        case MetricKind::grh: cross = static_cast<double>(common); break;
      }
      ++out.total;
      if (self > cross + theta) ++out.correct;
    }
  }
  return out;
}

// Dominance report: for each (graph, delta) the blb decision count must be at
// least the nar count at theta = 0, and the degree-ratio bound
// min(a/b, b/a)^delta <= sqrt(a)/sqrt(b) must hold for every ordered degree
// pair occurring in the graph.
struct DominanceReport {
  struct Entry {
    std::size_t graph_index = 0;
    double delta = 0.0;
    std::size_t blb_correct = 0;
    std::size_t nar_correct = 0;
    std::size_t total = 0;
  };
  struct RatioBoundViolation {
    std::size_t graph_index = 0;
    double delta = 0.0;
    std::size_t deg_a = 0;
    std::size_t deg_b = 0;
    double lhs = 0.0;
    double rhs = 0.0;
  };

  std::vector<Entry> entries;
  std::vector<Entry> dominance_violations;
  std::vector<RatioBoundViolation> ratio_bound_violations;

  bool ok() const { return dominance_violations.empty() && ratio_bound_violations.empty(); }

  std::string describe_failures() const {
    std::string out;
    for (const Entry& e : dominance_violations) {
      out += "dominance violated: graph " + std::to_string(e.graph_index) + " delta " +
             std::to_string(e.delta) + " blb " + std::to_string(e.blb_correct) + " < nar " +
             std::to_string(e.nar_correct) + "\n";
    }
    for (const RatioBoundViolation& v : ratio_bound_violations) {
      out += "ratio bound violated: graph " + std::to_string(v.graph_index) + " delta " +
             std::to_string(v.delta) + " degrees (" + std::to_string(v.deg_a) + ", " +
             std::to_string(v.deg_b) + ")\n";
    }
    return out;
  }
};

inline DominanceReport check_decision_dominance(std::span<const Graph> graphs,
                                     std::span<const double> deltas) {
  for (const double d : deltas) {
    if (d < 0.5) throw std::invalid_argument("check_decision_dominance: deltas must be >= 0.5");
  }
  DominanceReport report;
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const Graph& g = graphs[gi];
    const DecisionCount nar = decision_count_oracle(g, MetricSpec::nar(), 0.0);

    std::vector<std::size_t> degrees;
    degrees.reserve(g.node_count());
    for (const NodeId v : g.node_ids()) {
      if (g.degree(v) >= 1) degrees.push_back(g.degree(v));
    }
    std::sort(degrees.begin(), degrees.end());
    degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());

    for (const double delta : deltas) {
      const DecisionCount blb = decision_count_oracle(g, MetricSpec::blb(delta), 0.0);
      DominanceReport::Entry entry{gi, delta, blb.correct, nar.correct, nar.total};
      report.entries.push_back(entry);
      if (blb.correct < nar.correct) report.dominance_violations.push_back(entry);

      // Tolerance covers rounding at the delta = 1/2 equality boundary.
      for (const std::size_t a : degrees) {
        for (const std::size_t b : degrees) {
          const double lhs = degree_ratio_penalty(a, b, delta);
          const double rhs = std::sqrt(static_cast<double>(a)) / std::sqrt(static_cast<double>(b));
          if (lhs > rhs * (1.0 + 1e-12) + 1e-12)
            report.ratio_bound_violations.push_back({gi, delta, a, b, lhs, rhs});
        }
      }
    }
  }
  return report;
}

}  // namespace reident
