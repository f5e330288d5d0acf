#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "reident/evaluate.hpp"
#include "reident/graph.hpp"
#include "reident/mapping.hpp"
#include "reident/rng.hpp"
#include "reident/seeding.hpp"
#include "reident/similarity.hpp"

namespace reident {

enum class IterationOrder { sorted_id, shuffled };

struct AttackConfig {
  MetricSpec metric = MetricSpec::nar();
  double theta = 0.01;  // greediness gate, in [0, inf)
  std::uint64_t rng_seed = 0;
  IterationOrder order = IterationOrder::sorted_id;
  std::size_t max_rounds = 1000;
  // Test instrumentation: record every registration with its gate values and
  // verify engine invariants after each round.
  bool audit = false;
};

struct RoundLog {
  std::size_t round_index = 0;  // 1-based
  std::size_t delta = 0;        // registrations made this round
  std::size_t mapping_size = 0; // at round end
  std::optional<Metrics> metrics;  // present when ground truth was supplied
  double elapsed_s = 0.0;
};

struct RegistrationRecord {
  std::size_t round = 0;
  NodeId source = 0;
  NodeId target = 0;
  double forward_ecc = 0.0;
  double reverse_ecc = 0.0;
  bool remap = false;  // source already had a target when re-registered
};

struct AttackResult {
  Mapping mapping;
  std::vector<RoundLog> rounds;
  bool converged = false;  // false when max_rounds cut the run short
  double total_seconds = 0.0;
  std::vector<RegistrationRecord> registrations;  // audit runs only
};

// Scores every candidate for v reachable through the mapping: for each mapped
// neighbor of v, each unmapped neighbor of its image accumulates the metric's
// per-common-neighbor increment. Candidates already in the mapping's image
// are never materialized. nar normalizes by the candidate-degree square root
// at the end; blb applies the degree-ratio penalty; grh adds the mapped
// neighbor's weight (base weight 1 when absent, e.g. for pairs registered
// earlier in the same round).
inline ScoreTable score(const Graph& g_a, const Graph& g_b, NodeId v, const MapView& mu,
                        const MetricSpec& metric, const WeightTable* weights = nullptr) {
  if (!g_a.contains(v))
    throw std::out_of_range("score: node " + std::to_string(v) + " not in graph");
  ScoreTable table;
  auto& s = table.scores;
  for (const NodeId n : g_a.neighbors(v)) {
    const NodeId* image = mu.image_of(n);
    if (!image) continue;
    const double w =
        metric.kind == MetricKind::grh ? (weights ? weights->at_or(n, 1.0) : 1.0) : 1.0;
    for (const NodeId candidate : g_b.neighbors(*image)) {
      if (mu.maps_target(candidate)) continue;
      s[candidate] += w;  // raw common count except for grh, where w varies
    }
  }
  switch (metric.kind) {
    case MetricKind::nar:
      for (auto& [candidate, value] : s)
        value /= std::sqrt(static_cast<double>(g_b.degree(candidate)));
      break;
    case MetricKind::blb:
      for (auto& [candidate, value] : s)
        value *= degree_ratio_penalty(g_a.degree(v), g_b.degree(candidate), metric.delta);
      break;
    case MetricKind::grh:
      break;
  }
  return table;
}

// Weights for every currently registered pair (s, t): the count of s's
// neighbors whose image neighbors t, over the geometric mean of the endpoint
// degrees, plus one. Returns the table twice, keyed by source node for
// forward scoring and by target node for reverse scoring.
inline std::pair<WeightTable, WeightTable> build_grh_weights(const Graph& g_src,
                                                             const Graph& g_tar,
                                                             const Mapping& mu) {
  WeightTable fwd, rev;
  fwd.weights.reserve(mu.size());
  rev.weights.reserve(mu.size());
  for (const auto& [s, t] : mu.forward()) {
    std::size_t common = 0;
    for (const NodeId n : g_src.neighbors(s)) {
      const auto image = mu.target_of(n);
      if (image && g_tar.has_edge(t, *image)) ++common;
    }
    const double w = grh_weight(common, std::max<std::size_t>(g_src.degree(s), 1),
                                std::max<std::size_t>(g_tar.degree(t), 1));
    fwd.weights.emplace(s, w);
    rev.weights.emplace(t, w);
  }
  return {std::move(fwd), std::move(rev)};
}

namespace detail {

inline NodeId pick_argmax(const ScoreTable& table, Rng& rng) {
  const std::vector<NodeId> ties = table.argmax_set();
  if (ties.size() == 1) return ties.front();
  return ties[static_cast<std::size_t>(rng.uniform_below(ties.size()))];
}

}  // namespace detail

// One propagation round. Visits every source node (mapped ones too) in the
// configured order; a candidate is registered only when it clears the
// eccentricity gate in both directions and the reverse pass maps back to the
// visited node. Registrations made earlier in the round are visible to later
// scorings. Returns the number of registrations.
inline std::size_t propagate_round(const Graph& g_src, const Graph& g_tar, Mapping& mu,
                                   const AttackConfig& config, Rng& rng,
                                   const WeightTable* fwd_weights = nullptr,
                                   const WeightTable* rev_weights = nullptr,
                                   std::size_t round_index = 0,
                                   std::vector<RegistrationRecord>* audit_sink = nullptr) {
  std::vector<NodeId> order = g_src.node_ids();
  if (config.order == IterationOrder::shuffled) rng.shuffle(order);

  std::size_t delta = 0;
  for (const NodeId v : order) {
    const ScoreTable forward = score(g_src, g_tar, v, mu.forward_view(), config.metric, fwd_weights);
    if (forward.empty()) continue;
    const double forward_ecc = eccentricity(forward);
    if (forward_ecc < config.theta) continue;
    const NodeId candidate = detail::pick_argmax(forward, rng);

    const ScoreTable reverse =
        score(g_tar, g_src, candidate, mu.inverse_view(), config.metric, rev_weights);
    if (reverse.empty()) continue;
    const double reverse_ecc = eccentricity(reverse);
    if (reverse_ecc < config.theta) continue;
    const NodeId back = detail::pick_argmax(reverse, rng);
    if (back != v) continue;

    const bool remap = mu.has_source(v);
    mu.register_pair(v, candidate);
    ++delta;
    if (audit_sink)
      audit_sink->push_back({round_index, v, candidate, forward_ecc, reverse_ecc, remap});
  }
  return delta;
}

// Runs propagation from a seed set until a round registers nothing (or
// max_rounds is hit, flagged via converged = false). grh weights are rebuilt
// from the mapping at the end of every round; the seed round runs with all
// weights at 1. Per-round quality metrics are logged when gt is supplied.
// Deterministic: identical inputs and config yield an identical result.
inline AttackResult run_attack(const Graph& g_src, const Graph& g_tar, const SeedSet& seeds,
                               const AttackConfig& config, const GroundTruth* gt = nullptr) {
  if (config.theta < 0.0) throw std::invalid_argument("run_attack: theta must be >= 0");
  if (config.max_rounds < 1) throw std::invalid_argument("run_attack: max_rounds must be >= 1");
  using clock = std::chrono::steady_clock;
  const auto attack_start = clock::now();

  AttackResult result;
  for (const auto& [s, t] : seeds.pairs) {
    if (!g_src.contains(s) || !g_tar.contains(t))
      throw std::invalid_argument("seed pair (" + std::to_string(s) + ", " + std::to_string(t) +
                                  ") not present in the graph pair");
    result.mapping.register_pair(s, t);
  }

  Rng rng(derive_seed(config.rng_seed, 0x656e67));
  const bool grh = config.metric.kind == MetricKind::grh;
  WeightTable fwd_weights, rev_weights;
  if (grh) {
    for (const auto& [s, t] : result.mapping.forward()) {
      fwd_weights.weights.emplace(s, 1.0);
      rev_weights.weights.emplace(t, 1.0);
    }
  }

  for (std::size_t round = 1; round <= config.max_rounds; ++round) {
    const auto round_start = clock::now();
    if (config.audit && grh && round > 1) {
      // Weight tables must equal a fresh rebuild from the current mapping.
      const auto rebuilt = build_grh_weights(g_src, g_tar, result.mapping);
      if (rebuilt.first.weights != fwd_weights.weights ||
          rebuilt.second.weights != rev_weights.weights)
        throw std::logic_error("audit: stale grh weight table at round " + std::to_string(round));
    }

    const std::size_t delta =
        propagate_round(g_src, g_tar, result.mapping, config, rng,
                        grh ? &fwd_weights : nullptr, grh ? &rev_weights : nullptr, round,
                        config.audit ? &result.registrations : nullptr);

    if (grh) {
      auto rebuilt = build_grh_weights(g_src, g_tar, result.mapping);
      fwd_weights = std::move(rebuilt.first);
      rev_weights = std::move(rebuilt.second);
    }
    if (config.audit && !result.mapping.consistent())
      throw std::logic_error("audit: mapping lost injectivity in round " + std::to_string(round));

    RoundLog log;
    log.round_index = round;
    log.delta = delta;
    log.mapping_size = result.mapping.size();
    if (gt) log.metrics = evaluate(result.mapping, *gt);
    log.elapsed_s = std::chrono::duration<double>(clock::now() - round_start).count();
    result.rounds.push_back(log);

    if (delta == 0) {
      result.converged = true;
      break;
    }
  }
  result.total_seconds = std::chrono::duration<double>(clock::now() - attack_start).count();
  return result;
}

}  // namespace reident
