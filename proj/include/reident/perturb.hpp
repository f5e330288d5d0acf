#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "reident/graph.hpp"
#include "reident/mapping.hpp"
#include "reident/rng.hpp"

namespace reident {

// Target node/edge overlaps for deletion-based perturbation, measured as
// Jaccard similarities between the two derived copies.
struct PerturbationParams {
  double alpha_v = 0.5;
  double alpha_e = 0.75;
  std::uint64_t rng_seed = 0;
};

struct PerturbedPair {
  Graph src;
  Graph tar;
  GroundTruth gt;
};

struct OverlapMeasure {
  double jaccard_nodes = 0.0;
  double jaccard_edges = 0.0;
};

// Per-copy Bernoulli keep probability that makes the expected Jaccard overlap
// of two independent keeps equal alpha: J = p/(2-p) = alpha.
inline double bernoulli_keep_probability(double alpha) {
  if (alpha <= 0.0 || alpha > 1.0)
    throw std::invalid_argument("overlap target must lie in (0, 1]");
  return 2.0 * alpha / (1.0 + alpha);
}

namespace detail {

// One deletion pass: keep nodes first, then edges among surviving nodes, all
// draws from a single per-copy stream in ascending id order. Node outcomes
// therefore do not depend on alpha_e. Nodes isolated by edge deletion stay.
inline Graph delete_copy(const Graph& g, double p_node, double p_edge, Rng& rng) {
  std::vector<NodeId> kept_nodes;
  kept_nodes.reserve(g.node_count());
  for (const NodeId v : g.node_ids()) {
    if (rng.bernoulli(p_node)) kept_nodes.push_back(v);
  }
  std::vector<Edge> kept_edges;
  g.for_each_edge([&](NodeId u, NodeId v) {
    if (!std::binary_search(kept_nodes.begin(), kept_nodes.end(), u)) return;
    if (!std::binary_search(kept_nodes.begin(), kept_nodes.end(), v)) return;
    if (rng.bernoulli(p_edge)) kept_edges.emplace_back(u, v);
  });
  return Graph::from_edges(std::move(kept_edges), std::move(kept_nodes));
}

inline GroundTruth shared_identity(const Graph& a, const Graph& b) {
  std::vector<NodeId> common;
  std::set_intersection(a.node_ids().begin(), a.node_ids().end(), b.node_ids().begin(),
                        b.node_ids().end(), std::back_inserter(common));
  return GroundTruth::identity(common);
}

}  // namespace detail

// Derives (g_src, g_tar, ground truth) from one graph by two independent
// deletion passes: every node survives a copy with probability
// 2*alpha_v/(1+alpha_v), then every surviving edge with probability
// 2*alpha_e/(1+alpha_e). Ground truth pairs the ids present in both copies.
// Bit-reproducible from rng_seed; the two copies use independent streams.
inline PerturbedPair ns_perturb(const Graph& g, const PerturbationParams& params) {
  if (g.empty()) throw std::invalid_argument("ns_perturb: input graph is empty");
  const double p_node = bernoulli_keep_probability(params.alpha_v);
  const double p_edge = bernoulli_keep_probability(params.alpha_e);

  Rng rng_src(derive_seed(params.rng_seed, 0));
  Rng rng_tar(derive_seed(params.rng_seed, 1));
  Graph src = detail::delete_copy(g, p_node, p_edge, rng_src);
  Graph tar = detail::delete_copy(g, p_node, p_edge, rng_tar);
  if (src.empty() || tar.empty())
    throw std::runtime_error("ns_perturb: a perturbed copy came out empty; "
                             "overlap targets too low for this graph");
  GroundTruth gt = detail::shared_identity(src, tar);
  return {std::move(src), std::move(tar), std::move(gt)};
}

// Two independent edge samples of g: every edge survives a copy with
// probability s, all nodes are kept. Ground truth is the identity on V.
inline PerturbedPair edge_sample_pair(const Graph& g, double s, std::uint64_t rng_seed) {
  if (g.empty()) throw std::invalid_argument("edge_sample_pair: input graph is empty");
  if (s <= 0.0 || s > 1.0)
    throw std::invalid_argument("edge_sample_pair: s must lie in (0, 1]");

  const auto sample = [&](std::uint64_t stream) {
    Rng rng(derive_seed(rng_seed, stream));
    std::vector<Edge> kept;
    g.for_each_edge([&](NodeId u, NodeId v) {
      if (rng.bernoulli(s)) kept.emplace_back(u, v);
    });
    return Graph::from_edges(std::move(kept), g.node_ids());
  };
  Graph src = sample(0);
  Graph tar = sample(1);
  GroundTruth gt = GroundTruth::identity(g.node_ids());
  return {std::move(src), std::move(tar), std::move(gt)};
}

// Jaccard overlaps actually realized by a graph pair. Node overlap is over
// the raw id sets; edge overlap maps g1's edges through the ground truth,
// with edges incident to unpaired nodes counting only in the union.
inline OverlapMeasure measure_overlap(const Graph& g1, const Graph& g2, const GroundTruth& gt) {
  std::size_t node_common = 0;
  for (const NodeId v : g1.node_ids()) {
    if (g2.contains(v)) ++node_common;
  }
  const std::size_t node_union = g1.node_count() + g2.node_count() - node_common;

  std::size_t edge_common = 0;
  g1.for_each_edge([&](NodeId u, NodeId v) {
    const auto mu = gt.target_of(u);
    const auto mv = gt.target_of(v);
    if (mu && mv && g2.has_edge(*mu, *mv)) ++edge_common;
  });
  const std::size_t edge_union = g1.edge_count() + g2.edge_count() - edge_common;

  OverlapMeasure m;
  m.jaccard_nodes =
      node_union == 0 ? 0.0 : static_cast<double>(node_common) / static_cast<double>(node_union);
  m.jaccard_edges =
      edge_union == 0 ? 0.0 : static_cast<double>(edge_common) / static_cast<double>(edge_union);
  return m;
}

// Edge Jaccard restricted to edges whose endpoints are paired in the ground
// truth on both sides. This is the quantity the edge-deletion probability
// actually calibrates; the raw edge overlap sits lower whenever node deletion
// removed edges as a side effect.
inline double common_subgraph_edge_jaccard(const Graph& g1, const Graph& g2,
                                           const GroundTruth& gt) {
  std::size_t e1 = 0, e2 = 0, common = 0;
  g1.for_each_edge([&](NodeId u, NodeId v) {
    const auto mu = gt.target_of(u);
    const auto mv = gt.target_of(v);
    if (!mu || !mv) return;
    ++e1;
    if (g2.has_edge(*mu, *mv)) ++common;
  });
  g2.for_each_edge([&](NodeId u, NodeId v) {
    if (gt.source_of(u) && gt.source_of(v)) ++e2;
  });
  const std::size_t uni = e1 + e2 - common;
  return uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
}

}  // namespace reident
