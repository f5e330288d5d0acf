#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "reident/graph.hpp"
#include "reident/mapping.hpp"
#include "reident/rng.hpp"

namespace reident {

// Initial mapping handed to the attack. Seeds are always correct pairs drawn
// from the ground truth; this is experimental scaffolding, not an adversarial
// seed-acquisition method.
struct SeedSet {
  enum class Method { top, random_top_percent };

  std::vector<Edge> pairs;
  Method method = Method::top;

  std::size_t size() const { return pairs.size(); }

  void save_tsv(const std::filesystem::path& path) const {
    detail::save_pairs_tsv(pairs, path);
  }
  static SeedSet load_tsv(const std::filesystem::path& path, Method method = Method::top) {
    return {detail::load_pairs_tsv(path), method};
  }
};

namespace detail {

// Source nodes eligible for seeding, ranked by descending source-graph
// degree with ascending-id tie break.
inline std::vector<NodeId> eligible_by_degree(const Graph& g_src, const Graph& g_tar,
                                              const GroundTruth& gt) {
  std::vector<NodeId> eligible;
  for (const NodeId v : g_src.node_ids()) {
    const auto t = gt.target_of(v);
    if (t && g_tar.contains(*t)) eligible.push_back(v);
  }
  std::stable_sort(eligible.begin(), eligible.end(), [&](NodeId a, NodeId b) {
    const std::size_t da = g_src.degree(a);
    const std::size_t db = g_src.degree(b);
    return da != db ? da > db : a < b;
  });
  return eligible;
}

}  // namespace detail

// The k highest-degree mutually existing source nodes, each paired with its
// ground-truth counterpart.
inline SeedSet seed_top(const Graph& g_src, const Graph& g_tar, const GroundTruth& gt,
                        std::size_t k) {
  if (k < 1) throw std::invalid_argument("seed_top: k must be >= 1");
  std::vector<NodeId> eligible = detail::eligible_by_degree(g_src, g_tar, gt);
  if (eligible.size() < k)
    throw std::invalid_argument("seed_top: only " + std::to_string(eligible.size()) +
                                " eligible nodes, need " + std::to_string(k));
  SeedSet seeds;
  seeds.method = SeedSet::Method::top;
  seeds.pairs.reserve(k);
  for (std::size_t i = 0; i < k; ++i) seeds.pairs.emplace_back(eligible[i], *gt.target_of(eligible[i]));
  return seeds;
}

// k nodes drawn uniformly from the top percent of the source graph by degree
// (intersected with the mutually existing set), ground-truth mapped.
// Reproducible from rng_seed.
inline SeedSet seed_random_top_percent(const Graph& g_src, const Graph& g_tar,
                                       const GroundTruth& gt, std::size_t k, double percent,
                                       std::uint64_t rng_seed) {
  if (percent <= 0.0 || percent > 1.0)
    throw std::invalid_argument("seed_random_top_percent: percent must lie in (0, 1]");
  const std::size_t pool_target =
      static_cast<std::size_t>(std::ceil(percent * static_cast<double>(g_src.node_count())));
  std::vector<NodeId> ranked = g_src.top_degree_nodes(std::min(pool_target, g_src.node_count()));

  std::vector<NodeId> pool;
  for (const NodeId v : ranked) {
    const auto t = gt.target_of(v);
    if (t && g_tar.contains(*t)) pool.push_back(v);
  }
  if (pool.size() < k)
    throw std::invalid_argument("seed_random_top_percent: pool of " +
                                std::to_string(pool.size()) + " nodes is smaller than k = " +
                                std::to_string(k));

  Rng rng(rng_seed);
  std::vector<NodeId> chosen = rng.sample_without_replacement(std::move(pool), k);
  SeedSet seeds;
  seeds.method = SeedSet::Method::random_top_percent;
  seeds.pairs.reserve(k);
  for (const NodeId v : chosen) seeds.pairs.emplace_back(v, *gt.target_of(v));
  return seeds;
}

}  // namespace reident
