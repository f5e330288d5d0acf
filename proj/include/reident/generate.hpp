#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "reident/graph.hpp"
#include "reident/rng.hpp"

namespace reident {

// G(n, p): every unordered pair becomes an edge with probability p.
// Quadratic in n; meant for small experiment graphs.
inline Graph erdos_renyi_gnp(std::size_t n, double p, std::uint64_t rng_seed) {
  if (n == 0) throw std::invalid_argument("erdos_renyi_gnp: n must be positive");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("erdos_renyi_gnp: p must lie in [0, 1]");
  Rng rng(derive_seed(rng_seed, 0x6572));
  std::vector<Edge> edges;
  std::vector<NodeId> nodes(n);
  for (std::size_t i = 0; i < n; ++i) nodes[i] = static_cast<NodeId>(i);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.bernoulli(p)) edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
    }
  }
  return Graph::from_edges(std::move(edges), std::move(nodes));
}

// Preferential attachment: node k >= m attaches to m distinct existing nodes
// picked proportionally to degree (the first arrival connects to all initial
// nodes). Produces the heavy-tailed degree profile typical of social graphs.
inline Graph barabasi_albert(std::size_t n, std::size_t m, std::uint64_t rng_seed) {
  if (m < 1) throw std::invalid_argument("barabasi_albert: m must be >= 1");
  if (n <= m) throw std::invalid_argument("barabasi_albert: need n > m");
  Rng rng(derive_seed(rng_seed, 0x6261));
  std::vector<Edge> edges;
  edges.reserve((n - m) * m);
  // One endpoint entry per degree unit; uniform draws from it are
  // degree-proportional draws.
  std::vector<NodeId> urn;
  urn.reserve(2 * (n - m) * m);

  for (std::size_t k = m; k < n; ++k) {
    const NodeId v = static_cast<NodeId>(k);
    std::vector<NodeId> targets;
    targets.reserve(m);
    if (urn.empty()) {
      for (std::size_t i = 0; i < m; ++i) targets.push_back(static_cast<NodeId>(i));
    } else {
      while (targets.size() < m) {
        const NodeId t = urn[static_cast<std::size_t>(rng.uniform_below(urn.size()))];
        if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
      }
    }
    for (const NodeId t : targets) {
      edges.emplace_back(v, t);
      urn.push_back(v);
      urn.push_back(t);
    }
  }
  return Graph::from_edges(std::move(edges));
}

}  // namespace reident
