#pragma once

// Hand-built graphs used across the test suites.

#include <utility>
#include <vector>

#include "reident/graph.hpp"
#include "reident/mapping.hpp"
#include "reident/seeding.hpp"

namespace fixtures {

using reident::Edge;
using reident::Graph;
using reident::GroundTruth;
using reident::Mapping;
using reident::NodeId;
using reident::SeedSet;

// Nine-node pair with two hub nodes (3 and 5). The source and target graphs
// are isomorphic under the identity, so ground truth is id -> id. With hubs
// seeded, node 7 is adjacent to both hubs and has degree 2, node 4 to both
// hubs with degree 3, nodes 1 and 8 to one hub with degree 1, and nodes
// 0, 2, 6 to one hub with degree 2.
inline std::vector<Edge> intro_edges() {
  return {{0, 3}, {0, 2}, {1, 3}, {2, 3}, {4, 3}, {4, 5},
          {4, 6}, {6, 5}, {7, 3}, {7, 5}, {8, 5}};
}

struct IntroPair {
  Graph src;
  Graph tar;
  GroundTruth gt;
  SeedSet seeds;  // the two hubs, correctly mapped
};

inline IntroPair intro_pair() {
  IntroPair p;
  p.src = Graph::from_edges(intro_edges());
  p.tar = Graph::from_edges(intro_edges());
  p.gt = GroundTruth::identity(p.src.node_ids());
  p.seeds.method = SeedSet::Method::top;
  p.seeds.pairs = {{3, 3}, {5, 5}};
  return p;
}

// Degree-contrast pair: node 0 has degree 100 on both sides, node 1 degree 2.
// Five pairs (10..14) are registered; node 0 neighbors all five mapped nodes,
// node 1 only the overlapping two (13, 14). Mirrored on the target side.
struct DegreeContrastPair {
  Graph src;
  Graph tar;
  Mapping mu;
};

inline DegreeContrastPair degree_contrast_pair() {
  std::vector<Edge> edges;
  for (NodeId m = 10; m <= 14; ++m) edges.push_back({0, m});
  edges.push_back({1, 13});
  edges.push_back({1, 14});
  for (NodeId filler = 100; filler < 195; ++filler) edges.push_back({0, filler});

  DegreeContrastPair p;
  p.src = Graph::from_edges(edges);
  p.tar = Graph::from_edges(edges);
  for (NodeId m = 10; m <= 14; ++m) p.mu.register_pair(m, m);
  return p;
}

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i)
    edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(i + 1)});
  return Graph::from_edges(std::move(edges));
}

inline Graph star_graph(std::size_t leaves) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i <= leaves; ++i) edges.push_back({0, static_cast<NodeId>(i)});
  return Graph::from_edges(std::move(edges));
}

inline Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j)
      edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
  }
  return Graph::from_edges(std::move(edges));
}

inline Graph cycle_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>((i + 1) % n)});
  return Graph::from_edges(std::move(edges));
}

}  // namespace fixtures
