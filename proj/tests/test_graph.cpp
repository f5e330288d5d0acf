#include <catch2/catch.hpp>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "reident/generate.hpp"
#include "reident/graph.hpp"

using namespace reident;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path, std::ios::trunc);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("load_edge_list builds a symmetric simple graph") {
  const Graph g = Graph::load_edge_list(write_temp("basic.edges", "0 1\n1 2\n"));
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.has_edge(1, 0));
  CHECK(g.has_edge(1, 2));
}

TEST_CASE("load_edge_list collapses duplicate and reversed edges") {
  const Graph g = Graph::load_edge_list(write_temp("dup.edges", "1 2\n2 1\n"));
  CHECK(g.node_count() == 2);
  CHECK(g.edge_count() == 1);
}

TEST_CASE("load_edge_list drops self-loops and comment lines") {
  const Graph g = Graph::load_edge_list(write_temp("loop.edges", "# comment\n5 5\n5 6\n"));
  CHECK(g.node_ids() == std::vector<NodeId>{5, 6});
  CHECK(g.edge_count() == 1);
}

TEST_CASE("load_edge_list ignores extra tokens and tolerates blank lines") {
  const Graph g = Graph::load_edge_list(write_temp("extra.edges", "0 1 17\n\n  \n2 3 x\n"));
  CHECK(g.edge_count() == 2);
}

TEST_CASE("load_edge_list reports the offending line") {
  const auto path = write_temp("bad.edges", "0 1\nnot numbers\n");
  CHECK_THROWS_WITH(Graph::load_edge_list(path), Catch::Contains("line 2"));
  const auto neg = write_temp("neg.edges", "0 1\n2 -3\n");
  CHECK_THROWS_WITH(Graph::load_edge_list(neg), Catch::Contains("line 2"));
  CHECK_THROWS_AS(Graph::load_edge_list("/nonexistent/file.edges"), std::runtime_error);
}

TEST_CASE("neighbors and degree") {
  const Graph path = fixtures::path_graph(3);
  CHECK(path.neighbors(1) == std::vector<NodeId>{0, 2});
  CHECK(path.degree(1) == 2);

  const Graph star = fixtures::star_graph(3);
  CHECK(star.neighbors(0) == std::vector<NodeId>{1, 2, 3});
  CHECK(star.degree(0) == 3);
  CHECK(star.degree(1) == 1);

  const Graph with_isolated = Graph::from_edges({{0, 1}}, {7});
  CHECK(with_isolated.neighbors(7).empty());
  CHECK(with_isolated.degree(7) == 0);

  CHECK_THROWS_AS(path.neighbors(99), std::out_of_range);
  CHECK_THROWS_AS(path.degree(99), std::out_of_range);
}

TEST_CASE("top_degree_nodes orders by degree then id") {
  const Graph star = fixtures::star_graph(3);
  CHECK(star.top_degree_nodes(1) == std::vector<NodeId>{0});

  const Graph path = fixtures::path_graph(3);
  CHECK(path.top_degree_nodes(2) == std::vector<NodeId>{1, 0});
  CHECK(path.top_degree_nodes(3) == std::vector<NodeId>{1, 0, 2});

  CHECK_THROWS_AS(path.top_degree_nodes(0), std::invalid_argument);
  CHECK_THROWS_AS(path.top_degree_nodes(4), std::invalid_argument);
}

TEST_CASE("top_degree_nodes is deterministic across loads") {
  const auto path = write_temp("det.edges", "3 1\n1 2\n2 3\n4 1\n9 2\n");
  const Graph a = Graph::load_edge_list(path);
  const Graph b = Graph::load_edge_list(path);
  CHECK(a.top_degree_nodes(5) == b.top_degree_nodes(5));
}

TEST_CASE("adjacency symmetry holds on generated graphs") {
  const Graph g = erdos_renyi_gnp(120, 0.05, 42);
  for (const NodeId u : g.node_ids()) {
    for (const NodeId v : g.neighbors(u)) {
      REQUIRE(g.has_edge(v, u));
      REQUIRE(u != v);
    }
  }
  std::size_t degree_sum = 0;
  for (const NodeId u : g.node_ids()) degree_sum += g.degree(u);
  CHECK(degree_sum == 2 * g.edge_count());
}

TEST_CASE("edge list round-trips through save and load") {
  const Graph g = barabasi_albert(200, 3, 7);
  const auto path = std::filesystem::temp_directory_path() / "roundtrip.edges";
  save_edge_list(g, path);
  CHECK(Graph::load_edge_list(path) == g);
}

TEST_CASE("node list sidecar preserves isolated nodes") {
  const Graph g = Graph::from_edges({{0, 1}, {2, 3}}, {42, 99});
  const auto edges = std::filesystem::temp_directory_path() / "sidecar.edges";
  const auto nodes = std::filesystem::temp_directory_path() / "sidecar.nodes";
  save_edge_list(g, edges);
  save_node_list(g, nodes);
  const Graph back = Graph::load_with_nodes(edges, nodes);
  CHECK(back == g);
  CHECK(back.contains(42));
  CHECK(back.degree(99) == 0);
}
