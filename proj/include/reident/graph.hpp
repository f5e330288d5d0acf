#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace reident {

using NodeId = std::uint64_t;
using Edge = std::pair<NodeId, NodeId>;

namespace detail {

inline bool parse_node_id(std::string_view token, NodeId& out) {
  if (token.empty()) return false;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

inline Edge normalized_edge(NodeId u, NodeId v) {
  return u < v ? Edge{u, v} : Edge{v, u};
}

}  // namespace detail

// Immutable undirected simple graph. Node ids are arbitrary non-negative
// integers preserved from the input; the dense index used internally never
// appears in the interface. Safe for unlimited concurrent readers once built.
class Graph {
 public:
  Graph() = default;

  // Builds a graph from an edge collection plus optional extra (possibly
  // isolated) nodes. Self-loops are dropped, duplicates and reversed
  // duplicates collapse into one undirected edge.
  static Graph from_edges(std::vector<Edge> edges, std::vector<NodeId> extra_nodes = {}) {
    std::erase_if(edges, [](const Edge& e) { return e.first == e.second; });
    for (Edge& e : edges) e = detail::normalized_edge(e.first, e.second);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    Graph g;
    g.nodes_ = std::move(extra_nodes);
    g.nodes_.reserve(g.nodes_.size() + 2 * edges.size());
    for (const Edge& e : edges) {
      g.nodes_.push_back(e.first);
      g.nodes_.push_back(e.second);
    }
    std::sort(g.nodes_.begin(), g.nodes_.end());
    g.nodes_.erase(std::unique(g.nodes_.begin(), g.nodes_.end()), g.nodes_.end());

    g.index_.reserve(g.nodes_.size());
    for (std::size_t i = 0; i < g.nodes_.size(); ++i) g.index_.emplace(g.nodes_[i], i);

    g.adj_.resize(g.nodes_.size());
    for (const Edge& e : edges) {
      g.adj_[g.index_.at(e.first)].push_back(e.second);
      g.adj_[g.index_.at(e.second)].push_back(e.first);
    }
    for (auto& nbrs : g.adj_) {
      std::sort(nbrs.begin(), nbrs.end());
      nbrs.shrink_to_fit();
    }
    g.edge_count_ = edges.size();
    return g;
  }

  // SNAP-style edge list: one edge per line, two whitespace-separated decimal
  // integers, '#' lines ignored. Directed input is symmetrized; self-loops
  // and duplicates are dropped.
  static Graph load_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list: " + path.string());
    std::vector<Edge> edges;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::size_t start = line.find_first_not_of(" \t\r");
      if (start == std::string::npos || line[start] == '#') continue;
      std::string_view rest = std::string_view(line).substr(start);
      NodeId ids[2];
      for (int i = 0; i < 2; ++i) {
        const std::size_t token_end = rest.find_first_of(" \t\r");
        const std::string_view token = rest.substr(0, token_end);
        if (!detail::parse_node_id(token, ids[i]))
          throw std::runtime_error("malformed edge list " + path.string() + ": line " +
                                   std::to_string(line_no));
        rest = token_end == std::string_view::npos ? std::string_view{}
                                                   : rest.substr(token_end);
        const std::size_t next = rest.find_first_not_of(" \t\r");
        rest = next == std::string_view::npos ? std::string_view{} : rest.substr(next);
      }
      edges.emplace_back(ids[0], ids[1]);
    }
    if (in.bad()) throw std::runtime_error("I/O error reading " + path.string());
    return from_edges(std::move(edges));
  }

  // Edge list plus a node-list sidecar; the sidecar carries nodes that an
  // edge list alone cannot represent (isolated ones).
  static Graph load_with_nodes(const std::filesystem::path& edges_path,
                               const std::filesystem::path& nodes_path) {
    Graph edge_part = load_edge_list(edges_path);
    std::ifstream in(nodes_path);
    if (!in) throw std::runtime_error("cannot open node list: " + nodes_path.string());
    std::vector<NodeId> nodes;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::size_t start = line.find_first_not_of(" \t\r");
      if (start == std::string::npos || line[start] == '#') continue;
      const std::size_t end = line.find_first_of(" \t\r", start);
      NodeId id;
      if (!detail::parse_node_id(
              std::string_view(line).substr(start, end == std::string::npos ? end : end - start),
              id))
        throw std::runtime_error("malformed node list " + nodes_path.string() + ": line " +
                                 std::to_string(line_no));
      nodes.push_back(id);
    }
    std::vector<Edge> edges;
    edges.reserve(edge_part.edge_count());
    edge_part.for_each_edge([&](NodeId u, NodeId v) { edges.emplace_back(u, v); });
    return from_edges(std::move(edges), std::move(nodes));
  }

  const std::vector<NodeId>& node_ids() const { return nodes_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  bool empty() const { return nodes_.empty(); }

  bool contains(NodeId v) const { return index_.contains(v); }

  const std::vector<NodeId>& neighbors(NodeId v) const { return adj_[slot(v)]; }

  std::size_t degree(NodeId v) const { return adj_[slot(v)].size(); }

  bool has_edge(NodeId u, NodeId v) const {
    const auto iu = index_.find(u);
    const auto iv = index_.find(v);
    if (iu == index_.end() || iv == index_.end()) return false;
    const auto& a = adj_[iu->second];
    const auto& b = adj_[iv->second];
    const auto& probe = a.size() <= b.size() ? a : b;
    const NodeId needle = a.size() <= b.size() ? v : u;
    return std::binary_search(probe.begin(), probe.end(), needle);
  }

  // k nodes by descending degree, ties broken by ascending id.
  std::vector<NodeId> top_degree_nodes(std::size_t k) const {
    if (k < 1 || k > nodes_.size())
      throw std::invalid_argument("top_degree_nodes: k out of range [1, " +
                                  std::to_string(nodes_.size()) + "]");
    std::vector<NodeId> order = nodes_;
    std::stable_sort(order.begin(), order.end(), [this](NodeId a, NodeId b) {
      const std::size_t da = adj_[index_.at(a)].size();
      const std::size_t db = adj_[index_.at(b)].size();
      return da != db ? da > db : a < b;
    });
    order.resize(k);
    return order;
  }

  // Visits each undirected edge once with u < v, in ascending (u, v) order.
  template <typename Fn>
  void for_each_edge(Fn&& fn) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const NodeId u = nodes_[i];
      for (const NodeId v : adj_[i]) {
        if (u < v) fn(u, v);
      }
    }
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    if (a.nodes_ != b.nodes_) return false;
    for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
      if (a.adj_[i] != b.adj_[b.index_.at(a.nodes_[i])]) return false;
    }
    return true;
  }

 private:
  std::size_t slot(NodeId v) const {
    const auto it = index_.find(v);
    if (it == index_.end())
      throw std::out_of_range("unknown node id " + std::to_string(v));
    return it->second;
  }

  std::vector<NodeId> nodes_;                     // ascending
  std::unordered_map<NodeId, std::size_t> index_; // id -> dense slot, internal only
  std::vector<std::vector<NodeId>> adj_;          // by slot, each ascending
  std::size_t edge_count_ = 0;
};

// Writes "u<TAB>v" lines in ascending order, preceded by a size comment.
inline void save_edge_list(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write edge list: " + path.string());
  out << "# nodes " << g.node_count() << " edges " << g.edge_count() << "\n";
  g.for_each_edge([&](NodeId u, NodeId v) { out << u << '\t' << v << '\n'; });
  if (!out) throw std::runtime_error("I/O error writing " + path.string());
}

// One node id per line, ascending. Pairs with save_edge_list so graphs with
// isolated nodes round-trip exactly.
inline void save_node_list(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write node list: " + path.string());
  for (const NodeId v : g.node_ids()) out << v << '\n';
  if (!out) throw std::runtime_error("I/O error writing " + path.string());
}

}  // namespace reident
