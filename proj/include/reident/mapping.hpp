#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "reident/graph.hpp"

namespace reident {

namespace detail {

// Shared TSV pair format: "src_id<TAB>tar_id" per line ('#' lines ignored).
inline std::vector<Edge> load_pairs_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open pair file: " + path.string());
  std::vector<Edge> pairs;
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
      if (!parse_node_id(rest.substr(0, token_end), ids[i]))
        throw std::runtime_error("malformed pair file " + path.string() + ": line " +
                                 std::to_string(line_no));
      rest = token_end == std::string_view::npos ? std::string_view{} : rest.substr(token_end);
      const std::size_t next = rest.find_first_not_of(" \t\r");
      rest = next == std::string_view::npos ? std::string_view{} : rest.substr(next);
    }
    pairs.emplace_back(ids[0], ids[1]);
  }
  if (in.bad()) throw std::runtime_error("I/O error reading " + path.string());
  return pairs;
}

inline void save_pairs_tsv(const std::vector<Edge>& pairs, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write pair file: " + path.string());
  for (const Edge& p : pairs) out << p.first << '\t' << p.second << '\n';
  if (!out) throw std::runtime_error("I/O error writing " + path.string());
}

}  // namespace detail

// Read-only lens over one direction of a mapping; the scorer works through
// this so forward and reverse passes share one code path.
struct MapView {
  const std::unordered_map<NodeId, NodeId>* forward = nullptr;
  const std::unordered_map<NodeId, NodeId>* inverse = nullptr;

  const NodeId* image_of(NodeId v) const {
    const auto it = forward->find(v);
    return it == forward->end() ? nullptr : &it->second;
  }
  bool maps_target(NodeId v) const { return inverse->contains(v); }
  std::size_t size() const { return forward->size(); }
};

// Injective partial mapping from source nodes to target nodes with inverse
// lookup. Forward and inverse stay mirror images after every operation.
class Mapping {
 public:
  Mapping() = default;

  std::size_t size() const { return forward_.size(); }
  bool empty() const { return forward_.empty(); }

  bool has_source(NodeId s) const { return forward_.contains(s); }
  bool has_target(NodeId t) const { return inverse_.contains(t); }

  std::optional<NodeId> target_of(NodeId s) const {
    const auto it = forward_.find(s);
    if (it == forward_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<NodeId> source_of(NodeId t) const {
    const auto it = inverse_.find(t);
    if (it == inverse_.end()) return std::nullopt;
    return it->second;
  }

  // Registers s -> t. An existing pair containing s is dropped first; t must
  // be free at registration time.
  void register_pair(NodeId s, NodeId t) {
    if (const auto it = inverse_.find(t); it != inverse_.end())
      throw std::logic_error("Mapping::register_pair: target " + std::to_string(t) +
                             " already mapped from " + std::to_string(it->second));
    if (const auto it = forward_.find(s); it != forward_.end()) {
      inverse_.erase(it->second);
      it->second = t;
    } else {
      forward_.emplace(s, t);
    }
    inverse_.emplace(t, s);
  }

  bool erase_source(NodeId s) {
    const auto it = forward_.find(s);
    if (it == forward_.end()) return false;
    inverse_.erase(it->second);
    forward_.erase(it);
    return true;
  }

  MapView forward_view() const { return {&forward_, &inverse_}; }
  MapView inverse_view() const { return {&inverse_, &forward_}; }

  const std::unordered_map<NodeId, NodeId>& forward() const { return forward_; }
  const std::unordered_map<NodeId, NodeId>& inverse() const { return inverse_; }

  std::vector<Edge> sorted_pairs() const {
    std::vector<Edge> pairs(forward_.begin(), forward_.end());
    std::sort(pairs.begin(), pairs.end());
    return pairs;
  }

  // Audit check: inverse is the exact inverse of forward.
  bool consistent() const {
    if (forward_.size() != inverse_.size()) return false;
    for (const auto& [s, t] : forward_) {
      const auto it = inverse_.find(t);
      if (it == inverse_.end() || it->second != s) return false;
    }
    return true;
  }

  static Mapping from_pairs(const std::vector<Edge>& pairs) {
    Mapping m;
    for (const Edge& p : pairs) {
      if (m.has_source(p.first))
        throw std::invalid_argument("mapping pairs not injective: duplicate source " +
                                    std::to_string(p.first));
      m.register_pair(p.first, p.second);
    }
    return m;
  }

  static Mapping load_tsv(const std::filesystem::path& path) {
    return from_pairs(detail::load_pairs_tsv(path));
  }
  void save_tsv(const std::filesystem::path& path) const {
    detail::save_pairs_tsv(sorted_pairs(), path);
  }

 private:
  std::unordered_map<NodeId, NodeId> forward_;
  std::unordered_map<NodeId, NodeId> inverse_;
};

// The correct correspondence between mutually existing nodes of a graph pair.
// Immutable bijection; pairs are kept sorted by source id.
class GroundTruth {
 public:
  GroundTruth() = default;

  static GroundTruth from_pairs(std::vector<Edge> pairs) {
    std::sort(pairs.begin(), pairs.end());
    GroundTruth gt;
    gt.pairs_ = std::move(pairs);
    gt.forward_.reserve(gt.pairs_.size());
    gt.inverse_.reserve(gt.pairs_.size());
    for (const Edge& p : gt.pairs_) {
      if (!gt.forward_.emplace(p.first, p.second).second)
        throw std::invalid_argument("ground truth: duplicate source " + std::to_string(p.first));
      if (!gt.inverse_.emplace(p.second, p.first).second)
        throw std::invalid_argument("ground truth: duplicate target " + std::to_string(p.second));
    }
    return gt;
  }

  // Shared-id correspondence over a common node set.
  static GroundTruth identity(const std::vector<NodeId>& common) {
    std::vector<Edge> pairs;
    pairs.reserve(common.size());
    for (const NodeId v : common) pairs.emplace_back(v, v);
    return from_pairs(std::move(pairs));
  }

  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  const std::vector<Edge>& pairs() const { return pairs_; }

  bool pairs_source(NodeId s) const { return forward_.contains(s); }
  bool pairs_target(NodeId t) const { return inverse_.contains(t); }

  std::optional<NodeId> target_of(NodeId s) const {
    const auto it = forward_.find(s);
    if (it == forward_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<NodeId> source_of(NodeId t) const {
    const auto it = inverse_.find(t);
    if (it == inverse_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<NodeId> source_nodes() const {
    std::vector<NodeId> out;
    out.reserve(pairs_.size());
    for (const Edge& p : pairs_) out.push_back(p.first);
    return out;
  }

  static GroundTruth load_tsv(const std::filesystem::path& path) {
    return from_pairs(detail::load_pairs_tsv(path));
  }
  void save_tsv(const std::filesystem::path& path) const {
    detail::save_pairs_tsv(pairs_, path);
  }

 private:
  std::vector<Edge> pairs_;  // sorted by source
  std::unordered_map<NodeId, NodeId> forward_;
  std::unordered_map<NodeId, NodeId> inverse_;
};

}  // namespace reident
