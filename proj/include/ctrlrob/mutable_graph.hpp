#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "graph.hpp"

namespace ctrlrob::detail {

inline std::uint64_t edge_key(NodeId u, NodeId v) {
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

/// Adjacency lists plus an edge hash set; supports O(degree) edge moves.
class MutableDigraph {
 public:
  explicit MutableDigraph(const DirectedGraph& g)
      : out_(g.node_count()), in_(g.node_count()) {
    keys_.reserve(g.edge_count() * 2);
    for (const auto& e : g.edges()) add(e.from, e.to);
  }

  explicit MutableDigraph(std::size_t n) : out_(n), in_(n) {}

  std::size_t node_count() const noexcept { return out_.size(); }
  std::size_t edge_count() const noexcept { return keys_.size(); }
  const std::vector<NodeId>& out(NodeId v) const { return out_[v]; }
  const std::vector<NodeId>& in(NodeId v) const { return in_[v]; }
  bool has(NodeId u, NodeId v) const { return keys_.count(edge_key(u, v)) != 0; }

  void add(NodeId u, NodeId v) {
    keys_.insert(edge_key(u, v));
    out_[u].push_back(v);
    in_[v].push_back(u);
  }

  void erase(NodeId u, NodeId v) {
    keys_.erase(edge_key(u, v));
    erase_one(out_[u], v);
    erase_one(in_[v], u);
  }

  DirectedGraph freeze() const {
    std::vector<Edge> edges;
    edges.reserve(keys_.size());
    for (NodeId u = 0; u < out_.size(); ++u)
      for (NodeId v : out_[u]) edges.push_back({u, v});
    return DirectedGraph(out_.size(), std::move(edges));
  }

 private:
  static void erase_one(std::vector<NodeId>& xs, NodeId x) {
    auto it = std::find(xs.begin(), xs.end(), x);
    *it = xs.back();
    xs.pop_back();
  }

  std::vector<std::vector<NodeId>> out_;
  std::vector<std::vector<NodeId>> in_;
  std::unordered_set<std::uint64_t> keys_;
};

}  // namespace ctrlrob::detail
