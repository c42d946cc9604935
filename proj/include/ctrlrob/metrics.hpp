#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "graph.hpp"
#include "parallel.hpp"
#include "random.hpp"

namespace ctrlrob {

struct Heterogeneity {
  double value{0.0};
  DegreeSide side{DegreeSide::out};
};

namespace detail {

inline const std::vector<std::size_t>& side_of(const DegreeVector& d, DegreeSide side) {
  return side == DegreeSide::in ? d.in : d.out;
}

/// <k^2>/<k>^2 from running sums over `count` nodes.
inline double heterogeneity_from_sums(double sum, double sum_sq, double count) {
  return (sum_sq / count) / ((sum / count) * (sum / count));
}

/// All N nodes in the order a random attack with this rng would remove them.
inline std::vector<NodeId> random_removal_order(std::size_t n, Rng& rng) {
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

}  // namespace detail

/// H = <k^2>/<k>^2 over all nodes; needs at least one edge.
inline Heterogeneity heterogeneity(const DirectedGraph& g, DegreeSide side) {
  if (g.edge_count() == 0) throw std::domain_error("heterogeneity: graph has no edges");
  const auto d = degrees(g);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t k : detail::side_of(d, side)) {
    sum += static_cast<double>(k);
    sum_sq += static_cast<double>(k) * static_cast<double>(k);
  }
  return {detail::heterogeneity_from_sums(sum, sum_sq, static_cast<double>(g.node_count())), side};
}

/**
 * Mean H of the survivors after i = 0..N-1 random removals.
 * A step where every run left an edgeless survivor graph is undefined (NaN,
 * defined_runs = 0); otherwise the mean is over runs where H exists.
 */
struct HeterogeneityCurve {
  DegreeSide side{DegreeSide::out};
  std::vector<double> mean;                // index i = removals so far
  std::vector<std::size_t> defined_runs;

  bool defined(std::size_t step) const { return defined_runs.at(step) > 0; }
};

inline HeterogeneityCurve heterogeneity_curve(const DirectedGraph& g, std::uint64_t seed, std::size_t runs,
                                              DegreeSide side, std::size_t workers = 1) {
  if (runs == 0) throw std::invalid_argument("heterogeneity_curve: runs must be positive");
  const std::size_t n = g.node_count();
  if (n == 0) throw std::invalid_argument("heterogeneity_curve: graph has no nodes");

  constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::vector<double>> per_run(runs);
  parallel_for(runs, workers, [&](std::size_t k) {
    auto rng = stream_rng(seed, k);
    const auto order = detail::random_removal_order(n, rng);
    auto d = degrees(g);
    std::vector<char> alive(n, 1);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t v : detail::side_of(d, side)) {
      sum += static_cast<double>(v);
      sum_sq += static_cast<double>(v) * static_cast<double>(v);
    }
    auto& track = side == DegreeSide::in ? d.in : d.out;
    auto decrement = [&](NodeId w) {
      const double before = static_cast<double>(track[w]);
      --track[w];
      sum -= 1.0;
      sum_sq -= 2.0 * before - 1.0;
    };
    auto& values = per_run[k];
    values.reserve(n);
    auto record = [&](std::size_t live) {
      values.push_back(sum > 0.0 ? detail::heterogeneity_from_sums(sum, sum_sq, static_cast<double>(live))
                                 : kUndefined);
    };
    record(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const NodeId v = order[i];
      alive[v] = 0;
      const double own = static_cast<double>(track[v]);
      sum -= own;
      sum_sq -= own * own;
      track[v] = 0;
      // Edges v->w lower w's in-degree; edges u->v lower u's out-degree.
      if (side == DegreeSide::in) {
        for (NodeId w : g.out_neighbors(v))
          if (alive[w]) decrement(w);
      } else {
        for (NodeId u : g.in_neighbors(v))
          if (alive[u]) decrement(u);
      }
      record(n - i - 1);
    }
  });

  HeterogeneityCurve out{side, std::vector<double>(n, 0.0), std::vector<std::size_t>(n, 0)};
  for (const auto& values : per_run)
    for (std::size_t i = 0; i < n; ++i)
      if (!std::isnan(values[i])) {
        out.mean[i] += values[i];
        ++out.defined_runs[i];
      }
  for (std::size_t i = 0; i < n; ++i)
    out.mean[i] = out.defined_runs[i] ? out.mean[i] / static_cast<double>(out.defined_runs[i]) : kUndefined;
  return out;
}

/**
 * Smallest number of removals, following `order`, after which the survivors
 * split into more than one weak component. A single survivor counts as
 * connected; 0 if g is already disconnected, N-1 if it never splits.
 */
inline std::size_t removals_to_disconnect(const DirectedGraph& g, std::span<const NodeId> order) {
  const std::size_t n = g.node_count();
  if (n == 0) throw std::invalid_argument("removals_to_disconnect: graph has no nodes");
  if (order.size() != n && order.size() + 1 != n)
    throw std::invalid_argument("removals_to_disconnect: order must list N or N-1 nodes");
  std::vector<NodeId> full(order.begin(), order.end());
  std::vector<char> listed(n, 0);
  for (NodeId v : full) {
    if (v >= n || listed[v]) throw std::invalid_argument("removals_to_disconnect: invalid order");
    listed[v] = 1;
  }
  if (full.size() + 1 == n)
    for (NodeId v = 0; v < n; ++v)
      if (!listed[v]) full.push_back(v);

  // Rebuild in reverse: after adding full[j..n-1] the survivors are those left after j removals.
  detail::UnionFind uf(n);
  std::vector<char> present(n, 0);
  std::vector<char> split(n, 0);  // split[j]: survivors after j removals are disconnected
  std::size_t components = 0;
  for (std::size_t j = n; j-- > 0;) {
    const NodeId v = full[j];
    present[v] = 1;
    ++components;
    for (NodeId w : g.out_neighbors(v))
      if (present[w] && uf.unite(v, w)) --components;
    for (NodeId u : g.in_neighbors(v))
      if (present[u] && uf.unite(u, v)) --components;
    split[j] = components > 1 ? 1 : 0;
  }
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (split[i]) return i;
  return n - 1;
}

/// Five-number summary with Tukey whiskers (1.5 IQR) and linear-interpolated quartiles.
struct BoxplotSummary {
  double min{0.0};  // lowest value inside the lower fence
  double q1{0.0};
  double median{0.0};
  double q3{0.0};
  double max{0.0};  // highest value inside the upper fence
  std::vector<double> outliers;
};

namespace detail {

/// Quantile of sorted data, linear interpolation between order statistics.
inline double quantile_sorted(std::span<const double> sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace detail

inline BoxplotSummary boxplot(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("boxplot of an empty sample");
  std::sort(values.begin(), values.end());
  BoxplotSummary b;
  b.q1 = detail::quantile_sorted(values, 0.25);
  b.median = detail::quantile_sorted(values, 0.5);
  b.q3 = detail::quantile_sorted(values, 0.75);
  const double iqr = b.q3 - b.q1;
  const double low_fence = b.q1 - 1.5 * iqr;
  const double high_fence = b.q3 + 1.5 * iqr;
  b.min = b.q1;
  b.max = b.q3;
  for (double x : values) {
    if (x < low_fence || x > high_fence) {
      b.outliers.push_back(x);
      continue;
    }
    b.min = std::min(b.min, x);
    b.max = std::max(b.max, x);
  }
  return b;
}

struct DisconnectionResult {
  std::vector<std::size_t> removals;  // per run
  std::vector<double> thresholds;     // per run, P_N = removals / N
  BoxplotSummary summary;
};

/// P_N over `runs` random removal orders; run k uses stream (seed, k).
inline DisconnectionResult disconnection_threshold(const DirectedGraph& g, std::uint64_t seed, std::size_t runs,
                                                   std::size_t workers = 1) {
  if (runs == 0) throw std::invalid_argument("disconnection_threshold: runs must be positive");
  const std::size_t n = g.node_count();
  if (n == 0) throw std::invalid_argument("disconnection_threshold: graph has no nodes");
  DisconnectionResult r;
  r.removals.assign(runs, 0);
  parallel_for(runs, workers, [&](std::size_t k) {
    auto rng = stream_rng(seed, k);
    r.removals[k] = removals_to_disconnect(g, detail::random_removal_order(n, rng));
  });
  r.thresholds.reserve(runs);
  for (std::size_t x : r.removals) r.thresholds.push_back(static_cast<double>(x) / static_cast<double>(n));
  r.summary = boxplot(r.thresholds);
  return r;
}

/// degree -> number of nodes with that degree.
using DegreeHistogram = std::map<std::size_t, std::size_t>;

inline DegreeHistogram degree_distribution(const DirectedGraph& g, DegreeSide side) {
  const auto d = degrees(g);
  DegreeHistogram h;
  for (std::size_t k : detail::side_of(d, side)) ++h[k];
  return h;
}

struct FeatureBundle {
  double average_degree{0.0};
  double average_path_length{0.0};  // +inf when some ordered pair is unreachable
  double average_betweenness{0.0};
  double clustering{0.0};
  double heterogeneity_out{0.0};    // NaN for an edgeless graph
  double heterogeneity_in{0.0};
};

/// Directed unit-weight betweenness (Brandes), endpoints excluded, unnormalized.
inline std::vector<double> betweenness(const DirectedGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> bc(n, 0.0);
  std::vector<std::size_t> order;
  std::vector<std::vector<NodeId>> preds(n);
  std::vector<double> sigma(n);
  std::vector<double> delta(n);
  std::vector<std::int64_t> dist(n);
  for (NodeId s = 0; s < n; ++s) {
    order.clear();
    for (auto& p : preds) p.clear();
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    sigma[s] = 1.0;
    dist[s] = 0;
    std::queue<NodeId> queue;
    queue.push(s);
    while (!queue.empty()) {
      const NodeId v = queue.front();
      queue.pop();
      order.push_back(v);
      for (NodeId w : g.out_neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const NodeId w = static_cast<NodeId>(*it);
      for (NodeId v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) bc[w] += delta[w];
    }
  }
  return bc;
}

/// Mean directed shortest-path length over ordered pairs; +inf if any pair is unreachable.
inline double average_path_length(const DirectedGraph& g) {
  const std::size_t n = g.node_count();
  if (n < 2) throw std::invalid_argument("average_path_length: need at least 2 nodes");
  double total = 0.0;
  std::vector<std::int64_t> dist(n);
  for (NodeId s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    std::queue<NodeId> queue;
    queue.push(s);
    std::size_t reached = 1;
    while (!queue.empty()) {
      const NodeId v = queue.front();
      queue.pop();
      for (NodeId w : g.out_neighbors(v))
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          total += static_cast<double>(dist[w]);
          ++reached;
          queue.push(w);
        }
    }
    if (reached < n) return std::numeric_limits<double>::infinity();
  }
  return total / (static_cast<double>(n) * static_cast<double>(n - 1));
}

/// Global transitivity of the undirected shadow: 3 * triangles / connected triples (0 without triples).
inline double clustering_coefficient(const DirectedGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<NodeId>> adj(n);
  for (const auto& e : g.edges()) {
    adj[e.from].push_back(e.to);
    adj[e.to].push_back(e.from);
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  double closed = 0.0;  // neighbour pairs of some v that are adjacent
  double triples = 0.0;
  for (NodeId v = 0; v < n; ++v) {
    const double d = static_cast<double>(adj[v].size());
    triples += d * (d - 1.0) / 2.0;
    for (std::size_t a = 0; a < adj[v].size(); ++a)
      for (std::size_t b = a + 1; b < adj[v].size(); ++b)
        if (std::binary_search(adj[adj[v][a]].begin(), adj[adj[v][a]].end(), adj[v][b])) closed += 1.0;
  }
  return triples > 0.0 ? closed / triples : 0.0;
}

inline FeatureBundle basic_features(const DirectedGraph& g) {
  if (g.node_count() < 2) throw std::invalid_argument("basic_features: need at least 2 nodes");
  FeatureBundle f;
  const double n = static_cast<double>(g.node_count());
  f.average_degree = static_cast<double>(g.edge_count()) / n;
  f.average_path_length = average_path_length(g);
  const auto bc = betweenness(g);
  f.average_betweenness = std::accumulate(bc.begin(), bc.end(), 0.0) / n;
  f.clustering = clustering_coefficient(g);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  f.heterogeneity_out = g.edge_count() ? heterogeneity(g, DegreeSide::out).value : nan;
  f.heterogeneity_in = g.edge_count() ? heterogeneity(g, DegreeSide::in).value : nan;
  return f;
}

}  // namespace ctrlrob
