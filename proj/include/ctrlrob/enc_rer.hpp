#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "mutable_graph.hpp"
#include "random.hpp"

namespace ctrlrob {

/// Degree band [floor(M/N), ceil(M/N)] that every in- and out-degree must meet.
struct EncBounds {
  std::size_t lower{0};
  std::size_t upper{0};

  bool contains(std::size_t k) const noexcept { return lower <= k && k <= upper; }
};

inline EncBounds enc_bounds(std::size_t n, std::size_t m) {
  if (n == 0) throw std::invalid_argument("enc_bounds: node count must be positive");
  return {m / n, (m + n - 1) / n};
}

struct EncViolation {
  NodeId node{0};
  DegreeSide side{DegreeSide::out};
  std::size_t degree{0};
  std::size_t bound{0};  // the bound that is crossed
  bool below{false};     // degree < lower (otherwise degree > upper)
};

struct EncReport {
  EncBounds bounds;
  std::vector<EncViolation> violations;

  bool satisfied() const noexcept { return violations.empty(); }
  std::size_t violation_count() const noexcept { return violations.size(); }
};

namespace detail {

inline std::size_t band_distance(EncBounds b, std::size_t k) {
  if (k < b.lower) return b.lower - k;
  if (k > b.upper) return k - b.upper;
  return 0;
}

}  // namespace detail

inline EncReport check_enc(const DirectedGraph& g) {
  EncReport r{enc_bounds(g.node_count(), g.edge_count()), {}};
  const auto d = degrees(g);
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    // out side first, then in, node by node
    std::array<std::pair<DegreeSide, std::size_t>, 2> sides{{{DegreeSide::out, d.out[v]},
                                                             {DegreeSide::in, d.in[v]}}};
    for (auto [side, k] : sides) {
      if (k < r.bounds.lower)
        r.violations.push_back({static_cast<NodeId>(v), side, k, r.bounds.lower, true});
      else if (k > r.bounds.upper)
        r.violations.push_back({static_cast<NodeId>(v), side, k, r.bounds.upper, false});
    }
  }
  return r;
}

/// Total number of degree units outside the band, over all nodes and both sides.
inline std::size_t violation_mass(const DirectedGraph& g) {
  const auto b = enc_bounds(g.node_count(), g.edge_count());
  const auto d = degrees(g);
  std::size_t mass = 0;
  for (std::size_t v = 0; v < g.node_count(); ++v)
    mass += detail::band_distance(b, d.out[v]) + detail::band_distance(b, d.in[v]);
  return mass;
}

// ---------------------------------------------------------------------------
// Random edge rectification
// ---------------------------------------------------------------------------

/**
 * One rectification move. Rules:
 *  1  out-degree of `node` too low: take an out-edge (partner -> l), re-tail it to node -> l
 *  2  out-degree of `node` too high: re-tail one of its out-edges node -> j to partner -> j
 *  3  in-degree of `node` too low: take an in-edge (l -> partner), re-head it to l -> node
 *  4  in-degree of `node` too high: re-head one of its in-edges j -> node to j -> partner
 */
struct RerOperation {
  int rule{0};
  NodeId node{0};
  NodeId partner{0};
  Edge deleted;
  Edge added;
};

enum class RerTermination : std::uint8_t { enc_satisfied, budget_exhausted, stalled };

inline const char* to_string(RerTermination t) {
  switch (t) {
    case RerTermination::enc_satisfied: return "enc-satisfied";
    case RerTermination::budget_exhausted: return "budget-exhausted";
    case RerTermination::stalled: return "stalled";
  }
  return "?";
}

struct RerTrace {
  std::vector<RerOperation> operations;  // empty unless recording was requested
  std::size_t applied{0};
  RerTermination terminal{RerTermination::enc_satisfied};

  std::size_t operations_applied() const noexcept { return applied; }
};

/// Operation budget; "unlimited" is capped internally at 10^9.
struct RerBudget {
  static constexpr std::size_t kUnlimitedCap = 1'000'000'000;

  std::optional<std::size_t> limit;

  static RerBudget unlimited() { return {}; }
  static RerBudget of(std::size_t n) { return {n}; }

  bool is_unlimited() const noexcept { return !limit.has_value(); }
  std::size_t cap() const noexcept { return limit.value_or(kUnlimitedCap); }
  std::string to_string() const { return limit ? std::to_string(*limit) : "unlimited"; }

  static RerBudget parse(const std::string& s) {
    if (s == "unlimited" || s == "inf" || s == "Inf") return unlimited();
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != s.size() || s.front() == '-')
      throw std::invalid_argument("invalid RER budget '" + s + "' (non-negative integer or unlimited)");
    return of(static_cast<std::size_t>(v));
  }

  friend bool operator==(const RerBudget&, const RerBudget&) = default;
};

struct RerOptions {
  /// Resampling attempts before the legal moves are enumerated outright.
  std::size_t resample_limit{100};
  /// When no partner lies strictly outside the band (possible only when N does
  /// not divide M), accept partners at the far edge of the band instead.
  bool band_partners{true};
  bool record_operations{true};
};

/**
 * Applies rectification moves to a working copy of a graph.
 *
 * A step picks a violating (node, side) uniformly, then a partner uniformly
 * among the nodes on the opposite side of the band, then one of the relevant
 * edges uniformly; moves that would create a self-loop or a duplicate edge are
 * resampled. After `resample_limit` misses every legal move is enumerated and
 * one is drawn uniformly; if there is none the step reports a stall.
 */
class Rectifier {
 public:
  explicit Rectifier(const DirectedGraph& g, RerOptions options = {})
      : graph_(g), bounds_(enc_bounds(std::max<std::size_t>(1, g.node_count()), g.edge_count())),
        options_(options) {
    if (g.empty()) throw std::invalid_argument("Rectifier: graph has no nodes");
  }

  EncBounds bounds() const noexcept { return bounds_; }

  bool satisfied() const {
    for (NodeId v = 0; v < graph_.node_count(); ++v)
      if (!bounds_.contains(out_degree(v)) || !bounds_.contains(in_degree(v))) return false;
    return true;
  }

  /// One move; std::nullopt when stalled. Precondition: ENC not satisfied.
  std::optional<RerOperation> step(Rng& rng) {
    std::vector<Violator> violators;
    for (NodeId v = 0; v < graph_.node_count(); ++v) {
      if (out_degree(v) < bounds_.lower) violators.push_back({v, 1});
      else if (out_degree(v) > bounds_.upper) violators.push_back({v, 2});
      if (in_degree(v) < bounds_.lower) violators.push_back({v, 3});
      else if (in_degree(v) > bounds_.upper) violators.push_back({v, 4});
    }
    if (violators.empty()) throw std::logic_error("rer_step: graph already satisfies ENC");

    std::array<std::optional<std::vector<NodeId>>, 5> partner_cache;
    auto partners_for = [&](int rule) -> const std::vector<NodeId>& {
      auto& slot = partner_cache[static_cast<std::size_t>(rule)];
      if (!slot) slot = partners(rule);
      return *slot;
    };

    for (std::size_t attempt = 0; attempt < options_.resample_limit; ++attempt) {
      const Violator& pick = violators[uniform_index(rng, violators.size())];
      const auto& cands = partners_for(pick.rule);
      if (cands.empty()) continue;
      const NodeId partner = cands[uniform_index(rng, cands.size())];
      const auto& pool = edge_pool(pick.rule, pick.node, partner);
      if (pool.empty()) continue;
      const NodeId other = pool[uniform_index(rng, pool.size())];
      if (auto op = make_move(pick.rule, pick.node, partner, other)) return apply(*op);
    }

    // Enumerate every legal move and draw one uniformly.
    std::size_t legal = 0;
    for (const auto& vio : violators)
      for (NodeId partner : partners_for(vio.rule))
        for (NodeId other : edge_pool(vio.rule, vio.node, partner))
          if (make_move(vio.rule, vio.node, partner, other)) ++legal;
    if (legal == 0) return std::nullopt;
    std::size_t target = uniform_index(rng, legal);
    for (const auto& vio : violators)
      for (NodeId partner : partners_for(vio.rule))
        for (NodeId other : edge_pool(vio.rule, vio.node, partner))
          if (auto op = make_move(vio.rule, vio.node, partner, other)) {
            if (target == 0) return apply(*op);
            --target;
          }
    return std::nullopt;  // unreachable
  }

  DirectedGraph graph() const { return graph_.freeze(); }

 private:
  struct Violator {
    NodeId node;
    int rule;
  };

  std::size_t out_degree(NodeId v) const { return graph_.out(v).size(); }
  std::size_t in_degree(NodeId v) const { return graph_.in(v).size(); }

  std::vector<NodeId> partners(int rule) const {
    auto degree = [&](NodeId v) { return rule <= 2 ? out_degree(v) : in_degree(v); };
    // Rules 1 and 3 need donors above the band, rules 2 and 4 recipients below it.
    const bool donor = rule == 1 || rule == 3;
    std::vector<NodeId> strict;
    std::vector<NodeId> band;
    for (NodeId v = 0; v < graph_.node_count(); ++v) {
      const std::size_t k = degree(v);
      if (donor) {
        if (k > bounds_.upper) strict.push_back(v);
        else if (k > bounds_.lower) band.push_back(v);
      } else {
        if (k < bounds_.lower) strict.push_back(v);
        else if (k < bounds_.upper) band.push_back(v);
      }
    }
    if (!strict.empty() || !options_.band_partners) return strict;
    return band;
  }

  // Endpoints the moved edge can be chosen from.
  const std::vector<NodeId>& edge_pool(int rule, NodeId node, NodeId partner) const {
    switch (rule) {
      case 1: return graph_.out(partner);
      case 2: return graph_.out(node);
      case 3: return graph_.in(partner);
      default: return graph_.in(node);
    }
  }

  std::optional<RerOperation> make_move(int rule, NodeId node, NodeId partner, NodeId other) const {
    if (partner == node) return std::nullopt;
    Edge del;
    Edge add;
    switch (rule) {
      case 1: del = {partner, other}; add = {node, other}; break;
      case 2: del = {node, other}; add = {partner, other}; break;
      case 3: del = {other, partner}; add = {other, node}; break;
      default: del = {other, node}; add = {other, partner}; break;
    }
    if (add.from == add.to || graph_.has(add.from, add.to)) return std::nullopt;
    return RerOperation{rule, node, partner, del, add};
  }

  RerOperation apply(const RerOperation& op) {
    graph_.erase(op.deleted.from, op.deleted.to);
    graph_.add(op.added.from, op.added.to);
    return op;
  }

  detail::MutableDigraph graph_;
  EncBounds bounds_;
  RerOptions options_;
};

struct RerStepResult {
  DirectedGraph graph;
  RerOperation operation;
};

/// A single rectification move on g; throws if g already satisfies ENC or no move is legal.
inline RerStepResult rer_step(const DirectedGraph& g, Rng& rng, RerOptions options = {}) {
  Rectifier r(g, options);
  auto op = r.step(rng);
  if (!op) throw RectificationStalled("rer_step: no legal rectification move");
  return {r.graph(), *op};
}

struct RectifyResult {
  DirectedGraph graph;
  RerTrace trace;
};

/// Repeats rectification moves until ENC holds, the budget is spent, or no move is legal.
inline RectifyResult rectify(const DirectedGraph& g, RerBudget budget, std::uint64_t seed,
                             RerOptions options = {}) {
  Rectifier r(g, options);
  auto rng = make_rng(seed);
  RerTrace trace;
  for (;;) {
    if (r.satisfied()) {
      trace.terminal = RerTermination::enc_satisfied;
      break;
    }
    if (trace.applied >= budget.cap()) {
      trace.terminal = RerTermination::budget_exhausted;
      break;
    }
    auto op = r.step(rng);
    if (!op) {
      trace.terminal = RerTermination::stalled;
      break;
    }
    ++trace.applied;
    if (options.record_operations) trace.operations.push_back(*op);
  }
  return {r.graph(), std::move(trace)};
}

}  // namespace ctrlrob
