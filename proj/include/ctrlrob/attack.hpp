#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "controllability.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "parallel.hpp"
#include "random.hpp"

namespace ctrlrob {

/// N-1 distinct original node ids, removed in order.
using AttackSequence = std::vector<NodeId>;

/// Curves on graphs up to this size also carry exact rational scores.
inline constexpr std::size_t kExactScoreNodeLimit = 7;

/**
 * Driver counts N_D(i) after i = 1..N-1 removals from an N-node network;
 * the curve value is n_D(i) = N_D(i) / (N - i).
 */
struct ControllabilityCurve {
  std::size_t original_size{0};
  Criterion criterion{Criterion::structural};
  std::vector<std::size_t> drivers;  // drivers[i-1] = N_D(i)

  std::size_t length() const noexcept { return drivers.size(); }

  double value(std::size_t step) const {
    check_step(step);
    return static_cast<double>(drivers[step - 1]) / static_cast<double>(original_size - step);
  }

  Rational exact_value(std::size_t step) const {
    check_step(step);
    return Rational(static_cast<long long>(drivers[step - 1]),
                    static_cast<long long>(original_size - step));
  }

  std::vector<double> values() const {
    std::vector<double> out;
    out.reserve(drivers.size());
    for (std::size_t i = 1; i <= drivers.size(); ++i) out.push_back(value(i));
    return out;
  }

  std::vector<Rational> exact_values() const {
    std::vector<Rational> out;
    out.reserve(drivers.size());
    for (std::size_t i = 1; i <= drivers.size(); ++i) out.push_back(exact_value(i));
    return out;
  }

 private:
  void check_step(std::size_t step) const {
    if (step == 0 || step > drivers.size())
      throw std::out_of_range("curve step " + std::to_string(step) + " outside 1.." +
                              std::to_string(drivers.size()));
  }
};

enum class ScoreProvenance : std::uint8_t { single_sequence, monte_carlo, exhaustive };

struct RobustnessScore {
  double value{0.0};
  std::optional<Rational> exact;  // present when computed in rational arithmetic
  ScoreProvenance provenance{ScoreProvenance::single_sequence};
  double std_dev{0.0};      // Monte Carlo spread of per-run scores
  std::size_t samples{1};
};

namespace detail {

inline void validate_sequence(const DirectedGraph& g, std::span<const NodeId> s) {
  const std::size_t n = g.node_count();
  if (n < 2) throw std::invalid_argument("attack needs a graph with at least 2 nodes");
  if (s.size() != n - 1)
    throw std::invalid_argument("attack sequence has length " + std::to_string(s.size()) +
                                ", expected " + std::to_string(n - 1));
  std::vector<char> seen(n, 0);
  for (NodeId v : s) {
    if (v >= n) throw std::invalid_argument("attack sequence names unknown node " + std::to_string(v));
    if (seen[v]) throw std::invalid_argument("attack sequence repeats node " + std::to_string(v));
    seen[v] = 1;
  }
}

/// Exact-criterion driver count of the subgraph induced by `alive`.
inline std::size_t exact_drivers_on(const DirectedGraph& g, std::span<const char> alive) {
  return exact_drivers(induced_subgraph(g, alive)).value;
}

template <typename T>
T mean_of(std::span<const T> xs) {
  if (xs.empty()) throw std::invalid_argument("mean of an empty sequence");
  T sum = 0;
  for (const auto& x : xs) sum += x;
  return sum / static_cast<T>(xs.size());
}

}  // namespace detail

/// Controllability curve of g under the removal order s (original ids).
inline ControllabilityCurve curve(const DirectedGraph& g, std::span<const NodeId> s,
                                  Criterion criterion = Criterion::structural) {
  detail::validate_sequence(g, s);
  ControllabilityCurve c{g.node_count(), criterion, {}};
  c.drivers.reserve(s.size());
  if (criterion == Criterion::structural) {
    MatchingEngine engine(g);
    for (NodeId v : s) {
      engine.remove(v);
      c.drivers.push_back(engine.driver_count());
    }
  } else {
    std::vector<char> alive(g.node_count(), 1);
    for (NodeId v : s) {
      alive[v] = 0;
      c.drivers.push_back(detail::exact_drivers_on(g, alive));
    }
  }
  return c;
}

/// R_c: arithmetic mean of curve values.
inline RobustnessScore rc(std::span<const double> values) {
  return {detail::mean_of(values), std::nullopt, ScoreProvenance::single_sequence, 0.0, 1};
}

inline RobustnessScore rc(std::span<const Rational> values) {
  const Rational exact = detail::mean_of(values);
  return {exact.convert_to<double>(), exact, ScoreProvenance::single_sequence, 0.0, 1};
}

inline RobustnessScore rc(const ControllabilityCurve& c) {
  if (c.length() == 0) throw std::invalid_argument("rc of an empty curve");
  if (c.original_size <= kExactScoreNodeLimit) return rc(std::span<const Rational>(c.exact_values()));
  return rc(std::span<const double>(c.values()));
}

/// First N-1 entries of a uniformly random permutation of the nodes.
inline AttackSequence random_sequence(std::size_t n, Rng& rng) {
  AttackSequence s(n);
  std::iota(s.begin(), s.end(), NodeId{0});
  std::shuffle(s.begin(), s.end(), rng);
  if (!s.empty()) s.pop_back();
  return s;
}

struct RandomAttackResult {
  std::vector<double> mean_curve;  // index i-1 holds step i
  std::vector<double> std_curve;
  RobustnessScore score;           // mean and spread of per-run R_c
  std::vector<double> run_scores;
};

/**
 * Monte Carlo random attack. Run k draws its order from the stream
 * (seed, k), so the result does not depend on `workers`.
 * Spreads are population standard deviations over runs.
 */
inline RandomAttackResult random_attack(const DirectedGraph& g, std::size_t runs, std::uint64_t seed,
                                        Criterion criterion = Criterion::structural,
                                        std::size_t workers = 1) {
  if (runs == 0) throw std::invalid_argument("random_attack: runs must be positive");
  if (g.node_count() < 2) throw std::invalid_argument("random_attack: graph needs at least 2 nodes");
  const std::size_t steps = g.node_count() - 1;
  std::vector<std::vector<double>> per_run(runs);
  parallel_for(runs, workers, [&](std::size_t k) {
    auto rng = stream_rng(seed, k);
    per_run[k] = curve(g, random_sequence(g.node_count(), rng), criterion).values();
  });

  RandomAttackResult out;
  out.mean_curve.assign(steps, 0.0);
  out.std_curve.assign(steps, 0.0);
  out.run_scores.reserve(runs);
  for (const auto& values : per_run) {
    for (std::size_t i = 0; i < steps; ++i) out.mean_curve[i] += values[i];
    out.run_scores.push_back(detail::mean_of(std::span<const double>(values)));
  }
  const double r = static_cast<double>(runs);
  for (auto& m : out.mean_curve) m /= r;
  for (const auto& values : per_run)
    for (std::size_t i = 0; i < steps; ++i) {
      const double d = values[i] - out.mean_curve[i];
      out.std_curve[i] += d * d;
    }
  for (auto& s : out.std_curve) s = std::sqrt(s / r);

  const double mean_score = detail::mean_of(std::span<const double>(out.run_scores));
  double var = 0.0;
  for (double x : out.run_scores) var += (x - mean_score) * (x - mean_score);
  out.score = {mean_score, std::nullopt, ScoreProvenance::monte_carlo, std::sqrt(var / r), runs};
  return out;
}

enum class ExhaustiveMode : std::uint8_t { permutations, subsets };

inline constexpr std::size_t kMaxPermutationNodes = 7;
inline constexpr std::size_t kMaxSubsetNodes = 20;

namespace detail {

inline Rational binomial(std::size_t n, std::size_t k) {
  Rational r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<long long>(n - k + i) / static_cast<long long>(i);
  return r;
}

inline Rational factorial(std::size_t n) {
  Rational r = 1;
  for (std::size_t i = 2; i <= n; ++i) r *= static_cast<long long>(i);
  return r;
}

// Depth-first walk over all removal orders; totals[i-1] accumulates N_D(i)
// summed over every complete order of length N-1.
class PermutationWalker {
 public:
  PermutationWalker(const DirectedGraph& g, Criterion criterion)
      : g_(g), criterion_(criterion), alive_(g.node_count(), 1), path_(g.node_count() - 1, 0),
        totals_(g.node_count() - 1, 0) {}

  std::vector<unsigned long long> run() {
    if (criterion_ == Criterion::structural) {
      walk_structural(MatchingEngine(g_), 0);
    } else {
      walk_exact(0);
    }
    return totals_;
  }

 private:
  void leaf() {
    for (std::size_t i = 0; i < path_.size(); ++i) totals_[i] += path_[i];
  }

  void walk_structural(const MatchingEngine& engine, std::size_t depth) {
    if (depth == path_.size()) return leaf();
    for (NodeId v = 0; v < g_.node_count(); ++v) {
      if (!engine.is_alive(v)) continue;
      MatchingEngine next = engine;
      next.remove(v);
      path_[depth] = next.driver_count();
      walk_structural(next, depth + 1);
    }
  }

  void walk_exact(std::size_t depth) {
    if (depth == path_.size()) return leaf();
    for (NodeId v = 0; v < g_.node_count(); ++v) {
      if (!alive_[v]) continue;
      alive_[v] = 0;
      path_[depth] = exact_drivers_on(g_, alive_);
      walk_exact(depth + 1);
      alive_[v] = 1;
    }
  }

  const DirectedGraph& g_;
  Criterion criterion_;
  std::vector<char> alive_;
  std::vector<std::size_t> path_;
  std::vector<unsigned long long> totals_;
};

}  // namespace detail

/**
 * Average R_c over every removal order.
 *
 * `permutations` walks all N! orders (N <= 7). `subsets` uses the fact that
 * after i removals every i-subset is equally likely, so it averages N_D over
 * the surviving (N-i)-sets instead (N <= 20). Both are exact.
 */
inline RobustnessScore exhaustive_rc(const DirectedGraph& g, ExhaustiveMode mode,
                                     Criterion criterion = Criterion::structural) {
  const std::size_t n = g.node_count();
  if (n < 2) throw std::invalid_argument("exhaustive_rc: graph needs at least 2 nodes");
  Rational total = 0;
  if (mode == ExhaustiveMode::permutations) {
    if (n > kMaxPermutationNodes)
      throw BudgetExceeded("exhaustive_rc: " + std::to_string(n) +
                           "! permutations exceed the budget (N <= 7)");
    const auto totals = detail::PermutationWalker(g, criterion).run();
    const Rational orders = detail::factorial(n);
    for (std::size_t i = 1; i < n; ++i)
      total += Rational(totals[i - 1]) / (orders * static_cast<long long>(n - i));
  } else {
    if (n > kMaxSubsetNodes)
      throw BudgetExceeded("exhaustive_rc: 2^" + std::to_string(n) +
                           " removal sets exceed the budget (N <= 20)");
    std::vector<unsigned long long> sums(n, 0);  // sums[i] over removed sets of size i
    std::vector<char> alive(n);
    const std::uint32_t full = (std::uint32_t{1} << n) - 1;
    for (std::uint32_t removed = 1; removed < full; ++removed) {
      for (std::size_t v = 0; v < n; ++v) alive[v] = ((removed >> v) & 1) ? 0 : 1;
      const std::size_t nd = criterion == Criterion::structural
                                 ? MatchingEngine(g, alive).driver_count()
                                 : detail::exact_drivers_on(g, alive);
      sums[static_cast<std::size_t>(std::popcount(removed))] += nd;
    }
    for (std::size_t i = 1; i < n; ++i)
      total += Rational(sums[i]) / (detail::binomial(n, i) * static_cast<long long>(n - i));
  }
  const Rational score = total / static_cast<long long>(n - 1);
  return {score.convert_to<double>(), score, ScoreProvenance::exhaustive, 0.0, 1};
}

}  // namespace ctrlrob
