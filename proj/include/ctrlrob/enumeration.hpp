#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "attack.hpp"
#include "enc_rer.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "io.hpp"
#include "parallel.hpp"

namespace ctrlrob {

inline constexpr std::size_t kMaxEnumerationNodes = 6;
inline constexpr std::uint64_t kDefaultEnumerationBudget = 50'000'000;

struct Instance {
  CanonicalForm form;
  DirectedGraph graph;  // canonical labeling
  bool enc_satisfied{false};
  std::optional<Rational> mean_rc;
  bool optimal{false};
};

/// All weakly connected isomorphism classes of simple digraphs with (N, M).
struct InstanceCatalog {
  std::size_t nodes{0};
  std::size_t edges{0};
  std::vector<Instance> instances;  // sorted by canonical form
  bool scored{false};
  Criterion criterion{Criterion::structural};

  std::size_t size() const noexcept { return instances.size(); }

  std::size_t enc_count() const {
    return static_cast<std::size_t>(
        std::count_if(instances.begin(), instances.end(), [](const Instance& i) { return i.enc_satisfied; }));
  }

  std::vector<std::size_t> optimal_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < instances.size(); ++k)
      if (instances[k].optimal) out.push_back(k);
    return out;
  }

  std::size_t optimal_count() const { return optimal_indices().size(); }
};

namespace detail {

inline std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r > UINT64_MAX ? UINT64_MAX : static_cast<std::uint64_t>(r);
}

/// Next larger integer with the same popcount (Gosper).
inline std::uint64_t next_combination(std::uint64_t x) {
  const std::uint64_t c = x & (~x + 1);
  const std::uint64_t r = x + c;
  return (((r ^ x) >> 2) / c) | r;
}

inline bool masks_weakly_connected(std::size_t n, const std::array<std::uint8_t, 8>& undirected) {
  std::uint8_t seen = 1;
  std::uint8_t frontier = 1;
  while (frontier) {
    std::uint8_t next = 0;
    for (std::uint8_t f = frontier; f; f &= static_cast<std::uint8_t>(f - 1))
      next |= undirected[std::countr_zero(static_cast<unsigned>(f))];
    frontier = static_cast<std::uint8_t>(next & ~seen);
    seen |= next;
  }
  return seen == static_cast<std::uint8_t>((1u << n) - 1);
}

}  // namespace detail

/**
 * Enumerates arc subsets of the complete digraph in lexicographic order,
 * keeps the weakly connected ones and deduplicates by canonical form.
 * `workers` split the subsets round-robin; the merged result is sorted.
 */
inline InstanceCatalog enumerate_instances(std::size_t n, std::size_t m, std::size_t workers = 1,
                                           std::uint64_t budget = kDefaultEnumerationBudget) {
  if (n == 0) throw std::invalid_argument("enumerate_instances: node count must be positive");
  if (n > kMaxEnumerationNodes)
    throw BudgetExceeded("enumerate_instances: N = " + std::to_string(n) + " exceeds the limit of 6");
  const std::size_t arcs = n * (n - 1);
  if (m > arcs)
    throw std::invalid_argument("enumerate_instances: M exceeds N(N-1)");
  const std::uint64_t combos = detail::binomial_u64(arcs, m);
  if (combos > budget)
    throw BudgetExceeded("enumerate_instances: C(" + std::to_string(arcs) + ", " + std::to_string(m) +
                         ") = " + std::to_string(combos) + " subsets exceed the budget");

  std::vector<Edge> arc_list;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = 0; v < n; ++v)
      if (u != v) arc_list.push_back({u, v});

  workers = std::max<std::size_t>(1, workers);
  std::vector<std::unordered_set<std::uint64_t>> found(workers);
  parallel_for(workers, workers, [&](std::size_t w) {
    auto& codes = found[w];
    std::uint64_t subset = m == 0 ? 0 : (std::uint64_t{1} << m) - 1;
    const std::uint64_t end = std::uint64_t{1} << arcs;
    std::array<std::uint8_t, 8> order{};
    for (std::uint64_t index = 0; index < combos; ++index) {
      if (index % workers == w) {
        std::array<std::uint8_t, 8> out{};
        std::array<std::uint8_t, 8> undirected{};
        for (std::uint64_t s = subset; s; s &= s - 1) {
          const Edge& e = arc_list[static_cast<std::size_t>(std::countr_zero(s))];
          out[e.from] |= static_cast<std::uint8_t>(1u << e.to);
          undirected[e.from] |= static_cast<std::uint8_t>(1u << e.to);
          undirected[e.to] |= static_cast<std::uint8_t>(1u << e.from);
        }
        if (detail::masks_weakly_connected(n, undirected))
          codes.insert(detail::min_adjacency_code(n, out, order));
      }
      if (m == 0) break;
      subset = detail::next_combination(subset);
      if (subset >= end) break;
    }
  });

  std::vector<std::uint64_t> codes;
  for (std::size_t w = 1; w < workers; ++w) found[0].insert(found[w].begin(), found[w].end());
  codes.assign(found[0].begin(), found[0].end());
  std::sort(codes.begin(), codes.end());

  InstanceCatalog catalog{n, m, {}, false, Criterion::structural};
  catalog.instances.reserve(codes.size());
  for (auto code : codes) {
    CanonicalForm form{static_cast<std::uint8_t>(n), code};
    auto g = from_canonical_form(form);
    const bool enc = check_enc(g).satisfied();
    catalog.instances.push_back({form, std::move(g), enc, std::nullopt, false});
  }
  return catalog;
}

/// Exact mean R_c of every instance (subset mode) and the set of exact minimizers.
inline InstanceCatalog evaluate_catalog(InstanceCatalog catalog, Criterion criterion = Criterion::structural,
                                        std::size_t workers = 1) {
  if (catalog.nodes < 2) throw std::invalid_argument("evaluate_catalog: need N >= 2");
  parallel_for(catalog.instances.size(), workers, [&](std::size_t k) {
    auto& inst = catalog.instances[k];
    inst.mean_rc = *exhaustive_rc(inst.graph, ExhaustiveMode::subsets, criterion).exact;
    inst.enc_satisfied = check_enc(inst.graph).satisfied();
  });
  std::optional<Rational> best;
  for (const auto& inst : catalog.instances)
    if (!best || *inst.mean_rc < *best) best = *inst.mean_rc;
  for (auto& inst : catalog.instances) inst.optimal = best && *inst.mean_rc == *best;
  catalog.scored = true;
  catalog.criterion = criterion;
  return catalog;
}

struct SubsetRelation {
  bool holds{true};
  std::vector<std::size_t> counterexamples;  // optimal instances that violate ENC
};

/// Checks that every optimal instance satisfies ENC.
inline SubsetRelation verify_subset_relation(const InstanceCatalog& catalog) {
  if (!catalog.scored) throw std::logic_error("verify_subset_relation: catalog has not been scored");
  SubsetRelation r;
  for (std::size_t k = 0; k < catalog.instances.size(); ++k) {
    const auto& inst = catalog.instances[k];
    if (inst.optimal && !inst.enc_satisfied) r.counterexamples.push_back(k);
  }
  r.holds = r.counterexamples.empty();
  return r;
}

/// One row per instance: canonical code, M, ENC flag, exact score, optimality, edges as "u>v" pairs.
inline CsvTable catalog_table(const InstanceCatalog& catalog) {
  CsvTable t("catalog", {"form_hex", "m", "enc", "rc_num", "rc_den", "rc", "optimal", "edges"});
  for (const auto& inst : catalog.instances) {
    std::string edges;
    for (const auto& e : inst.graph.edges()) {
      if (!edges.empty()) edges += ';';
      edges += std::to_string(e.from) + ">" + std::to_string(e.to);
    }
    std::string num, den, value;
    if (inst.mean_rc) {
      num = boost::multiprecision::numerator(*inst.mean_rc).str();
      den = boost::multiprecision::denominator(*inst.mean_rc).str();
      value = format_double(inst.mean_rc->convert_to<double>());
    }
    t.row({inst.form.hex(), std::to_string(catalog.edges), inst.enc_satisfied ? "1" : "0", num, den, value,
           catalog.scored ? (inst.optimal ? "1" : "0") : "", edges});
  }
  return t;
}

}  // namespace ctrlrob
