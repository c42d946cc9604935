#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "attack.hpp"
#include "enc_rer.hpp"
#include "errors.hpp"
#include "generators.hpp"
#include "io.hpp"
#include "metrics.hpp"
#include "parallel.hpp"
#include "random.hpp"

namespace ctrlrob {

/**
 * One experiment grid: `instances` networks (generated from `model` or all
 * equal to the graph read from `input`), each rectified under every budget and
 * then attacked `attack_runs` times.
 */
struct ExperimentConfig {
  std::optional<Model> model;
  std::optional<std::filesystem::path> input;
  std::size_t nodes{0};
  std::size_t edges{0};
  Criterion criterion{Criterion::structural};
  std::size_t attack_runs{50};
  std::vector<RerBudget> budgets{RerBudget::of(0), RerBudget::unlimited()};
  std::size_t instances{1};
  std::uint64_t seed{0};
  std::filesystem::path out_dir;  // empty: compute only, write nothing
  std::size_t workers{1};

  void validate() const {
    if (model.has_value() == input.has_value())
      throw std::invalid_argument("experiment: give exactly one of a model or an input file");
    if (attack_runs == 0) throw std::invalid_argument("experiment: attack runs must be at least 1");
    if (instances == 0) throw std::invalid_argument("experiment: instance count must be at least 1");
    if (budgets.empty()) throw std::invalid_argument("experiment: budget list is empty");
    if (model) generator_params(0).validate();
  }

  GeneratorParams generator_params(std::uint64_t instance_seed) const {
    GeneratorParams p;
    p.model = model.value();
    p.nodes = nodes;
    p.edges = edges;
    p.seed = instance_seed;
    return p;
  }
};

/// Seeds used for one instance; rectification and attack seeds are shared across budgets.
struct InstanceSeeds {
  std::uint64_t generate{0};
  std::uint64_t rectify{0};
  std::uint64_t attack{0};
};

inline InstanceSeeds instance_seeds(std::uint64_t seed, std::size_t instance) {
  return {derive_seed(seed, 1, instance), derive_seed(seed, 2, instance), derive_seed(seed, 3, instance)};
}

struct InstanceOutcome {
  std::size_t instance{0};
  std::size_t rer_applied{0};
  RerTermination rer_terminal{RerTermination::enc_satisfied};
  bool enc_satisfied{false};
  RandomAttackResult attack;
  double h_out{0.0};
  double h_in{0.0};
  HeterogeneityCurve h_out_curve;
  HeterogeneityCurve h_in_curve;
  DisconnectionResult disconnection;
  DegreeHistogram out_degrees;
  DegreeHistogram in_degrees;
};

struct BudgetOutcome {
  RerBudget budget;
  std::vector<InstanceOutcome> instances;
  std::vector<double> mean_curve;  // pooled over instances and runs
  std::vector<double> std_curve;
  double rc_mean{0.0};             // mean over instances of the per-instance mean R_c
  double rc_std{0.0};              // population spread of per-instance means
  BoxplotSummary disconnection;    // pooled P_N over instances and runs
};

struct ExperimentResult {
  std::size_t nodes{0};
  std::size_t edges{0};
  bool sparse{false};  // density M/(N(N-1)) <= 0.05; the exact criterion is stated for sparse networks
  std::vector<BudgetOutcome> budgets;
  std::vector<std::filesystem::path> files;
};

namespace detail {

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

template <typename Fn>
auto in_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

inline nlohmann::json config_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["model"] = c.model ? nlohmann::json(to_string(*c.model)) : nlohmann::json(nullptr);
  j["input"] = c.input ? nlohmann::json(c.input->generic_string()) : nlohmann::json(nullptr);
  j["nodes"] = c.nodes;
  j["edges"] = c.edges;
  j["criterion"] = to_string(c.criterion);
  j["attack_runs"] = c.attack_runs;
  j["instances"] = c.instances;
  j["seed"] = c.seed;
  auto budgets = nlohmann::json::array();
  for (const auto& b : c.budgets) budgets.push_back(b.to_string());
  j["budgets"] = budgets;
  return j;
}

inline InstanceOutcome run_instance(const DirectedGraph& base, const RerBudget& budget, std::size_t instance,
                                    const InstanceSeeds& seeds, const ExperimentConfig& c) {
  InstanceOutcome out;
  out.instance = instance;
  RerOptions options;
  options.record_operations = false;
  const auto rectified = in_stage("rectify", [&] { return rectify(base, budget, seeds.rectify, options); });
  const DirectedGraph& g = rectified.graph;
  out.rer_applied = rectified.trace.applied;
  out.rer_terminal = rectified.trace.terminal;
  out.enc_satisfied = check_enc(g).satisfied();
  out.attack = in_stage("attack", [&] { return random_attack(g, c.attack_runs, seeds.attack, c.criterion, c.workers); });
  in_stage("metrics", [&] {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.h_out = g.edge_count() ? heterogeneity(g, DegreeSide::out).value : nan;
    out.h_in = g.edge_count() ? heterogeneity(g, DegreeSide::in).value : nan;
    out.h_out_curve = heterogeneity_curve(g, seeds.attack, c.attack_runs, DegreeSide::out, c.workers);
    out.h_in_curve = heterogeneity_curve(g, seeds.attack, c.attack_runs, DegreeSide::in, c.workers);
    out.disconnection = disconnection_threshold(g, seeds.attack, c.attack_runs, c.workers);
    out.out_degrees = degree_distribution(g, DegreeSide::out);
    out.in_degrees = degree_distribution(g, DegreeSide::in);
    return 0;
  });
  return out;
}

inline void pool_budget(BudgetOutcome& b) {
  const std::size_t steps = b.instances.front().attack.mean_curve.size();
  const double count = static_cast<double>(b.instances.size());
  b.mean_curve.assign(steps, 0.0);
  b.std_curve.assign(steps, 0.0);
  std::vector<double> second(steps, 0.0);
  std::vector<double> pn;
  double rc_sum = 0.0;
  for (const auto& inst : b.instances) {
    for (std::size_t i = 0; i < steps; ++i) {
      const double m = inst.attack.mean_curve[i];
      const double s = inst.attack.std_curve[i];
      b.mean_curve[i] += m;
      second[i] += s * s + m * m;
    }
    rc_sum += inst.attack.score.value;
    pn.insert(pn.end(), inst.disconnection.thresholds.begin(), inst.disconnection.thresholds.end());
  }
  for (std::size_t i = 0; i < steps; ++i) {
    b.mean_curve[i] /= count;
    b.std_curve[i] = std::sqrt(std::max(0.0, second[i] / count - b.mean_curve[i] * b.mean_curve[i]));
  }
  b.rc_mean = rc_sum / count;
  double var = 0.0;
  for (const auto& inst : b.instances) var += std::pow(inst.attack.score.value - b.rc_mean, 2);
  b.rc_std = std::sqrt(var / count);
  b.disconnection = boxplot(std::move(pn));
}

inline std::string budget_tag(const RerBudget& b) { return b.to_string(); }

inline std::vector<std::filesystem::path> write_outputs(const ExperimentConfig& c, const ExperimentResult& r,
                                                        const std::vector<InstanceSeeds>& seeds,
                                                        const EdgeListDocument* doc) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  const double n = static_cast<double>(r.nodes);
  auto save = [&](const CsvTable& t, const std::string& name) {
    t.save(c.out_dir / name);
    files.push_back(c.out_dir / name);
  };

  for (const auto& b : r.budgets) {
    CsvTable curve("curve", {"i", "p_n", "mean_nd", "std_nd"});
    for (std::size_t i = 1; i <= b.mean_curve.size(); ++i)
      curve.row({std::to_string(i), format_double(static_cast<double>(i) / n), format_double(b.mean_curve[i - 1]),
                 format_double(b.std_curve[i - 1])});
    save(curve, "curve_budget-" + budget_tag(b.budget) + ".csv");
  }

  CsvTable rc("rc_summary", {"budget", "instance", "rer_operations", "rer_terminal", "enc", "rc_mean", "rc_std",
                             "h_out", "h_in"});
  for (const auto& b : r.budgets) {
    for (const auto& inst : b.instances)
      rc.row({budget_tag(b.budget), std::to_string(inst.instance), std::to_string(inst.rer_applied),
              to_string(inst.rer_terminal), inst.enc_satisfied ? "1" : "0", format_double(inst.attack.score.value),
              format_double(inst.attack.score.std_dev), format_double(inst.h_out), format_double(inst.h_in)});
    rc.row({budget_tag(b.budget), "all", "", "", "", format_double(b.rc_mean), format_double(b.rc_std), "", ""});
  }
  save(rc, "rc_summary.csv");

  CsvTable het("heterogeneity", {"budget", "side", "i", "p_n", "mean_h", "defined_instances"});
  for (const auto& b : r.budgets)
    for (DegreeSide side : {DegreeSide::out, DegreeSide::in})
      for (std::size_t i = 0; i < r.nodes; ++i) {
        double sum = 0.0;
        std::size_t defined = 0;
        for (const auto& inst : b.instances) {
          const auto& h = side == DegreeSide::out ? inst.h_out_curve : inst.h_in_curve;
          if (h.defined(i)) {
            sum += h.mean[i];
            ++defined;
          }
        }
        het.row({budget_tag(b.budget), to_string(side), std::to_string(i), format_double(static_cast<double>(i) / n),
                 format_double(defined ? sum / static_cast<double>(defined) : std::nan("")),
                 std::to_string(defined)});
      }
  save(het, "heterogeneity.csv");

  CsvTable box("disconnection", {"budget", "min", "q1", "median", "q3", "max", "outliers"});
  for (const auto& b : r.budgets) {
    std::string outliers;
    for (double x : b.disconnection.outliers) {
      if (!outliers.empty()) outliers += ';';
      outliers += format_double(x);
    }
    const auto& s = b.disconnection;
    box.row({budget_tag(b.budget), format_double(s.min), format_double(s.q1), format_double(s.median),
             format_double(s.q3), format_double(s.max), outliers});
  }
  save(box, "disconnection.csv");

  CsvTable deg("degree_distribution", {"budget", "instance", "side", "degree", "count"});
  for (const auto& b : r.budgets)
    for (const auto& inst : b.instances)
      for (DegreeSide side : {DegreeSide::out, DegreeSide::in})
        for (const auto& [k, count] : side == DegreeSide::out ? inst.out_degrees : inst.in_degrees)
          deg.row({budget_tag(b.budget), std::to_string(inst.instance), to_string(side), std::to_string(k),
                   std::to_string(count)});
  save(deg, "degree_distribution.csv");

  if (doc) {
    std::string remap = "dense\texternal\n";
    for (std::size_t k = 0; k < doc->external_ids.size(); ++k)
      remap += std::to_string(k) + "\t" + std::to_string(doc->external_ids[k]) + "\n";
    write_text_file(c.out_dir / "remap.tsv", remap);
    files.push_back(c.out_dir / "remap.tsv");
  }

  nlohmann::json manifest;
  manifest["format"] = "ctrlrob-experiment v1";
  manifest["config"] = config_json(c);
  manifest["config_hash"] = hex64(fnv1a(config_json(c).dump()));
  manifest["graph"] = {{"nodes", r.nodes}, {"edges", r.edges}, {"sparse", r.sparse}};
  if (doc)
    manifest["ingest"] = {{"dropped_self_loops", doc->dropped_self_loops},
                          {"dropped_duplicates", doc->dropped_duplicates}};
  auto seed_list = nlohmann::json::array();
  for (std::size_t k = 0; k < seeds.size(); ++k)
    seed_list.push_back({{"instance", k},
                         {"generate", seeds[k].generate},
                         {"rectify", seeds[k].rectify},
                         {"attack", seeds[k].attack}});
  manifest["seeds"] = seed_list;
  auto names = nlohmann::json::array();
  for (const auto& f : files) names.push_back(f.filename().generic_string());
  manifest["files"] = names;
  write_text_file(c.out_dir / "manifest.json", manifest.dump(2) + "\n");
  files.push_back(c.out_dir / "manifest.json");
  return files;
}

}  // namespace detail

/**
 * Runs the full grid. Results and files depend only on the config, never on
 * `workers`. Failures are rethrown as StageError naming the pipeline stage.
 */
inline ExperimentResult run_experiment(const ExperimentConfig& config) {
  detail::in_stage("config", [&] {
    config.validate();
    return 0;
  });

  std::optional<EdgeListDocument> doc;
  if (config.input)
    doc = detail::in_stage("ingest", [&] { return read_edge_list(*config.input); });

  std::vector<InstanceSeeds> seeds;
  std::vector<DirectedGraph> graphs;
  for (std::size_t k = 0; k < config.instances; ++k) {
    seeds.push_back(instance_seeds(config.seed, k));
    if (doc) {
      graphs.push_back(doc->graph());
    } else {
      graphs.push_back(
          detail::in_stage("generate", [&] { return generate(config.generator_params(seeds.back().generate)); }));
    }
  }

  ExperimentResult result;
  result.nodes = graphs.front().node_count();
  result.edges = graphs.front().edge_count();
  result.sparse = graphs.front().is_sparse();
  for (const auto& budget : config.budgets) {
    BudgetOutcome b{budget, {}, {}, {}, 0.0, 0.0, {}};
    for (std::size_t k = 0; k < config.instances; ++k)
      b.instances.push_back(detail::run_instance(graphs[k], budget, k, seeds[k], config));
    detail::pool_budget(b);
    result.budgets.push_back(std::move(b));
  }

  if (!config.out_dir.empty())
    result.files = detail::in_stage("write", [&] {
      return detail::write_outputs(config, result, seeds, doc ? &*doc : nullptr);
    });
  return result;
}

}  // namespace ctrlrob
