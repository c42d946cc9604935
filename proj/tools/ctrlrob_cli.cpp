// Command-line front end for the ctrlrob library.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <ctrlrob/ctrlrob.hpp>

namespace fs = std::filesystem;
using namespace ctrlrob;

namespace {

struct GraphSource {
  std::string model;
  std::size_t nodes{0};
  std::size_t edges{0};
  std::optional<std::uint64_t> seed;
  std::string input;
};

void add_source_options(CLI::App* cmd, GraphSource& src) {
  cmd->add_option("--model", src.model, "ER, SW, SF, QSN, RTN or RRN");
  cmd->add_option("--nodes", src.nodes, "Node count N");
  cmd->add_option("--edges", src.edges, "Edge count M");
  cmd->add_option("--seed", src.seed, "Top-level random seed");
  cmd->add_option("--input", src.input, "Edge-list file");
}

std::uint64_t require_seed(const std::optional<std::uint64_t>& seed, const char* what) {
  if (!seed) throw CLI::ValidationError("--seed", std::string(what) + " requires an explicit --seed");
  return *seed;
}

DirectedGraph load_graph(const GraphSource& src) {
  if (!src.input.empty()) {
    if (!src.model.empty()) throw CLI::ValidationError("--input", "give either --input or --model, not both");
    const auto doc = read_edge_list(src.input);
    if (doc.dropped_self_loops || doc.dropped_duplicates)
      std::cerr << "ingest: dropped " << doc.dropped_self_loops << " self-loops, " << doc.dropped_duplicates
                << " duplicate edges\n";
    return doc.graph();
  }
  if (src.model.empty()) throw CLI::ValidationError("--model", "give --model (with --nodes/--edges) or --input");
  GeneratorParams p;
  p.model = parse_model(src.model);
  p.nodes = src.nodes;
  p.edges = src.edges;
  p.seed = require_seed(src.seed, "generating a network");
  return generate(p);
}

void write_or_print(const std::string& out_dir, const std::string& name, const std::string& text) {
  if (out_dir.empty()) {
    std::cout << text;
    return;
  }
  const fs::path path = fs::path(out_dir) / name;
  write_text_file(path, text);
  std::cerr << "wrote " << path.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Controllability robustness of directed networks"};
  app.require_subcommand(1);
  std::size_t workers = default_workers();
  app.add_option("--workers", workers, "Worker threads (results do not depend on this)");

  GraphSource src;
  std::string criterion_name = "structural";
  std::size_t runs = 50;
  std::vector<std::string> budget_names;
  std::string out_dir;
  std::size_t instances = 1;

  auto* gen = app.add_subcommand("generate", "Generate a network and write its edge list");
  add_source_options(gen, src);
  gen->add_option("--out-dir", out_dir, "Write graph.edgelist here instead of stdout");

  auto* attack_cmd = app.add_subcommand("attack", "Random node-removal attack; prints R_c");
  add_source_options(attack_cmd, src);
  attack_cmd->add_option("--criterion", criterion_name)->check(CLI::IsMember({"structural", "exact"}));
  attack_cmd->add_option("--runs", runs, "Number of random attacks")->check(CLI::PositiveNumber);
  attack_cmd->add_option("--out-dir", out_dir, "Write the mean curve CSV here");

  auto* rectify_cmd = app.add_subcommand("rectify", "Apply random edge rectification");
  add_source_options(rectify_cmd, src);
  rectify_cmd->add_option("--rer-budget", budget_names, "Operation budget or 'unlimited'")->expected(1);
  rectify_cmd->add_option("--out-dir", out_dir, "Write rectified.edgelist here instead of stdout");

  auto* enumerate_cmd = app.add_subcommand("enumerate", "List all weakly connected digraphs with (N, M)");
  enumerate_cmd->add_option("--nodes", src.nodes)->required();
  enumerate_cmd->add_option("--edges", src.edges)->required();
  enumerate_cmd->add_option("--criterion", criterion_name)->check(CLI::IsMember({"structural", "exact"}));
  enumerate_cmd->add_option("--out-dir", out_dir, "Write the catalog CSV here instead of stdout");

  auto* enc_cmd = app.add_subcommand("enc-check", "Report degree-band violations");
  add_source_options(enc_cmd, src);

  auto* features_cmd = app.add_subcommand("features", "Basic network features as JSON");
  add_source_options(features_cmd, src);

  auto* experiment_cmd = app.add_subcommand("experiment", "Rectify-then-attack grid with CSV outputs");
  add_source_options(experiment_cmd, src);
  experiment_cmd->add_option("--criterion", criterion_name)->check(CLI::IsMember({"structural", "exact"}));
  experiment_cmd->add_option("--runs", runs, "Random attacks per instance")->check(CLI::PositiveNumber);
  experiment_cmd->add_option("--rer-budget", budget_names, "Budgets, e.g. 0,1000,unlimited")->delimiter(',');
  experiment_cmd->add_option("--instances", instances, "Independent network instances")
      ->check(CLI::PositiveNumber);
  experiment_cmd->add_option("--out-dir", out_dir)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const Criterion criterion = parse_criterion(criterion_name);

    if (*gen) {
      write_or_print(out_dir, "graph.edgelist", format_edge_list(load_graph(src)));
    } else if (*attack_cmd) {
      const auto g = load_graph(src);
      const auto seed = require_seed(src.seed, "attack");
      const auto r = random_attack(g, runs, seed, criterion, workers);
      std::cout << "rc_mean " << format_double(r.score.value) << "\nrc_std " << format_double(r.score.std_dev)
                << "\nruns " << runs << "\n";
      if (!out_dir.empty()) {
        CsvTable t("curve", {"i", "p_n", "mean_nd", "std_nd"});
        for (std::size_t i = 1; i <= r.mean_curve.size(); ++i)
          t.row({std::to_string(i), format_double(static_cast<double>(i) / static_cast<double>(g.node_count())),
                 format_double(r.mean_curve[i - 1]), format_double(r.std_curve[i - 1])});
        write_or_print(out_dir, "curve.csv", t.str());
      }
    } else if (*rectify_cmd) {
      const auto g = load_graph(src);
      const auto seed = require_seed(src.seed, "rectify");
      const auto budget = budget_names.empty() ? RerBudget::unlimited() : RerBudget::parse(budget_names.front());
      RerOptions options;
      options.record_operations = false;
      const auto r = rectify(g, budget, seed, options);
      std::cerr << "operations " << r.trace.applied << "\nterminal " << to_string(r.trace.terminal) << "\n";
      write_or_print(out_dir, "rectified.edgelist", format_edge_list(r.graph));
    } else if (*enumerate_cmd) {
      auto catalog = evaluate_catalog(enumerate_instances(src.nodes, src.edges, workers), criterion, workers);
      const auto relation = verify_subset_relation(catalog);
      std::cerr << "instances " << catalog.size() << "\nenc " << catalog.enc_count() << "\noptimal "
                << catalog.optimal_count() << "\noptimal_within_enc " << (relation.holds ? "yes" : "no") << "\n";
      write_or_print(out_dir,
                     "catalog_N" + std::to_string(src.nodes) + "_M" + std::to_string(src.edges) + ".csv",
                     catalog_table(catalog).str());
    } else if (*enc_cmd) {
      const auto g = load_graph(src);
      const auto report = check_enc(g);
      std::cout << "band [" << report.bounds.lower << ", " << report.bounds.upper << "]\n";
      for (const auto& v : report.violations)
        std::cout << "violation node=" << v.node << " side=" << to_string(v.side) << " degree=" << v.degree
                  << "\n";
      std::cout << (report.satisfied() ? "satisfied" : "violated") << "\n";
    } else if (*features_cmd) {
      const auto g = load_graph(src);
      const auto f = basic_features(g);
      // JSON has no inf or nan, so those stay strings.
      auto number = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(format_double(x)); };
      nlohmann::json j;
      j["nodes"] = g.node_count();
      j["edges"] = g.edge_count();
      j["average_degree"] = number(f.average_degree);
      j["average_path_length"] = number(f.average_path_length);
      j["average_betweenness"] = number(f.average_betweenness);
      j["clustering"] = number(f.clustering);
      j["heterogeneity_out"] = number(f.heterogeneity_out);
      j["heterogeneity_in"] = number(f.heterogeneity_in);
      std::cout << j.dump(2) << "\n";
    } else if (*experiment_cmd) {
      ExperimentConfig c;
      if (!src.model.empty()) c.model = parse_model(src.model);
      if (!src.input.empty()) c.input = fs::path(src.input);
      c.nodes = src.nodes;
      c.edges = src.edges;
      c.criterion = criterion;
      c.attack_runs = runs;
      if (!budget_names.empty()) {
        c.budgets.clear();
        for (const auto& b : budget_names) c.budgets.push_back(RerBudget::parse(b));
      }
      c.instances = instances;
      c.seed = require_seed(src.seed, "experiment");
      c.out_dir = out_dir;
      c.workers = workers;
      const auto r = run_experiment(c);
      for (const auto& b : r.budgets)
        std::cout << "budget " << b.budget.to_string() << " rc_mean " << format_double(b.rc_mean)
                  << " median_pn " << format_double(b.disconnection.median) << "\n";
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const StageError& e) {
    std::cerr << "error in stage " << e.stage() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
