// Command-line front end: generate, train, sparsify, detect, bench, ablate.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gsgan/checkpoint.hpp"
#include "gsgan/community.hpp"
#include "gsgan/config.hpp"
#include "gsgan/graph.hpp"
#include "gsgan/grid.hpp"
#include "gsgan/partition.hpp"
#include "gsgan/pipeline.hpp"
#include "gsgan/sbm.hpp"

namespace {

using namespace gsgan;

/// Options shared by subcommands that read an experiment config.
struct ConfigOptions {
  std::string path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* app) {
    app->add_option("--config", path, "key=value config file");
    app->add_option("--set", overrides, "config override key=value (repeatable)");
    app->add_option("--seed", seed, "top-level seed (overrides " + std::string(kSeedEnvVar) + ")");
  }

  /// File, then --set overrides, then the environment seed, then --seed.
  ExperimentConfig resolve() const {
    ExperimentConfig cfg = path.empty() ? ExperimentConfig{} : load_experiment_config(path);
    std::stringstream extra;
    for (const auto& o : overrides) extra << o << '\n';
    detail::apply_lines(extra, cfg, experiment_bindings(), "--set");
    if (auto env = seed_from_env()) cfg.seed = *env;
    if (seed) cfg.seed = *seed;
    return cfg;
  }
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  return out;
}

LoadedGraph read_graph(const std::string& path) {
  auto loaded = load_edge_list(path);
  if (loaded.report.self_loops)
    std::cerr << "warning: dropped " << loaded.report.self_loops << " self-loop line(s)\n";
  if (loaded.report.duplicates)
    std::cerr << "warning: dropped " << loaded.report.duplicates << " duplicate or reversed edge line(s)\n";
  return loaded;
}

void report_assembly(const AssemblyReport& r) {
  if (r.zero_row_nodes) std::cerr << "warning: " << r.zero_row_nodes << " node(s) never emitted by the generator\n";
  if (r.isolated_nodes) std::cerr << "warning: " << r.isolated_nodes << " node(s) isolated in the output\n";
  if (r.shortfall) std::cerr << "warning: only " << r.budget - r.shortfall << " eligible pair(s) for budget "
                             << r.budget << '\n';
}

nlohmann::ordered_json report_json(const AssemblyReport& r) {
  return {{"budget", r.budget},
          {"eligible_pairs", r.eligible_pairs},
          {"phase1_edges", r.phase1_edges},
          {"zero_row_nodes", r.zero_row_nodes},
          {"isolated_nodes", r.isolated_nodes},
          {"artificial_edges", r.artificial_edges},
          {"shortfall", r.shortfall}};
}

void write_config_sidecar(const std::string& path, const ExperimentConfig& cfg) {
  auto out = open_output(path);
  write_experiment_config(out, cfg);
}

int cmd_generate(const SBMSpec& base, double withhold, std::uint64_t seed, const std::string& edges_path,
                 const std::string& labels_path) {
  SBMSpec spec = base;
  spec.seed = substream_seed(seed, "dataset");
  auto lg = sbm_generate(spec);
  Graph g = withhold > 0.0 ? withhold_intra_edges(lg, withhold, substream_seed(seed, "withhold")) : lg.graph;
  const auto ids = NodeRelabeling::identity(g.node_count());
  export_edge_list(g, ids, edges_path);
  if (!labels_path.empty()) {
    auto out = open_output(labels_path);
    write_labels(out, lg.truth, ids);
  }
  return 0;
}

int cmd_train(const ConfigOptions& co, const std::string& input, const std::string& variant_name,
              const std::string& model_path, const std::string& stats_path) {
  const auto cfg = co.resolve();
  cfg.gsgan.training.validate();
  const auto loaded = read_graph(input);
  const Variant v = parse_variant(variant_name);
  std::optional<TrainedModel> model;
  try {
    model = train_variant(loaded.graph, cfg.gsgan, v, cfg.seed);
  } catch (const TrainingDiverged& e) {
    if (!stats_path.empty()) {
      auto out = open_output(stats_path);
      write_stats_csv(out, e.stats());
    }
    throw;
  }
  save_checkpoint(model_path, *model);
  if (!stats_path.empty()) {
    auto out = open_output(stats_path);
    write_stats_csv(out, model->stats);
  }
  return 0;
}

int cmd_sparsify(const ConfigOptions& co, const std::string& method_name, const std::string& variant_name,
                 double ratio, const std::string& input, const std::string& output, const std::string& model_path,
                 const std::string& report_path) {
  const auto cfg = co.resolve();
  if (!(ratio > 0.0 && ratio <= 100.0)) throw InputError("ratio must lie in (0, 100]");
  const auto loaded = read_graph(input);
  const Graph& g = loaded.graph;
  const std::size_t d = AssemblyBudget::from_ratio(ratio, g.edge_count()).edges;
  const Method method = parse_method(method_name);
  Graph out;
  if (method == Method::GSGAN) {
    const Variant v = parse_variant(variant_name);
    GeneratorParams generator;
    if (!model_path.empty()) {
      auto model = load_checkpoint(model_path);
      if (model.generator.dims.node_count != g.node_count())
        throw InputError("model was trained on a graph with " + std::to_string(model.generator.dims.node_count) +
                         " nodes, input has " + std::to_string(g.node_count()));
      generator = std::move(model.generator);
    } else {
      generator = train_variant(g, cfg.gsgan, v, cfg.seed).generator;
    }
    auto scores = generated_scores(g, generator, cfg.gsgan, cfg.seed);
    auto res = assemble_sparsified(g, scores, cfg.gsgan, d, cfg.seed);
    report_assembly(res.report);
    if (!report_path.empty()) {
      auto rep = open_output(report_path);
      rep << report_json(res.report).dump(2) << '\n';
    }
    out = std::move(res.graph);
  } else {
    if (!model_path.empty()) throw InputError("--model applies to GSGAN only");
    if (g.edge_count() == 0) throw InputError("input graph has no edges");
    out = sparsify_baseline(g, method, d, cfg.seed);
  }
  export_edge_list(out, loaded.relabeling, output);
  return 0;
}

int cmd_detect(const std::string& algorithm, const std::string& input, const std::string& labels_path,
               const std::string& output, std::optional<std::uint64_t> seed_flag, bool timing) {
  std::uint64_t seed = 1;
  if (auto env = seed_from_env()) seed = *env;
  if (seed_flag) seed = *seed_flag;
  auto loaded = read_graph(input);
  std::optional<Partition> truth;
  if (!labels_path.empty()) truth = load_labels(labels_path, loaded.relabeling);
  const Graph g = with_node_count(loaded.graph, loaded.relabeling.size());
  const auto algo = parse_detection_algorithm(algorithm);
  auto [partition, secs] = timed([&] { return detect(g, algo, substream_seed(seed, "detection")); });
  if (!output.empty()) {
    auto out = open_output(output);
    write_labels(out, partition, loaded.relabeling);
  }
  std::cout << "communities=" << partition.community_count() << '\n';
  std::cout << "modularity=" << detail::format_double(modularity(g, partition)) << '\n';
  if (truth) std::cout << "ari=" << detail::format_double(ari(partition, *truth)) << '\n';
  if (timing) std::cout << "seconds=" << detail::format_double(secs) << '\n';
  return 0;
}

int run_and_write_grid(const ExperimentConfig& cfg, const std::string& output, const std::string& summary,
                       bool quiet) {
  auto rows = run_grid(cfg, [&](const ResultRow& r) {
    if (quiet) return;
    std::cerr << r.method << ' ' << r.variant << ' ' << detail::format_double(r.ratio) << ' ' << r.algorithm
              << " seed " << r.seed << ": " << (r.failed() ? "error: " + r.error : "ari " + detail::format_double(r.ari))
              << '\n';
  });
  {
    auto out = open_output(output);
    write_results_csv(out, rows);
  }
  if (!summary.empty()) {
    auto out = open_output(summary);
    write_summary_csv(out, rows);
  }
  write_config_sidecar(output + ".config", cfg);
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.failed();
  if (failed) std::cerr << "warning: " << failed << " cell(s) failed; see the error column\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adversarial walk-based graph sparsification and community-detection benchmarks"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a planted-partition graph and its ground truth");
  SBMSpec sbm;
  double withhold = 0.0;
  std::uint64_t gen_seed = 1;
  std::string gen_edges;
  std::string gen_labels;
  gen->add_option("--blocks", sbm.block_sizes, "block sizes")->delimiter(',');
  gen->add_option("--p-in", sbm.p_in, "intra-block edge probability");
  gen->add_option("--p-out", sbm.p_out, "inter-block edge probability");
  gen->add_option("--withhold", withhold, "fraction of intra-block edges removed")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", gen_seed, "seed");
  gen->add_option("--out", gen_edges, "edge list output")->required();
  gen->add_option("--labels", gen_labels, "ground-truth label output");

  // train
  auto* train = app.add_subcommand("train", "Train the adversarial walk model on a graph");
  ConfigOptions train_cfg;
  train_cfg.attach(train);
  std::string train_input;
  std::string train_variant_name = "GSGAN";
  std::string train_model;
  std::string train_stats;
  train->add_option("--input", train_input, "edge list")->required();
  train->add_option("--variant", train_variant_name, "GSGAN, GSGAN_Jaccard, GSGAN_NR or GSGAN_NRWs");
  train->add_option("--model", train_model, "checkpoint output")->required();
  train->add_option("--stats", train_stats, "per-iteration statistics CSV");

  // sparsify
  auto* sp = app.add_subcommand("sparsify", "Sparsify a graph to a ratio of its edges");
  ConfigOptions sp_cfg;
  sp_cfg.attach(sp);
  std::string sp_method;
  std::string sp_variant = "GSGAN";
  double sp_ratio = 0.0;
  std::string sp_input;
  std::string sp_output;
  std::string sp_model;
  std::string sp_report;
  sp->add_option("--method", sp_method, "GSGAN, JC, BC, RAND, LSPAR or LD")->required();
  sp->add_option("--variant", sp_variant, "adversarial variant when training");
  sp->add_option("--ratio", sp_ratio, "percentage of edges kept")->required();
  sp->add_option("--input", sp_input, "edge list")->required();
  sp->add_option("--output", sp_output, "sparsified edge list")->required();
  sp->add_option("--model", sp_model, "trained checkpoint (GSGAN; skips training)");
  sp->add_option("--report", sp_report, "assembly report (GSGAN)");

  // detect
  auto* det = app.add_subcommand("detect", "Detect communities and score them");
  std::string det_algo;
  std::string det_input;
  std::string det_labels;
  std::string det_output;
  std::optional<std::uint64_t> det_seed;
  bool det_timing = false;
  det->add_option("--algorithm", det_algo, "louvain, labelprop or greedy")->required();
  det->add_option("--input", det_input, "edge list")->required();
  det->add_option("--labels", det_labels, "ground truth for ARI");
  det->add_option("--output", det_output, "partition output");
  det->add_option("--seed", det_seed, "seed (overrides " + std::string(kSeedEnvVar) + ")");
  det->add_flag("--timing", det_timing, "print the detection wall-clock time");

  // bench
  auto* bench = app.add_subcommand("bench", "Run a method x ratio x algorithm grid");
  ConfigOptions bench_cfg;
  bench_cfg.attach(bench);
  std::string bench_out;
  std::string bench_summary;
  bool bench_quiet = false;
  bench->add_option("--out", bench_out, "result CSV")->required();
  bench->add_option("--summary", bench_summary, "median summary CSV");
  bench->add_flag("--quiet", bench_quiet, "no per-cell progress");

  // ablate
  auto* ablate = app.add_subcommand("ablate", "Run the adversarial-variant ablation grid");
  ConfigOptions ablate_cfg;
  ablate_cfg.attach(ablate);
  std::string ablate_out;
  std::string ablate_summary;
  bool ablate_quiet = false;
  std::vector<std::string> ablate_algos{"louvain"};
  ablate->add_option("--out", ablate_out, "result CSV")->required();
  ablate->add_option("--algorithms", ablate_algos, "detection algorithms")->delimiter(',');
  ablate->add_option("--summary", ablate_summary, "median summary CSV");
  ablate->add_flag("--quiet", ablate_quiet, "no per-cell progress");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      std::uint64_t seed = gen_seed;
      if (auto env = seed_from_env(); env && gen->count("--seed") == 0) seed = *env;
      return cmd_generate(sbm, withhold, seed, gen_edges, gen_labels);
    }
    if (*train) return cmd_train(train_cfg, train_input, train_variant_name, train_model, train_stats);
    if (*sp) return cmd_sparsify(sp_cfg, sp_method, sp_variant, sp_ratio, sp_input, sp_output, sp_model, sp_report);
    if (*det) return cmd_detect(det_algo, det_input, det_labels, det_output, det_seed, det_timing);
    if (*bench) return run_and_write_grid(bench_cfg.resolve(), bench_out, bench_summary, bench_quiet);
    if (*ablate) {
      ExperimentConfig cfg = ablate_cfg.resolve();
      cfg.methods.clear();
      if (cfg.variants.empty())
        cfg.variants = {Variant::NoRealWalks, Variant::NoReward, Variant::Jaccard, Variant::Full};
      cfg.algorithms.clear();
      for (const auto& a : ablate_algos) cfg.algorithms.push_back(parse_detection_algorithm(a));
      return run_and_write_grid(cfg, ablate_out, ablate_summary, ablate_quiet);
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
