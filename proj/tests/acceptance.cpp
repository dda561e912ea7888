// Acceptance runner: one PASS/FAIL line per criterion on stdout, progress on
// stderr. Exits nonzero only when something crashes; a criterion that is not
// met prints FAIL and the run carries on.

#include <chrono>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "checks.hpp"
#include "gsgan/community.hpp"
#include "gsgan/grid.hpp"
#include "gsgan/pipeline.hpp"
#include "gsgan/sbm.hpp"

namespace fs = std::filesystem;
using namespace gsgan;
using checks::describe;
using checks::seconds_since;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

int g_failed = 0;
std::vector<std::string> g_only;  // criterion name substrings; empty runs all

bool selected(const std::string& name) {
  if (g_only.empty()) return true;
  for (const auto& o : g_only)
    if (name.find(o) != std::string::npos) return true;
  return false;
}

void report(const std::string& name, const Verdict& v) {
  std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << std::endl;
  g_failed += !v.pass;
}

void run(const std::string& name, const std::function<Verdict()>& body) {
  if (!selected(name)) return;
  std::cerr << "[acceptance] " << name << " ..." << std::endl;
  report(name, body());
}

std::string fixed(double x, int digits = 3) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << x;
  return s.str();
}

// ---- oracle criteria -----------------------------------------------------------

Verdict scoring_oracle() {
  const auto t0 = Clock::now();
  auto mismatch = checks::scoring_oracle();
  const double secs = seconds_since(t0);
  if (mismatch) return {false, *mismatch};
  return {secs < 10.0, describe("200 graphs exact, ", fixed(secs, 2), " s (limit 10 s)")};
}

Verdict ari_oracle() {
  const double err = checks::ari_oracle_error();
  auto mismatch = checks::ari_worked_examples();
  if (mismatch) return {false, *mismatch};
  return {err < 1e-12, describe("500 pairs, max |error| ", err, " (limit 1e-12); examples 1, 0, -1/9 exact")};
}

Verdict betweenness_oracle() {
  auto mismatch = checks::betweenness_oracle();
  if (mismatch) return {false, *mismatch};
  return {true, "100 seeds, exact rational centralities and top-d selection"};
}

Verdict gradient_check() {
  const auto t0 = Clock::now();
  const auto worst = checks::gradient_check();
  const double secs = seconds_since(t0);
  const bool ok = worst.generator < 1e-4 && worst.critic < 1e-4 && secs < 60.0;
  return {ok, describe("max relative error generator ", worst.generator, " critic ", worst.critic,
                       " (limit 1e-4), ", fixed(secs, 2), " s (limit 60 s)")};
}

Verdict assembly() {
  if (auto m = checks::assembly_hand_traces()) return {false, *m};
  if (auto m = checks::assembly_properties()) return {false, *m};
  return {true, "3 hand traces exact; 1000 matrices satisfy exact-d, subset, determinism, monotonicity"};
}

// ---- training criteria -----------------------------------------------------------

const std::vector<std::uint64_t> kSeeds{1, 2, 3, 4, 5};

ExperimentConfig smoke_config() {
  ExperimentConfig cfg;
  cfg.dataset = "sbm2x50";
  cfg.sbm.block_sizes = {50, 50};
  cfg.sbm.p_in = 0.3;
  cfg.sbm.p_out = 0.02;
  cfg.ratios = {20, 10};
  cfg.methods = {Method::RAND};
  cfg.variants = {Variant::Full, Variant::NoReward, Variant::NoRealWalks};
  cfg.algorithms = {DetectionAlgorithm::Louvain};
  return cfg;
}

std::string per_seed(const std::vector<ResultRow>& rows, std::string_view method, std::string_view variant,
                     double ratio) {
  std::string out;
  for (const auto& r : rows)
    if (r.method == method && r.variant == variant && r.ratio == ratio)
      out += (out.empty() ? "" : " ") + (r.failed() ? std::string("err") : fixed(r.ari));
  return out;
}

void smoke_and_ablation() {
  std::vector<ResultRow> rows;
  double slowest = 0.0;
  for (std::uint64_t seed : kSeeds) {
    ExperimentConfig cfg = smoke_config();
    cfg.seeds = {seed};
    const auto t0 = Clock::now();
    auto part = run_grid(cfg);
    const double secs = seconds_since(t0);
    slowest = std::max(slowest, secs);
    std::cerr << "[acceptance]   seed " << seed << " grid " << fixed(secs, 1) << " s" << std::endl;
    rows.insert(rows.end(), part.begin(), part.end());
  }
  for (const auto& r : rows)
    if (r.failed()) std::cerr << "[acceptance]   failed cell " << r.method << '/' << r.variant << ": " << r.error << '\n';

  const auto algo = DetectionAlgorithm::Louvain;
  const auto gsgan20 = median_ari(rows, "GSGAN", "GSGAN", 20, algo);
  const auto rand20 = median_ari(rows, "RAND", kNoVariant, 20, algo);
  const auto full10 = median_ari(rows, "GSGAN", "GSGAN", 10, algo);
  const auto nr10 = median_ari(rows, "GSGAN", "GSGAN_NR", 10, algo);
  const auto nrws10 = median_ari(rows, "GSGAN", "GSGAN_NRWs", 10, algo);

  if (!gsgan20 || !rand20) {
    report("training smoke", {false, "grid cells failed"});
  } else {
    const bool beats = *gsgan20 >= *rand20;
    const bool absolute = *gsgan20 >= 0.9;
    const bool fast = slowest < 15 * 60;
    report("training smoke",
           {beats && absolute && fast,
            describe("median Louvain ARI at 20%: GSGAN ", fixed(*gsgan20), " [", per_seed(rows, "GSGAN", "GSGAN", 20),
                     "] vs RAND ", fixed(*rand20), " [", per_seed(rows, "RAND", kNoVariant, 20), "]; >= RAND ",
                     beats ? "yes" : "no", ", >= 0.9 ", absolute ? "yes" : "no", "; slowest seed ",
                     fixed(slowest, 0), " s (limit 900 s; includes three variants)")});
  }

  if (!full10 || !nr10 || !nrws10) {
    report("ablation ordering", {false, "grid cells failed"});
  } else {
    report("ablation ordering",
           {*full10 >= *nr10 && *nr10 >= *nrws10,
            describe("median Louvain ARI at 10%: GSGAN ", fixed(*full10), " [", per_seed(rows, "GSGAN", "GSGAN", 10),
                     "] >= GSGAN_NR ", fixed(*nr10), " [", per_seed(rows, "GSGAN", "GSGAN_NR", 10),
                     "] >= GSGAN_NRWs ", fixed(*nrws10), " [", per_seed(rows, "GSGAN", "GSGAN_NRWs", 10), "]")});
  }
}

Verdict artificial_edges() {
  ExperimentConfig cfg = smoke_config();
  cfg.dataset = "sbm2x50-withheld";
  cfg.withhold = 0.3;
  const auto algo = DetectionAlgorithm::Louvain;
  std::vector<double> with_on, with_off;
  std::size_t added = 0, added_intra = 0;
  for (std::uint64_t seed : kSeeds) {
    const std::uint64_t rep_seed = replicate_seed(cfg, seed);
    const Dataset ds = load_dataset(cfg, seed);
    const auto model = train_variant(ds.graph, cfg.gsgan, Variant::Full, rep_seed);
    const auto scores = generated_scores(ds.graph, model.generator, cfg.gsgan, rep_seed);
    const std::size_t d = AssemblyBudget::from_ratio(10, ds.graph.edge_count()).edges;
    for (bool allow : {true, false}) {
      GsganSettings s = cfg.gsgan;
      s.artificial_edges = allow;
      const auto res = assemble_sparsified(ds.graph, scores, s, d, rep_seed);
      const double score = ari(detect(res.graph, algo, detail::detection_seed(rep_seed, algo)), ds.truth);
      (allow ? with_on : with_off).push_back(score);
      if (allow)
        for (const Edge& e : res.graph.edges())
          if (!ds.graph.has_edge(e)) {
            ++added;
            added_intra += ds.truth.labels[e.u] == ds.truth.labels[e.v];
          }
    }
    std::cerr << "[acceptance]   seed " << seed << " on " << fixed(with_on.back()) << " off " << fixed(with_off.back())
              << std::endl;
  }
  const double on = median(with_on);
  const double off = median(with_off);
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (double x : v) s += (s.empty() ? "" : " ") + fixed(x);
    return s;
  };
  return {on >= off, describe("median Louvain ARI at 10% with 30% of intra-block edges withheld: on ", fixed(on), " [",
                              list(with_on), "] vs off ", fixed(off), " [", list(with_off), "]; ", added,
                              " artificial edges, ", added_intra, " intra-block")};
}

// ---- timing ----------------------------------------------------------------------

Verdict timing_direction() {
  // the smoke-test family scaled to 5000 nodes
  SBMSpec spec = smoke_config().sbm;
  spec.block_sizes = {2500, 2500};
  spec.seed = 11;
  const auto lg = sbm_generate(spec);
  const Graph& full = lg.graph;
  const Graph sparse = sparsify_baseline(full, Method::RAND, AssemblyBudget::from_ratio(20, full.edge_count()).edges, 11);
  auto median_seconds = [](const Graph& g) {
    std::vector<double> t;
    for (std::uint64_t rep = 0; rep < 5; ++rep)
      t.push_back(timed([&] { return detect(g, DetectionAlgorithm::LabelPropagation, rep + 1); }).second);
    return median(t);
  };
  median_seconds(full);  // warm caches
  const double t_full = median_seconds(full);
  const double t_sparse = median_seconds(sparse);
  const double saving = 1.0 - t_sparse / t_full;
  return {saving >= 0.4, describe("label propagation on ", full.node_count(), " nodes: full ", full.edge_count(),
                                  " edges ", fixed(t_full * 1e3, 1), " ms, RAND 20% ", sparse.edge_count(), " edges ",
                                  fixed(t_sparse * 1e3, 1), " ms; ", fixed(saving * 100, 1),
                                  "% faster (needs >= 40%)")};
}

// ---- CLI determinism ---------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Runs every subcommand into `dir`; returns the first command that failed.
std::optional<std::string> run_cli_suite(const std::string& cli, const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto q = [](const fs::path& p) { return "'" + p.string() + "'"; };
  const std::string small = " --set sbm.blocks=20,20 --set sbm.p_in=0.4 --set sbm.p_out=0.05";
  const std::string quick = " --set training.iterations=4 --set training.batch_size=8";
  const std::string g = q(dir / "g.txt");
  const std::string l = q(dir / "labels.txt");
  std::vector<std::pair<std::string, std::string>> steps = {
      {"generate", "generate --blocks 20,20 --p-in 0.4 --p-out 0.05 --seed 3 --out " + g + " --labels " + l},
      {"train", "train --input " + g + quick + " --seed 3 --model " + q(dir / "model.ckpt") + " --stats " +
                    q(dir / "stats.csv")},
      {"sparsify-model", "sparsify --method GSGAN --ratio 30 --input " + g + " --model " + q(dir / "model.ckpt") +
                             " --seed 3 --output " + q(dir / "gsgan_model.txt") + " --report " +
                             q(dir / "report.json")},
      {"sparsify-train",
       "sparsify --method GSGAN --variant GSGAN_NR --ratio 30 --input " + g + quick + " --seed 3 --output " +
           q(dir / "gsgan_nr.txt")},
  };
  for (std::string m : {"JC", "BC", "RAND", "LSPAR", "LD"})
    steps.push_back({"sparsify-" + m, "sparsify --method " + m + " --ratio 30 --input " + g + " --seed 3 --output " +
                                          q(dir / ("sp_" + m + ".txt"))});
  for (std::string a : {"louvain", "labelprop", "greedy"})
    steps.push_back({"detect-" + a, "detect --algorithm " + a + " --input " + q(dir / "gsgan_model.txt") +
                                        " --labels " + l + " --seed 3 --output " + q(dir / ("part_" + a + ".txt"))});
  steps.push_back({"bench", "bench" + small + quick +
                                " --set methods=GSGAN,JC,BC,RAND,LSPAR,LD --set ratios=20,10 --set seeds=1,2 --seed 3 "
                                "--quiet --out " +
                                q(dir / "bench.csv") + " --summary " + q(dir / "bench_summary.csv")});
  steps.push_back({"ablate", "ablate" + small + quick + " --set ratios=20 --set seeds=1 --seed 3 --quiet --out " +
                                 q(dir / "ablate.csv") + " --summary " + q(dir / "ablate_summary.csv")});

  for (const auto& [name, args] : steps) {
    const std::string cmd = q(cli) + " " + args + " > " + q(dir / (name + ".stdout")) + " 2> " +
                            q(dir / (name + ".stderr"));
    if (std::system(cmd.c_str()) != 0) return name + " exited nonzero: " + slurp(dir / (name + ".stderr"));
  }
  return std::nullopt;
}

Verdict cli_determinism(const std::string& cli, const fs::path& workdir) {
  const fs::path a = workdir / "run_a";
  const fs::path b = workdir / "run_b";
  if (auto err = run_cli_suite(cli, a)) return {false, *err};
  if (auto err = run_cli_suite(cli, b)) return {false, *err};
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const fs::path other = b / entry.path().filename();
    if (!fs::exists(other)) return {false, describe(entry.path().filename(), " missing from the second run")};
    if (slurp(entry.path()) != slurp(other)) return {false, describe(entry.path().filename(), " differs between runs")};
    ++files;
  }
  return {true, describe(files, " output files byte-identical across two runs of generate, train, sparsify (6 "
                                "methods), detect (3 algorithms), bench, ablate")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string cli;
  std::string workdir = (fs::temp_directory_path() / "gsgan_acceptance").string();
  app.add_option("--cli", cli, "path to the gsgan executable")->required();
  app.add_option("--workdir", workdir, "scratch directory");
  app.add_option("--only", g_only, "run criteria whose name contains one of these");
  CLI11_PARSE(app, argc, argv);

  try {
    fs::create_directories(workdir);
    run("scoring oracle", scoring_oracle);
    run("ARI oracle", ari_oracle);
    run("betweenness oracle", betweenness_oracle);
    run("gradient check", gradient_check);
    run("assembly", assembly);
    if (selected("training smoke") || selected("ablation ordering")) {
      std::cerr << "[acceptance] training smoke and ablation ordering ..." << std::endl;
      smoke_and_ablation();
    }
    run("artificial-edge effect", artificial_edges);
    run("timing direction", timing_direction);
    run("CLI determinism", [&] { return cli_determinism(cli, workdir); });
  } catch (const std::exception& e) {
    std::cerr << "acceptance runner crashed: " << e.what() << '\n';
    return 1;
  }
  std::cout << g_failed << " criteria failed" << std::endl;
  return 0;
}
