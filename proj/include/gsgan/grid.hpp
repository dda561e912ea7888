#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "gsgan/community.hpp"
#include "gsgan/config.hpp"
#include "gsgan/graph.hpp"
#include "gsgan/partition.hpp"
#include "gsgan/pipeline.hpp"
#include "gsgan/sbm.hpp"

namespace gsgan {

inline constexpr std::string_view kNoVariant = "-";

struct ResultRow {
  std::string dataset;
  std::string method;
  std::string variant;
  double ratio = 0.0;
  std::string algorithm;
  std::uint64_t seed = 0;
  double ari = 0.0;
  double modularity = 0.0;  // of the detected partition, measured on the input graph
  std::optional<double> seconds;
  std::size_t edge_count = 0;
  std::size_t artificial_edges = 0;
  std::string error;  // nonempty marks a failed cell

  bool failed() const { return !error.empty(); }

  auto key() const { return std::tie(dataset, method, variant, ratio, algorithm, seed); }
};

/// Input graph and ground truth of one replicate.
struct Dataset {
  Graph graph;
  Partition truth;
  NodeRelabeling relabeling;
};

/// Seed of replicate `rep`; every stream of its cells derives from it.
inline std::uint64_t replicate_seed(const ExperimentConfig& cfg, std::uint64_t rep) {
  return substream_seed(cfg.seed, rep);
}

inline Dataset load_dataset(const ExperimentConfig& cfg, std::uint64_t rep) {
  Dataset ds;
  if (!cfg.input.empty()) {
    auto loaded = load_edge_list(cfg.input);
    ds.relabeling = std::move(loaded.relabeling);
    ds.truth = load_labels(cfg.labels, ds.relabeling);
    ds.graph = with_node_count(loaded.graph, ds.relabeling.size());
    return ds;
  }
  const std::uint64_t seed = replicate_seed(cfg, rep);
  SBMSpec spec = cfg.sbm;
  spec.seed = substream_seed(seed, "dataset");
  auto lg = sbm_generate(spec);
  ds.graph = cfg.withhold > 0.0 ? withhold_intra_edges(lg, cfg.withhold, substream_seed(seed, "withhold"))
                                : std::move(lg.graph);
  ds.truth = std::move(lg.truth);
  ds.relabeling = NodeRelabeling::identity(ds.graph.node_count());
  return ds;
}

/// Sparsifier entries of a grid: baselines first, then adversarial variants.
/// Method GSGAN stands for the full variant.
struct GridEntry {
  Method method;
  std::optional<Variant> variant;

  std::string variant_name() const { return variant ? std::string(to_string(*variant)) : std::string(kNoVariant); }
};

inline std::vector<GridEntry> grid_entries(const ExperimentConfig& cfg) {
  std::vector<GridEntry> out;
  std::vector<Variant> variants;
  for (Method m : cfg.methods) {
    if (m == Method::GSGAN)
      variants.push_back(Variant::Full);
    else
      out.push_back({m, std::nullopt});
  }
  for (Variant v : cfg.variants) variants.push_back(v);
  std::sort(variants.begin(), variants.end());
  variants.erase(std::unique(variants.begin(), variants.end()), variants.end());
  for (Variant v : variants) out.push_back({Method::GSGAN, v});
  return out;
}

using GridProgress = std::function<void(const ResultRow&)>;

namespace detail {

inline std::uint64_t detection_seed(std::uint64_t rep_seed, DetectionAlgorithm a) {
  return substream_seed(substream_seed(rep_seed, "detection"), to_string(a));
}

inline ResultRow evaluate_cell(const ExperimentConfig& cfg, const Dataset& ds, const Graph& sparsified,
                               DetectionAlgorithm algo, std::uint64_t rep) {
  ResultRow row;
  const std::uint64_t seed = detection_seed(replicate_seed(cfg, rep), algo);
  auto [partition, secs] = timed([&] { return detect(sparsified, algo, seed); });
  row.ari = ari(partition, ds.truth);
  row.modularity = modularity(ds.graph, partition);
  if (cfg.timing) row.seconds = secs;
  row.edge_count = sparsified.edge_count();
  row.artificial_edges = count_artificial_edges(sparsified, ds.graph);
  return row;
}

inline std::string one_line(std::string s) {
  std::replace_if(s.begin(), s.end(), [](char c) { return c == ',' || c == '\n' || c == '\r' || c == '"'; }, ' ');
  return s;
}

}  // namespace detail

/// Every (sparsifier, ratio, algorithm, seed) cell plus one standard-line
/// row (ORIGINAL, ratio 100) per (algorithm, seed). A failing cell becomes
/// an error row; the grid continues. Rows come back sorted.
inline std::vector<ResultRow> run_grid(const ExperimentConfig& cfg, const GridProgress& progress = {}) {
  cfg.validate();
  std::vector<ResultRow> rows;
  auto emit = [&](ResultRow row) {
    if (progress) progress(row);
    rows.push_back(std::move(row));
  };
  const auto entries = grid_entries(cfg);

  for (std::uint64_t rep : cfg.seeds) {
    const std::uint64_t rep_seed = replicate_seed(cfg, rep);
    auto stamp = [&](ResultRow row, std::string method, std::string variant, double ratio,
                     DetectionAlgorithm algo) {
      row.dataset = cfg.dataset;
      row.method = std::move(method);
      row.variant = std::move(variant);
      row.ratio = ratio;
      row.algorithm = std::string(to_string(algo));
      row.seed = rep;
      return row;
    };
    auto fail_all = [&](const std::string& method, const std::string& variant, const std::vector<double>& ratios,
                        const std::string& what) {
      for (double r : ratios)
        for (auto algo : cfg.algorithms) {
          ResultRow row;
          row.error = detail::one_line(what);
          emit(stamp(std::move(row), method, variant, r, algo));
        }
    };

    Dataset ds;
    try {
      ds = load_dataset(cfg, rep);
    } catch (const std::exception& e) {
      fail_all("ORIGINAL", std::string(kNoVariant), {100.0}, e.what());
      for (const auto& entry : entries)
        fail_all(std::string(to_string(entry.method)), entry.variant_name(), cfg.ratios, e.what());
      continue;
    }

    for (auto algo : cfg.algorithms)
      emit(stamp(detail::evaluate_cell(cfg, ds, ds.graph, algo, rep), "ORIGINAL", std::string(kNoVariant), 100.0,
                 algo));

    for (const auto& entry : entries) {
      const std::string method(to_string(entry.method));
      const std::string variant = entry.variant_name();
      std::optional<ScoreMatrix> scores;
      if (entry.variant) {
        try {
          auto model = train_variant(ds.graph, cfg.gsgan, *entry.variant, rep_seed);
          scores = generated_scores(ds.graph, model.generator, cfg.gsgan, rep_seed);
        } catch (const std::exception& e) {
          fail_all(method, variant, cfg.ratios, e.what());
          continue;
        }
      }
      for (double r : cfg.ratios) {
        std::optional<Graph> sparsified;
        std::string failure;
        try {
          const std::size_t d = AssemblyBudget::from_ratio(r, ds.graph.edge_count()).edges;
          sparsified = scores ? assemble_sparsified(ds.graph, *scores, cfg.gsgan, d, rep_seed).graph
                              : sparsify_baseline(ds.graph, entry.method, d, rep_seed);
        } catch (const std::exception& e) {
          failure = e.what();
        }
        for (auto algo : cfg.algorithms) {
          ResultRow row;
          if (sparsified) {
            try {
              row = detail::evaluate_cell(cfg, ds, *sparsified, algo, rep);
            } catch (const std::exception& e) {
              row = ResultRow{};
              row.error = detail::one_line(e.what());
            }
          } else {
            row.error = detail::one_line(failure);
          }
          emit(stamp(std::move(row), method, variant, r, algo));
        }
      }
    }
  }
  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) { return a.key() < b.key(); });
  return rows;
}

inline constexpr std::string_view kResultHeader =
    "dataset,method,variant,ratio,algorithm,seed,ari,modularity,detection_seconds,edge_count,artificial_edges,error";

inline void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultHeader << '\n';
  for (const auto& r : rows) {
    out << r.dataset << ',' << r.method << ',' << r.variant << ',' << detail::format_double(r.ratio) << ','
        << r.algorithm << ',' << r.seed << ',';
    if (r.failed()) {
      out << ",,,,," << r.error << '\n';
      continue;
    }
    out << detail::format_double(r.ari) << ',' << detail::format_double(r.modularity) << ','
        << (r.seconds ? detail::format_double(*r.seconds) : std::string()) << ',' << r.edge_count << ','
        << r.artificial_edges << ",\n";
  }
}

/// Median of each metric over the seeds of a (dataset, method, variant,
/// ratio, algorithm) group, one metric per line. Error rows are skipped.
inline void write_summary_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  using Group = std::tuple<std::string, std::string, std::string, double, std::string>;
  std::map<Group, std::vector<const ResultRow*>> groups;
  for (const auto& r : rows)
    if (!r.failed()) groups[{r.dataset, r.method, r.variant, r.ratio, r.algorithm}].push_back(&r);
  out << "dataset,method,variant,ratio,algorithm,metric,median,runs\n";
  for (const auto& [g, members] : groups) {
    auto line = [&](std::string_view metric, auto&& get) {
      std::vector<double> v;
      for (const auto* r : members) v.push_back(get(*r));
      out << std::get<0>(g) << ',' << std::get<1>(g) << ',' << std::get<2>(g) << ','
          << detail::format_double(std::get<3>(g)) << ',' << std::get<4>(g) << ',' << metric << ','
          << detail::format_double(median(v)) << ',' << members.size() << '\n';
    };
    line("ari", [](const ResultRow& r) { return r.ari; });
    line("modularity", [](const ResultRow& r) { return r.modularity; });
    if (members.front()->seconds) line("detection_seconds", [](const ResultRow& r) { return r.seconds.value_or(0.0); });
    line("edge_count", [](const ResultRow& r) { return static_cast<double>(r.edge_count); });
    line("artificial_edges", [](const ResultRow& r) { return static_cast<double>(r.artificial_edges); });
  }
}

/// Median ARI of one (method, variant, ratio, algorithm) group over seeds;
/// nullopt when every cell failed or none exists.
inline std::optional<double> median_ari(const std::vector<ResultRow>& rows, std::string_view method,
                                        std::string_view variant, double ratio, DetectionAlgorithm algo) {
  std::vector<double> v;
  for (const auto& r : rows)
    if (!r.failed() && r.method == method && r.variant == variant && r.ratio == ratio &&
        r.algorithm == to_string(algo))
      v.push_back(r.ari);
  if (v.empty()) return std::nullopt;
  return median(v);
}

}  // namespace gsgan
