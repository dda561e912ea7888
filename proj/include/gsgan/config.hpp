#pragma once

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "gsgan/community.hpp"
#include "gsgan/graph.hpp"
#include "gsgan/pipeline.hpp"
#include "gsgan/sbm.hpp"
#include "gsgan/training.hpp"

namespace gsgan {

inline constexpr const char* kSeedEnvVar = "GSGAN_SEED";

inline std::string_view to_string(DecodeMode m) { return m == DecodeMode::Argmax ? "argmax" : "sample"; }
inline std::string_view to_string(GrowthMode m) { return m == GrowthMode::Argmax ? "argmax" : "sample"; }

inline DecodeMode parse_decode_mode(std::string_view s) {
  if (s == "argmax") return DecodeMode::Argmax;
  if (s == "sample") return DecodeMode::Sample;
  throw InputError("unknown decode mode '" + std::string(s) + "'");
}

inline GrowthMode parse_growth_mode(std::string_view s) {
  if (s == "argmax") return GrowthMode::Argmax;
  if (s == "sample") return GrowthMode::Sample;
  throw InputError("unknown growth mode '" + std::string(s) + "'");
}

namespace detail {

/// Shortest representation that reads back to the same double.
inline std::string format_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(std::string_view s, std::string_view key) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw InputError("'" + std::string(key) + "': not a number: '" + std::string(s) + "'");
  return v;
}

inline std::uint64_t parse_uint(std::string_view s, std::string_view key) {
  std::uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw InputError("'" + std::string(key) + "': not a non-negative integer: '" + std::string(s) + "'");
  return v;
}

inline bool parse_switch(std::string_view s, std::string_view key) {
  if (s == "on" || s == "true" || s == "1") return true;
  if (s == "off" || s == "false" || s == "0") return false;
  throw InputError("'" + std::string(key) + "': expected on/off, got '" + std::string(s) + "'");
}

inline std::string format_switch(bool b) { return b ? "on" : "off"; }

inline std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    auto item = trim(s.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    s = s.substr(comma + 1);
  }
  return out;
}

template <class T, class F>
std::string join(const std::vector<T>& items, F&& fmt) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += fmt(items[i]);
  }
  return out;
}

template <class Config>
struct Binding {
  std::string key;
  std::function<void(Config&, std::string_view)> set;
  std::function<std::string(const Config&)> get;
};

/// Applies `key=value` lines; '#' starts a comment line.
template <class Config>
void apply_lines(std::istream& in, Config& cfg, const std::vector<Binding<Config>>& bindings,
                 const std::string& origin) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw InputError(origin + ":" + std::to_string(lineno) + ": expected key=value");
    const auto key = trim(body.substr(0, eq));
    const auto value = trim(body.substr(eq + 1));
    bool found = false;
    for (const auto& b : bindings) {
      if (b.key != key) continue;
      b.set(cfg, value);
      found = true;
      break;
    }
    if (!found) throw InputError(origin + ":" + std::to_string(lineno) + ": unknown key '" + std::string(key) + "'");
  }
}

template <class Config>
void write_lines(std::ostream& out, const Config& cfg, const std::vector<Binding<Config>>& bindings,
                 std::string_view prefix = "") {
  for (const auto& b : bindings) out << prefix << b.key << '=' << b.get(cfg) << '\n';
}

}  // namespace detail

/// key=value bindings of every TrainingConfig field.
inline const std::vector<detail::Binding<TrainingConfig>>& training_bindings() {
  using B = detail::Binding<TrainingConfig>;
  auto size_field = [](std::string_view key, std::size_t TrainingConfig::*f) {
    return B{std::string(key), [f, key](TrainingConfig& c, std::string_view v) { c.*f = detail::parse_uint(v, key); },
             [f](const TrainingConfig& c) { return std::to_string(c.*f); }};
  };
  auto real_field = [](std::string_view key, double TrainingConfig::*f) {
    return B{std::string(key), [f, key](TrainingConfig& c, std::string_view v) { c.*f = detail::parse_double(v, key); },
             [f](const TrainingConfig& c) { return detail::format_double(c.*f); }};
  };
  auto switch_field = [](std::string_view key, bool TrainingConfig::*f) {
    return B{std::string(key), [f, key](TrainingConfig& c, std::string_view v) { c.*f = detail::parse_switch(v, key); },
             [f](const TrainingConfig& c) { return detail::format_switch(c.*f); }};
  };
  static const std::vector<B> bindings = {
      size_field("batch_size", &TrainingConfig::batch_size),
      real_field("learning_rate", &TrainingConfig::learning_rate),
      size_field("critic_steps", &TrainingConfig::critic_steps),
      real_field("clip", &TrainingConfig::clip),
      size_field("iterations", &TrainingConfig::iterations),
      size_field("walk_length", &TrainingConfig::walk_length),
      size_field("latent_dim", &TrainingConfig::latent_dim),
      size_field("embed_dim", &TrainingConfig::embed_dim),
      size_field("hidden_dim", &TrainingConfig::hidden_dim),
      B{"reward", [](TrainingConfig& c, std::string_view v) { c.reward = parse_reward_kind(v); },
        [](const TrainingConfig& c) { return std::string(to_string(c.reward)); }},
      B{"gate", [](TrainingConfig& c, std::string_view v) { c.gate = parse_gate_mode(v); },
        [](const TrainingConfig& c) { return std::string(to_string(c.gate)); }},
      switch_field("reward_baseline", &TrainingConfig::reward_baseline),
      switch_field("normalize_reward", &TrainingConfig::normalize_reward),
      real_field("rmsprop_decay", &TrainingConfig::rmsprop_decay),
      B{"seed", [](TrainingConfig& c, std::string_view v) { c.seed = detail::parse_uint(v, "seed"); },
        [](const TrainingConfig& c) { return std::to_string(c.seed); }},
  };
  return bindings;
}

/// One experiment grid: dataset, sparsifiers, ratios, detection algorithms
/// and replicate seeds.
struct ExperimentConfig {
  std::string dataset = "sbm";
  std::string input;   // edge list; empty selects the planted-partition generator
  std::string labels;  // ground truth for `input`
  SBMSpec sbm;
  double withhold = 0.0;  // fraction of intra-block SBM edges removed before sparsifying
  std::vector<double> ratios{20, 10, 5, 1};
  std::vector<Method> methods{Method::GSGAN, Method::JC, Method::BC, Method::RAND, Method::LSPAR, Method::LD};
  std::vector<Variant> variants;
  std::vector<DetectionAlgorithm> algorithms{DetectionAlgorithm::Louvain, DetectionAlgorithm::LabelPropagation,
                                             DetectionAlgorithm::Greedy};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::uint64_t seed = 1;  // every stream of every cell derives from this
  GsganSettings gsgan;
  bool timing = false;  // detection seconds are left blank when off, keeping outputs byte-stable

  void validate() const {
    if (ratios.empty()) throw InputError("at least one ratio is required");
    for (double r : ratios)
      if (!(r > 0.0 && r <= 100.0)) throw InputError("ratios must lie in (0, 100]");
    if (methods.empty() && variants.empty()) throw InputError("at least one method or variant is required");
    for (Method m : methods)
      if (m == Method::ORIGINAL) throw InputError("ORIGINAL is the standard line and is always included");
    if (algorithms.empty()) throw InputError("at least one detection algorithm is required");
    if (seeds.empty()) throw InputError("at least one seed is required");
    if (!(withhold >= 0.0 && withhold < 1.0)) throw InputError("withhold must lie in [0, 1)");
    if (withhold > 0.0 && !input.empty()) throw InputError("withhold applies to the planted-partition dataset only");
    if (!input.empty() && labels.empty()) throw InputError("an input graph needs a labels file");
    sbm.validate();
    gsgan.training.validate();
  }
};

inline const std::vector<detail::Binding<ExperimentConfig>>& experiment_bindings() {
  using B = detail::Binding<ExperimentConfig>;
  using C = ExperimentConfig;
  static const std::vector<B> bindings = [] {
    std::vector<B> b = {
        B{"seed", [](C& c, std::string_view v) { c.seed = detail::parse_uint(v, "seed"); },
          [](const C& c) { return std::to_string(c.seed); }},
        B{"dataset", [](C& c, std::string_view v) { c.dataset = std::string(v); },
          [](const C& c) { return c.dataset; }},
        B{"input", [](C& c, std::string_view v) { c.input = std::string(v); }, [](const C& c) { return c.input; }},
        B{"labels", [](C& c, std::string_view v) { c.labels = std::string(v); }, [](const C& c) { return c.labels; }},
        B{"sbm.blocks",
          [](C& c, std::string_view v) {
            c.sbm.block_sizes.clear();
            for (auto s : detail::split_list(v)) c.sbm.block_sizes.push_back(detail::parse_uint(s, "sbm.blocks"));
          },
          [](const C& c) { return detail::join(c.sbm.block_sizes, [](std::size_t s) { return std::to_string(s); }); }},
        B{"sbm.p_in", [](C& c, std::string_view v) { c.sbm.p_in = detail::parse_double(v, "sbm.p_in"); },
          [](const C& c) { return detail::format_double(c.sbm.p_in); }},
        B{"sbm.p_out", [](C& c, std::string_view v) { c.sbm.p_out = detail::parse_double(v, "sbm.p_out"); },
          [](const C& c) { return detail::format_double(c.sbm.p_out); }},
        B{"sbm.withhold", [](C& c, std::string_view v) { c.withhold = detail::parse_double(v, "sbm.withhold"); },
          [](const C& c) { return detail::format_double(c.withhold); }},
        B{"ratios",
          [](C& c, std::string_view v) {
            c.ratios.clear();
            for (auto s : detail::split_list(v)) c.ratios.push_back(detail::parse_double(s, "ratios"));
          },
          [](const C& c) { return detail::join(c.ratios, detail::format_double); }},
        B{"methods",
          [](C& c, std::string_view v) {
            c.methods.clear();
            for (auto s : detail::split_list(v)) c.methods.push_back(parse_method(s));
          },
          [](const C& c) { return detail::join(c.methods, [](Method m) { return std::string(to_string(m)); }); }},
        B{"variants",
          [](C& c, std::string_view v) {
            c.variants.clear();
            for (auto s : detail::split_list(v)) c.variants.push_back(parse_variant(s));
          },
          [](const C& c) { return detail::join(c.variants, [](Variant x) { return std::string(to_string(x)); }); }},
        B{"algorithms",
          [](C& c, std::string_view v) {
            c.algorithms.clear();
            for (auto s : detail::split_list(v)) c.algorithms.push_back(parse_detection_algorithm(s));
          },
          [](const C& c) {
            return detail::join(c.algorithms, [](DetectionAlgorithm a) { return std::string(to_string(a)); });
          }},
        B{"seeds",
          [](C& c, std::string_view v) {
            c.seeds.clear();
            for (auto s : detail::split_list(v)) c.seeds.push_back(detail::parse_uint(s, "seeds"));
          },
          [](const C& c) { return detail::join(c.seeds, [](std::uint64_t s) { return std::to_string(s); }); }},
        B{"artificial_edges",
          [](C& c, std::string_view v) { c.gsgan.artificial_edges = detail::parse_switch(v, "artificial_edges"); },
          [](const C& c) { return detail::format_switch(c.gsgan.artificial_edges); }},
        B{"timing", [](C& c, std::string_view v) { c.timing = detail::parse_switch(v, "timing"); },
          [](const C& c) { return detail::format_switch(c.timing); }},
        B{"walks.corpus",
          [](C& c, std::string_view v) { c.gsgan.corpus_size = detail::parse_uint(v, "walks.corpus"); },
          [](const C& c) { return std::to_string(c.gsgan.corpus_size); }},
        B{"walks.generated",
          [](C& c, std::string_view v) { c.gsgan.generated_walks = detail::parse_uint(v, "walks.generated"); },
          [](const C& c) { return std::to_string(c.gsgan.generated_walks); }},
        B{"decode", [](C& c, std::string_view v) { c.gsgan.decode = parse_decode_mode(v); },
          [](const C& c) { return std::string(to_string(c.gsgan.decode)); }},
        B{"growth", [](C& c, std::string_view v) { c.gsgan.growth = parse_growth_mode(v); },
          [](const C& c) { return std::string(to_string(c.gsgan.growth)); }},
    };
    for (const auto& t : training_bindings()) {
      if (t.key == "seed") continue;  // training seeds derive from the top-level seed
      b.push_back(B{"training." + t.key, [set = t.set](C& c, std::string_view v) { set(c.gsgan.training, v); },
                    [get = t.get](const C& c) { return get(c.gsgan.training); }});
    }
    return b;
  }();
  return bindings;
}

/// Reads a flat key=value config over the defaults.
inline ExperimentConfig parse_experiment_config(std::istream& in, const std::string& origin = "config") {
  ExperimentConfig cfg;
  detail::apply_lines(in, cfg, experiment_bindings(), origin);
  return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config file '" + path + "'");
  return parse_experiment_config(in, path);
}

inline void write_experiment_config(std::ostream& out, const ExperimentConfig& cfg) {
  detail::write_lines(out, cfg, experiment_bindings());
}

/// Top-level seed from the environment, if set.
inline std::optional<std::uint64_t> seed_from_env() {
  const char* v = std::getenv(kSeedEnvVar);
  if (!v || !*v) return std::nullopt;
  return detail::parse_uint(detail::trim(v), kSeedEnvVar);
}

}  // namespace gsgan
