#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gsgan/config.hpp"
#include "gsgan/critic.hpp"
#include "gsgan/generator.hpp"
#include "gsgan/training.hpp"

namespace gsgan {

inline constexpr std::string_view kCheckpointMagic = "gsgan-model";
inline constexpr int kCheckpointVersion = 1;

// Layout:
//   gsgan-model 1
//   dims <nodes> <latent> <embed> <hidden> <walk_length>
//   config            (key=value lines of the training config)
//   end
//   generator <blocks>
//   block <name> <rows> <cols>   followed by one line per row
//   ...
//   critic <blocks>
//   ...
// Values are written in shortest round-trip form, so a reload is bit-exact.

namespace detail {

template <class Params>
void write_blocks(std::ostream& out, std::string_view section, const Params& params) {
  auto blocks = const_cast<Params&>(params).blocks();
  out << section << ' ' << blocks.size() << '\n';
  for (const auto& b : blocks) {
    const Matrix& m = *b.value;
    out << "block " << b.name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (c) out << ' ';
        out << format_double(m(r, c));
      }
      out << '\n';
    }
  }
}

inline std::string expect_line(std::istream& in, std::string_view what) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("checkpoint truncated: expected " + std::string(what));
  return line;
}

template <class Params>
void read_blocks(std::istream& in, std::string_view section, Params& params) {
  std::istringstream head(expect_line(in, section));
  std::string name;
  std::size_t count = 0;
  head >> name >> count;
  auto blocks = params.blocks();
  if (name != section || count != blocks.size())
    throw InputError("checkpoint: expected section '" + std::string(section) + "' with " +
                     std::to_string(blocks.size()) + " blocks");
  for (auto& b : blocks) {
    std::istringstream bh(expect_line(in, "block header"));
    std::string tag;
    std::string block_name;
    Eigen::Index rows = -1;
    Eigen::Index cols = -1;
    bh >> tag >> block_name >> rows >> cols;
    if (tag != "block" || block_name != b.name || rows != b.value->rows() || cols != b.value->cols())
      throw InputError("checkpoint: block '" + block_name + "' does not match " + std::string(section) + "." +
                       std::string(b.name) + " (" + std::to_string(b.value->rows()) + "x" +
                       std::to_string(b.value->cols()) + ")");
    for (Eigen::Index r = 0; r < rows; ++r) {
      const auto toks = split_ws(expect_line(in, "matrix row"));
      if (static_cast<Eigen::Index>(toks.size()) != cols)
        throw InputError("checkpoint: row of " + std::string(b.name) + " has " + std::to_string(toks.size()) +
                         " values, expected " + std::to_string(cols));
      for (Eigen::Index c = 0; c < cols; ++c) (*b.value)(r, c) = parse_double(toks[static_cast<std::size_t>(c)], b.name);
    }
  }
}

}  // namespace detail

inline void write_checkpoint(std::ostream& out, const TrainedModel& model) {
  const ModelDims& d = model.generator.dims;
  out << kCheckpointMagic << ' ' << kCheckpointVersion << '\n';
  out << "dims " << d.node_count << ' ' << d.latent_dim << ' ' << d.embed_dim << ' ' << d.hidden_dim << ' '
      << d.walk_length << '\n';
  out << "config\n";
  detail::write_lines(out, model.config, training_bindings());
  out << "end\n";
  detail::write_blocks(out, "generator", model.generator);
  detail::write_blocks(out, "critic", model.critic);
}

/// Parameters and training config; statistics are not part of a checkpoint.
inline TrainedModel read_checkpoint(std::istream& in) {
  {
    std::istringstream head(detail::expect_line(in, "header"));
    std::string magic;
    int version = 0;
    head >> magic >> version;
    if (magic != kCheckpointMagic) throw InputError("not a model checkpoint");
    if (version != kCheckpointVersion)
      throw InputError("unsupported checkpoint version " + std::to_string(version));
  }
  ModelDims dims;
  {
    std::istringstream dl(detail::expect_line(in, "dims"));
    std::string tag;
    dl >> tag >> dims.node_count >> dims.latent_dim >> dims.embed_dim >> dims.hidden_dim >> dims.walk_length;
    if (tag != "dims" || !dl) throw InputError("checkpoint: malformed dims line");
  }
  if (detail::expect_line(in, "config") != "config") throw InputError("checkpoint: missing config section");
  std::stringstream cfg_text;
  for (std::string line = detail::expect_line(in, "config entry"); line != "end";
       line = detail::expect_line(in, "config entry"))
    cfg_text << line << '\n';

  TrainedModel model;
  detail::apply_lines(cfg_text, model.config, training_bindings(), "checkpoint config");
  if (!(model.config.dims(dims.node_count) == dims)) throw InputError("checkpoint: dims disagree with config");
  model.generator = GeneratorParams(dims);
  model.critic = DiscriminatorParams(dims);
  detail::read_blocks(in, "generator", model.generator);
  detail::read_blocks(in, "critic", model.critic);
  return model;
}

inline void save_checkpoint(const std::string& path, const TrainedModel& model) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write checkpoint '" + path + "'");
  write_checkpoint(out, model);
  if (!out) throw InputError("failed writing checkpoint '" + path + "'");
}

inline TrainedModel load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read checkpoint '" + path + "'");
  return read_checkpoint(in);
}

}  // namespace gsgan
