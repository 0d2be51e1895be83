#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rfront/citation_graph.hpp"
#include "rfront/corpus.hpp"
#include "rfront/dynamics.hpp"

namespace rfront {

struct PipelineConfig {
  std::string input;
  std::string format = "lines";
  std::size_t k_min = 28;
  std::size_t min_internal_edges = 100;
  std::size_t min_weight = 500;
  bool fallback = true;
  std::string periods = "1990-1991,1996-1998,2004-2007";
  std::size_t top_k = 10;
  std::size_t top_n = 5;
  std::uint64_t seed = 1;
  std::size_t iterations = 300;
  std::string out_dir = "rfront_out";
  int threads = 0;
  std::string stopwords;  // empty: bundled list
  std::string statistic = "llr";
};

/// Key/description pairs for every configuration field, in file order.
const std::vector<std::pair<std::string, std::string>>& config_keys();

/// Applies one `key=value` setting. Throws std::invalid_argument on an
/// unknown key or a bad value.
void set_config_value(PipelineConfig& cfg, const std::string& key, const std::string& value);

/// Reads a flat `key=value` file; '#' starts a comment.
PipelineConfig read_config_file(const std::string& path);

void validate(const PipelineConfig& cfg);

class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& cause, bool data_error = false)
      : std::runtime_error("stage '" + stage + "' failed: " + cause),
        stage_(std::move(stage)),
        data_error_(data_error) {}
  const std::string& stage() const { return stage_; }
  /// The stage failed because its input data was bad.
  bool data_error() const { return data_error_; }

 private:
  std::string stage_;
  bool data_error_;
};

struct Artifact {
  std::string kind;
  std::string file;  // relative to out_dir
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct PipelineResult {
  std::vector<Artifact> artifacts;
  std::filesystem::path manifest;
};

/// Resolution counts followed by graph statistics of the full graph and of
/// its giant component.
void write_corpus_stats(std::ostream& out, const Corpus& corpus, const CitationGraph& graph,
                        const CitationGraph& giant);

/// Runs every stage and writes the artifact bundle plus `manifest.json`.
/// On failure the files written so far are removed and StageError thrown.
PipelineResult run_pipeline(const PipelineConfig& cfg);

std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace rfront
