#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "rfront/corpus.hpp"
#include "rfront/partition.hpp"

namespace rfront {

struct SynthFront {
  std::size_t size = 0;
  int first_year = 0;
  int last_year = 0;
  std::vector<std::string> theme_terms;
};

struct SynthConfig {
  std::vector<SynthFront> fronts;
  double p_in = 1.0;
  double p_out = 0.02;
  double pa_strength = 1.0;
  double refs_per_paper = 5.0;
  double theme_fraction = 0.6;
  std::size_t abstract_length = 40;
  std::uint64_t seed = 1;
};

/// Planted front (1-based, in config order) of every generated record.
struct GroundTruth {
  std::vector<std::string> uids;
  std::vector<int> labels;
  std::vector<int> years;
  std::map<int, int> peak_years;

  Partition as_partition() const;
};

/// Throws std::invalid_argument when the config breaks its invariants.
void validate(const SynthConfig& cfg);

/// Papers are created in year order and cite earlier papers with weight
/// (indegree + 1)^pa_strength times p_in (same front) or p_out.
std::pair<std::vector<RawRecord>, GroundTruth> generate_records(const SynthConfig& cfg);
std::pair<Corpus, GroundTruth> generate_corpus(const SynthConfig& cfg);

/// Ten theme terms per front for up to eight fronts, then generated ones.
std::vector<std::string> default_theme_terms(std::size_t front_index);
const std::vector<std::string>& background_vocabulary();

/// The three-front configuration used by the end-to-end checks.
SynthConfig three_front_config(std::uint64_t seed = 7);

void write_ground_truth_csv(std::ostream& out, const GroundTruth& truth);

struct NmiResult {
  double value = 0.0;
  std::size_t compared = 0;  // nodes labelled in both
  std::size_t excluded = 0;  // noise in either, or present in only one
};

/// Normalized mutual information, arithmetic-mean normalization, over nodes
/// labelled (non-noise) in both partitions. Throws DataError if there are
/// none.
NmiResult nmi(const Partition& a, const Partition& b);

}  // namespace rfront
