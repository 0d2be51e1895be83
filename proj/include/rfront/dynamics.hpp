#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "rfront/corpus.hpp"
#include "rfront/partition.hpp"

namespace rfront {

/// Papers per year for each front.
struct FrontDynamics {
  std::map<int, std::map<int, std::size_t>> counts;  // front -> year -> papers
  std::map<int, int> peaks;                          // front -> peak year
  std::size_t missing_year_count = 0;
  std::size_t noise_count = 0;
};

struct YearPeriod {
  int start;
  int end;  // inclusive
};

struct PeakInfo {
  int year;
  std::optional<std::size_t> period;  // index into the period list
};

/// Throws DataError if the partition names a uid absent from the corpus.
FrontDynamics yearly_counts(const Corpus& corpus, const Partition& p);

/// Most productive year per front; ties go to the earliest year.
int peak_year(const std::map<int, std::size_t>& per_year);

/// Throws std::invalid_argument when periods overlap, are descending or
/// have start > end.
std::map<int, PeakInfo> peak_summary(const FrontDynamics& d, const std::vector<YearPeriod>& periods);

/// Parses "1990-1991,1996-1998".
std::vector<YearPeriod> parse_periods(const std::string& text);

/// Rows are years from the first to the last observed year, columns are
/// fronts by id.
void write_dynamics_csv(std::ostream& out, const FrontDynamics& d, const Partition& p);
void write_peaks_json(std::ostream& out, const FrontDynamics& d, const Partition& p,
                      const std::vector<YearPeriod>& periods);

}  // namespace rfront
