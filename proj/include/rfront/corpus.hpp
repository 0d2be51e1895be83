#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rfront/error.hpp"

namespace rfront {

/// One bibliographic record as it appears in an export file.
struct RawRecord {
  std::string uid;
  std::string title;
  std::string abstract;
  std::optional<int> year;
  std::vector<std::string> authors;
  std::string source;
  std::optional<std::string> doi;
  std::vector<std::string> cited_refs;
  // Not part of every export; used for the composite citation key when
  // the record has no DOI.
  std::optional<std::string> volume;
  std::optional<std::string> page;

  bool operator==(const RawRecord&) const = default;
};

enum class RecordFormat { tagged, lines };

RecordFormat parse_format(std::string_view name);

struct CitationLink {
  std::string citing;
  std::string cited;

  auto operator<=>(const CitationLink&) const = default;
};

/// How every cited-reference string of a corpus was classified.
struct ResolutionStats {
  std::size_t total_refs = 0;
  std::size_t resolved = 0;    // produced a link
  std::size_t duplicate = 0;   // matched a link already produced by the same record
  std::size_t self = 0;        // matched the citing record itself
  std::size_t no_key = 0;      // no key could be extracted
  std::size_t unmatched = 0;   // key matched no record
  std::size_t ambiguous = 0;   // key matched more than one record
};

struct Corpus {
  std::vector<RawRecord> records;
  std::vector<CitationLink> links;  // sorted by (citing, cited)
  std::size_t unresolved_count = 0;
  ResolutionStats stats;
};

inline constexpr int kMinYear = 1800;
inline constexpr int kMaxYear = 2100;

std::vector<RawRecord> parse_records(std::string_view input, RecordFormat format);
std::vector<RawRecord> parse_records(std::istream& in, RecordFormat format);
std::vector<RawRecord> read_records_file(const std::string& path, RecordFormat format);

void write_lines(std::ostream& out, const std::vector<RawRecord>& records);
void write_tagged(std::ostream& out, const std::vector<RawRecord>& records);

/// Normalized matching key: `doi:<doi>` or `author|year|source|volume|page`.
std::optional<std::string> citation_key(std::string_view reference);
std::optional<std::string> citation_key(const RawRecord& record);

/// Matches every cited reference against the corpus by exact key. Key
/// extraction runs in parallel; the output does not depend on thread count.
Corpus resolve_citations(std::vector<RawRecord> records);

}  // namespace rfront
