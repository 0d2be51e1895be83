#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "rfront/citation_graph.hpp"
#include "rfront/corpus.hpp"
#include "rfront/partition.hpp"

namespace rfront {

using Stopwords = std::unordered_set<std::string>;

std::string_view bundled_stopwords();
/// One word per line; blank lines and '#' comments are skipped.
Stopwords parse_stopwords(std::string_view text);
const Stopwords& default_stopwords();

/// Lowercases, splits on anything outside [a-z0-9-], drops tokens shorter
/// than three characters, pure numbers and stopwords.
std::vector<std::string> tokenize(std::string_view text, const Stopwords& stop = default_stopwords());

/// 2x2 table of a term inside a front against the rest of the corpus.
struct Contingency {
  std::int64_t term_front = 0;   // k11
  std::int64_t term_rest = 0;    // k12
  std::int64_t other_front = 0;  // k21
  std::int64_t other_rest = 0;   // k22
};

/// Dunning log-likelihood ratio G^2, negated when the term is relatively
/// rarer inside the front than outside. Exactly 0 for proportional rows.
double signed_llr(const Contingency& t);
/// Pearson chi-square with the same sign convention.
double signed_chi2(const Contingency& t);

enum class TermStatistic { llr, chi2 };

struct TermScore {
  std::string term;
  int front = 0;
  double score = 0.0;
  std::size_t k_front = 0;
  std::size_t k_rest = 0;
};

struct TermOptions {
  std::size_t top_k = 10;
  TermStatistic statistic = TermStatistic::llr;
  const Stopwords* stopwords = nullptr;  // null: bundled list
};

/// Top over-represented abstract terms per front, ties broken
/// alphabetically. Only non-noise partitioned records contribute tokens.
/// Fronts without tokens are skipped and reported in `skipped`.
std::map<int, std::vector<TermScore>> score_terms(const Corpus& corpus, const Partition& p,
                                                  const TermOptions& opt,
                                                  std::vector<int>* skipped = nullptr);

/// Front members by indegree in `graph` (descending), then earlier year,
/// then uid.
std::vector<std::string> top_cited(const CitationGraph& graph, const Partition& p, int front,
                                   std::size_t n);

void write_terms_csv(std::ostream& out, const std::map<int, std::vector<TermScore>>& terms,
                     const Partition& p);
void write_terms_json(std::ostream& out, const std::map<int, std::vector<TermScore>>& terms,
                      const Partition& p);
void write_top_cited_csv(std::ostream& out, const CitationGraph& graph, const Corpus& corpus,
                         const Partition& p, std::size_t n);

}  // namespace rfront
