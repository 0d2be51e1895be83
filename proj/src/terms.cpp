#include "rfront/terms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include <json.hpp>

#include "rfront/kernels.hpp"

namespace rfront {

namespace {

bool token_char(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-'; }

// E * ((1 + x) ln(1 + x) - x) with x = (O - E) / E. Each term is
// nonnegative and the four sum to G^2 / 2, so nothing cancels.
double divergence(double expected, double x) {
  if (expected == 0.0) return 0.0;
  if (x <= -1.0) return expected;
  double f;
  if (std::abs(x) < 0.1) {
    f = 0.0;
    double power = x;
    for (int k = 2; k < 40; ++k) {
      power *= -x;
      const double term = power / (k * (k - 1.0));
      f += term;
      if (std::abs(term) <= 1e-18 * std::abs(f)) break;
    }
    f = -f;
  } else {
    f = (1.0 + x) * std::log1p(x) - x;
  }
  return expected * f;
}

// +1 over-represented in the front, -1 under-represented, 0 proportional.
int direction(const Contingency& t) {
  const __int128 front_total = t.term_front + t.other_front;
  const __int128 rest_total = t.term_rest + t.other_rest;
  const __int128 lhs = static_cast<__int128>(t.term_front) * rest_total;
  const __int128 rhs = static_cast<__int128>(t.term_rest) * front_total;
  if (front_total == 0 || rest_total == 0 || lhs == rhs) return 0;
  return lhs > rhs ? 1 : -1;
}

std::string format_score(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

Stopwords parse_stopwords(std::string_view text) {
  Stopwords out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
    if (!line.empty() && line.front() != '#') {
      std::string word(line);
      for (char& c : word) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      out.insert(std::move(word));
    }
    pos = end + 1;
  }
  return out;
}

const Stopwords& default_stopwords() {
  static const Stopwords words = parse_stopwords(bundled_stopwords());
  return words;
}

std::vector<std::string> tokenize(std::string_view text, const Stopwords& stop) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (cur.size() >= 3 && !std::all_of(cur.begin(), cur.end(), [](char c) { return c >= '0' && c <= '9'; }) &&
        !stop.contains(cur))
      out.push_back(cur);
    cur.clear();
  };
  for (char raw : text) {
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(raw)));
    if (token_char(c))
      cur += c;
    else
      flush();
  }
  flush();
  return out;
}

double signed_llr(const Contingency& t) {
  const int dir = direction(t);
  if (dir == 0) return 0.0;
  using i128 = __int128;
  const i128 a = t.term_front, b = t.term_rest, c = t.other_front, d = t.other_rest;
  const i128 n = a + b + c + d;
  // O - E is +-(ad - bc)/n in every cell
  const i128 det = a * d - b * c;
  const i128 margins[4] = {(a + b) * (a + c), (a + b) * (b + d), (c + d) * (a + c), (c + d) * (b + d)};
  const int sign[4] = {1, -1, -1, 1};
  double g2 = 0.0;
  for (int i = 0; i < 4; ++i) {
    if (margins[i] == 0) continue;
    const double expected = static_cast<double>(margins[i]) / static_cast<double>(n);
    const double x = sign[i] * static_cast<double>(det) / static_cast<double>(margins[i]);
    g2 += divergence(expected, x);
  }
  return dir * 2.0 * g2;
}

double signed_chi2(const Contingency& t) {
  const int dir = direction(t);
  if (dir == 0) return 0.0;
  const double a = static_cast<double>(t.term_front), b = static_cast<double>(t.term_rest);
  const double c = static_cast<double>(t.other_front), d = static_cast<double>(t.other_rest);
  const double n = a + b + c + d;
  const double diff = a * d - b * c;
  const double denom = (a + b) * (c + d) * (a + c) * (b + d);
  if (denom == 0.0) return 0.0;
  return dir * n * diff * diff / denom;
}

std::map<int, std::vector<TermScore>> score_terms(const Corpus& corpus, const Partition& p,
                                                  const TermOptions& opt, std::vector<int>* skipped) {
  if (opt.top_k == 0) throw std::invalid_argument("top_k must be at least 1");
  const Stopwords& stop = opt.stopwords ? *opt.stopwords : default_stopwords();
  const auto front_of = p.lookup();

  const std::size_t k = p.fronts.size();
  std::vector<std::unordered_map<std::string, std::int64_t>> per_front(k + 1);
  std::vector<std::int64_t> front_total(k + 1, 0);
  std::unordered_map<std::string, std::int64_t> global;
  std::int64_t total = 0;
  for (const auto& r : corpus.records) {
    auto it = front_of.find(r.uid);
    if (it == front_of.end() || it->second == kNoise || r.abstract.empty()) continue;
    const auto f = static_cast<std::size_t>(it->second);
    for (auto& tok : tokenize(r.abstract, stop)) {
      ++front_total[f];
      ++total;
      ++global[tok];
      ++per_front[f][std::move(tok)];
    }
  }

  std::map<int, std::vector<TermScore>> out;
  for (std::size_t f = 1; f <= k; ++f) {
    if (front_total[f] == 0) {
      if (skipped) skipped->push_back(static_cast<int>(f));
      continue;
    }
    std::vector<TermScore> scores;
    std::vector<Contingency> tables;
    scores.reserve(per_front[f].size());
    tables.reserve(per_front[f].size());
    for (const auto& [term, count] : per_front[f]) {
      const std::int64_t rest = global[term] - count;
      tables.push_back({count, rest, front_total[f] - count, (total - front_total[f]) - rest});
      scores.push_back({term, static_cast<int>(f), 0.0, static_cast<std::size_t>(count),
                        static_cast<std::size_t>(rest)});
    }
    std::vector<double> values(tables.size());
    if (opt.statistic == TermStatistic::llr)
      kernels::llr_omp(tables, values);
    else
      for (std::size_t i = 0; i < tables.size(); ++i) values[i] = signed_chi2(tables[i]);
    for (std::size_t i = 0; i < scores.size(); ++i) scores[i].score = values[i];

    std::erase_if(scores, [](const TermScore& s) { return !(s.score > 0.0); });
    std::sort(scores.begin(), scores.end(), [](const TermScore& a, const TermScore& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.term < b.term;
    });
    if (scores.size() > opt.top_k) scores.resize(opt.top_k);
    out.emplace(static_cast<int>(f), std::move(scores));
  }
  return out;
}

std::vector<std::string> top_cited(const CitationGraph& graph, const Partition& p, int front,
                                   std::size_t n) {
  if (!p.front(front)) throw std::invalid_argument("unknown front " + std::to_string(front));
  struct Entry {
    std::size_t indegree;
    std::optional<int> year;
    const std::string* uid;
  };
  std::vector<Entry> members;
  for (std::size_t i = 0; i < p.uids.size(); ++i) {
    if (p.assignment[i] != front) continue;
    auto v = graph.find(p.uids[i]);
    if (!v) throw DataError("front member '" + p.uids[i] + "' is not in the graph");
    members.push_back({graph.indegree(*v), graph.year(*v), &p.uids[i]});
  }
  std::sort(members.begin(), members.end(), [](const Entry& a, const Entry& b) {
    if (a.indegree != b.indegree) return a.indegree > b.indegree;
    if (a.year != b.year) {
      if (!a.year) return false;
      if (!b.year) return true;
      return *a.year < *b.year;
    }
    return *a.uid < *b.uid;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < members.size() && i < n; ++i) out.push_back(*members[i].uid);
  return out;
}

void write_terms_csv(std::ostream& out, const std::map<int, std::vector<TermScore>>& terms,
                     const Partition& p) {
  out << "front,rank,term,score,k_front,k_rest\n";
  for (const auto& [f, list] : terms)
    for (std::size_t i = 0; i < list.size(); ++i)
      out << p.front(f)->label << ',' << i + 1 << ',' << csv_field(list[i].term) << ','
          << format_score(list[i].score) << ',' << list[i].k_front << ',' << list[i].k_rest << '\n';
}

void write_terms_json(std::ostream& out, const std::map<int, std::vector<TermScore>>& terms,
                      const Partition& p) {
  using nlohmann::ordered_json;
  ordered_json doc = ordered_json::array();
  for (const auto& [f, list] : terms) {
    ordered_json entry;
    entry["front"] = p.front(f)->label;
    entry["terms"] = ordered_json::array();
    for (const auto& s : list)
      entry["terms"].push_back(
          {{"term", s.term}, {"score", s.score}, {"k_front", s.k_front}, {"k_rest", s.k_rest}});
    doc.push_back(std::move(entry));
  }
  out << doc.dump(2) << '\n';
}

void write_top_cited_csv(std::ostream& out, const CitationGraph& graph, const Corpus& corpus,
                         const Partition& p, std::size_t n) {
  std::unordered_map<std::string_view, const RawRecord*> by_uid;
  for (const auto& r : corpus.records) by_uid.emplace(r.uid, &r);
  out << "front,rank,uid,indegree,year,title\n";
  for (const auto& f : p.fronts) {
    const auto top = top_cited(graph, p, f.id, n);
    for (std::size_t i = 0; i < top.size(); ++i) {
      const auto v = *graph.find(top[i]);
      auto it = by_uid.find(top[i]);
      out << f.label << ',' << i + 1 << ',' << csv_field(top[i]) << ',' << graph.indegree(v) << ',';
      if (auto y = graph.year(v)) out << *y;
      out << ',' << (it != by_uid.end() ? csv_field(it->second->title) : std::string()) << '\n';
    }
  }
}

}  // namespace rfront
