#include "rfront/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "rfront/dynamics.hpp"

namespace rfront {

namespace {

// Engine output is fixed by the standard; the std distributions are not,
// so sampling is done by hand to keep corpora identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
  }
  std::size_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 30.0) {
      const double limit = std::exp(-mean);
      std::size_t k = 0;
      double p = uniform();
      while (p > limit) {
        ++k;
        p *= uniform();
      }
      return k;
    }
    const double u1 = std::max(uniform(), 1e-300), u2 = uniform();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    return static_cast<std::size_t>(std::max(0.0, std::round(mean + std::sqrt(mean) * z)));
  }

 private:
  std::mt19937_64 engine_;
};

class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0.0), value_(n, 0.0) {}

  void set(std::size_t i, double w) {
    const double delta = w - value_[i];
    value_[i] = w;
    total_ += delta;
    for (std::size_t k = i + 1; k < tree_.size(); k += k & (~k + 1)) tree_[k] += delta;
  }
  double total() const { return total_; }
  double value(std::size_t i) const { return value_[i]; }

  // Smallest index whose prefix sum exceeds `target`, skipping zero weights.
  std::size_t find(double target) const {
    std::size_t pos = 0;
    std::size_t step = 1;
    while (step * 2 < tree_.size()) step *= 2;
    for (; step > 0; step /= 2) {
      if (pos + step < tree_.size() && tree_[pos + step] <= target) {
        pos += step;
        target -= tree_[pos];
      }
    }
    // Rounding can land on a zero-weight slot; walk to a live one.
    std::size_t i = std::min(pos, value_.size() - 1);
    for (std::size_t j = i; j < value_.size(); ++j)
      if (value_[j] > 0.0) return j;
    for (std::size_t j = i; j-- > 0;)
      if (value_[j] > 0.0) return j;
    return i;
  }

 private:
  std::vector<double> tree_;
  std::vector<double> value_;
  double total_ = 0.0;
};

const std::vector<std::vector<std::string>>& theme_bank() {
  static const std::vector<std::vector<std::string>> bank = {
      {"zidovudine", "perinatal", "maternal", "infant", "prophylaxis", "breastfeeding", "vertical",
       "pregnancy", "newborn", "delivery"},
      {"protease", "inhibitor", "resistance", "mutation", "regimen", "nucleoside", "efavirenz",
       "adherence", "genotype", "salvage"},
      {"nucleocapsid", "isolate", "envelope", "glycoprotein", "tropism", "coreceptor", "ccr5",
       "cxcr4", "neutralizing", "virion"},
      {"vaccine", "immunogenicity", "adjuvant", "epitope", "antibody", "priming", "boosting",
       "macaque", "challenge", "recombinant"},
      {"microbicide", "circumcision", "heterosexual", "condom", "serodiscordant", "partner",
       "incidence", "prevention", "behavioral", "sexual"},
      {"tuberculosis", "pneumocystis", "opportunistic", "coinfection", "mycobacterium",
       "cryptococcal", "toxoplasmosis", "candidiasis", "prophylactic", "sputum"},
      {"reservoir", "latency", "integrase", "provirus", "quiescent", "eradication", "intensification",
       "persistence", "memory", "decay"},
      {"lymphoma", "kaposi", "sarcoma", "herpesvirus", "malignancy", "tumor", "neoplasm", "carcinoma",
       "oncogenic", "lesion"},
  };
  return bank;
}

std::string pad(std::size_t i, int width) {
  std::string s = std::to_string(i);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return s;
}

}  // namespace

std::vector<std::string> default_theme_terms(std::size_t front_index) {
  const auto& bank = theme_bank();
  if (front_index < bank.size()) return bank[front_index];
  std::vector<std::string> out;
  for (int i = 0; i < 10; ++i)
    out.push_back("theme" + std::to_string(front_index + 1) + "term" + std::to_string(i + 1));
  return out;
}

const std::vector<std::string>& background_vocabulary() {
  static const std::vector<std::string> words = {
      "patients",    "study",       "results",      "analysis",    "clinical",     "data",
      "group",       "observed",    "significant",  "increased",   "associated",   "levels",
      "response",    "compared",    "method",       "sample",      "population",   "effect",
      "factors",     "higher",      "lower",        "reported",    "evidence",     "findings",
      "cases",       "risk",        "rate",         "rates",       "years",        "months",
      "follow-up",   "baseline",    "median",       "mean",        "range",        "total",
      "number",      "positive",    "negative",     "infected",    "infection",    "virus",
      "human",       "disease",     "cell",         "cells",       "expression",   "activity",
      "specific",    "role",        "function",     "model",       "system",       "protein",
      "gene",        "detected",    "measured",     "assay",       "test",         "testing",
      "performed",   "based",       "report",       "present",     "suggest",      "indicate",
      "important",   "potential",   "novel",        "new",         "previous",     "current",
      "recent",      "common",      "different",    "similar",     "large",        "small",
      "high",        "low",         "early",        "late",        "long-term",    "short-term",
      "primary",     "secondary",   "major",        "minor",       "overall",      "individual",
      "united",      "states",      "countries",    "health",      "care",         "public",
      "research",    "investigated", "examined",    "identified",  "determined",   "evaluated",
      "demonstrated", "shown",      "found",        "including",   "related",      "outcomes",
      "relative",    "variables",   "independent",  "multiple",    "single",       "time",
  };
  return words;
}

Partition GroundTruth::as_partition() const {
  Partition p;
  p.uids = uids;
  p.assignment = labels;
  const int k = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end());
  for (int id = 1; id <= k; ++id) p.fronts.push_back({id, std::to_string(id), 0, 0});
  for (int l : labels)
    if (l > 0) ++p.fronts[static_cast<std::size_t>(l) - 1].nodes;
  return p;
}

void validate(const SynthConfig& cfg) {
  if (cfg.fronts.empty()) throw std::invalid_argument("synthetic config needs at least one front");
  for (const auto& f : cfg.fronts) {
    if (f.size < 1) throw std::invalid_argument("front size must be at least 1");
    if (f.first_year > f.last_year) throw std::invalid_argument("front year range is reversed");
    if (f.first_year < kMinYear || f.last_year > kMaxYear)
      throw std::invalid_argument("front years outside [1800, 2100]");
    if (f.theme_terms.empty()) throw std::invalid_argument("front needs theme terms");
  }
  if (!(cfg.p_out >= 0.0 && cfg.p_out <= cfg.p_in && cfg.p_in <= 1.0))
    throw std::invalid_argument("need 0 <= p_out <= p_in <= 1");
  if (!(cfg.refs_per_paper >= 0.0)) throw std::invalid_argument("refs_per_paper must be >= 0");
  if (!(cfg.pa_strength >= 0.0)) throw std::invalid_argument("pa_strength must be >= 0");
  if (!(cfg.theme_fraction >= 0.0 && cfg.theme_fraction <= 1.0))
    throw std::invalid_argument("theme_fraction must lie in [0, 1]");
}

std::pair<std::vector<RawRecord>, GroundTruth> generate_records(const SynthConfig& cfg) {
  validate(cfg);
  Rng rng(cfg.seed);

  struct Paper {
    int year;
    std::size_t front;
    std::size_t local;  // index within the front, in creation order
  };
  std::vector<Paper> papers;
  for (std::size_t f = 0; f < cfg.fronts.size(); ++f) {
    const auto& fr = cfg.fronts[f];
    const auto span = static_cast<double>(fr.last_year - fr.first_year + 1);
    for (std::size_t i = 0; i < fr.size; ++i) {
      // triangular wave over the active range
      const double u = 0.5 * (rng.uniform() + rng.uniform());
      const int year = fr.first_year + std::min(static_cast<int>(u * span), fr.last_year - fr.first_year);
      papers.push_back({year, f, 0});
    }
  }
  std::stable_sort(papers.begin(), papers.end(), [](const Paper& a, const Paper& b) {
    if (a.year != b.year) return a.year < b.year;
    return a.front < b.front;
  });
  std::vector<std::size_t> front_count(cfg.fronts.size(), 0);
  for (auto& p : papers) p.local = front_count[p.front]++;

  const std::size_t n = papers.size();
  const int width = std::max<int>(6, static_cast<int>(std::to_string(n).size()));
  std::vector<std::string> uids(n), dois(n);
  std::vector<std::vector<std::size_t>> members(cfg.fronts.size());  // local -> global
  for (std::size_t i = 0; i < n; ++i) {
    uids[i] = "SYN" + pad(i + 1, width);
    dois[i] = "10.5555/syn." + pad(i + 1, width);
    members[papers[i].front].push_back(i);
  }

  std::vector<Fenwick> weights;
  for (std::size_t f = 0; f < cfg.fronts.size(); ++f) weights.emplace_back(members[f].size());
  std::vector<std::size_t> indegree(n, 0);
  auto attach_weight = [&](std::size_t i) {
    return std::pow(static_cast<double>(indegree[i] + 1), cfg.pa_strength);
  };

  const auto& background = background_vocabulary();
  std::vector<RawRecord> records(n);
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& paper = papers[i];
    const auto& front = cfg.fronts[paper.front];
    RawRecord& r = records[i];
    r.uid = uids[i];
    r.year = paper.year;
    r.doi = dois[i];
    r.authors = {"Author" + pad(i + 1, width) + ", X"};
    r.source = "SYNTHETIC FRONT " + std::to_string(paper.front + 1);
    r.volume = std::to_string(paper.year - 1900);
    r.page = std::to_string(i + 1);
    r.title = "Synthetic study of " + front.theme_terms[rng.below(front.theme_terms.size())] + " and " +
              front.theme_terms[rng.below(front.theme_terms.size())];
    for (std::size_t t = 0; t < cfg.abstract_length; ++t) {
      if (!r.abstract.empty()) r.abstract += ' ';
      if (rng.uniform() < cfg.theme_fraction)
        r.abstract += front.theme_terms[rng.below(front.theme_terms.size())];
      else
        r.abstract += background[rng.below(background.size())];
    }

    const std::size_t wanted = std::min(rng.poisson(cfg.refs_per_paper), i);
    chosen.clear();
    while (chosen.size() < wanted) {
      double total = 0.0;
      std::vector<double> mass(cfg.fronts.size());
      for (std::size_t f = 0; f < cfg.fronts.size(); ++f) {
        const double factor = f == paper.front ? cfg.p_in : cfg.p_out;
        mass[f] = std::max(0.0, weights[f].total()) * factor;
        total += mass[f];
      }
      if (!(total > 0.0)) break;  // nothing citable left: truncate
      double pick = rng.uniform() * total;
      std::size_t f = 0;
      while (f + 1 < mass.size() && (pick >= mass[f] || mass[f] == 0.0)) {
        pick -= mass[f];
        ++f;
      }
      if (mass[f] == 0.0) break;
      const double factor = f == paper.front ? cfg.p_in : cfg.p_out;
      const std::size_t local = weights[f].find(pick / factor);
      if (weights[f].value(local) <= 0.0) break;
      const std::size_t target = members[f][local];
      weights[f].set(local, 0.0);  // no repeats within one paper
      chosen.push_back(target);
    }
    for (std::size_t target : chosen) {
      ++indegree[target];
      const auto& tr = records[target];
      r.cited_refs.push_back(tr.authors.front().substr(0, tr.authors.front().find(',')) + " X, " +
                             std::to_string(*tr.year) + ", " + tr.source + ", V" + *tr.volume + ", P" +
                             *tr.page + ", DOI " + *tr.doi);
      weights[papers[target].front].set(papers[target].local, attach_weight(target));
    }
    weights[paper.front].set(paper.local, attach_weight(i));
  }

  GroundTruth truth;
  truth.uids = uids;
  truth.labels.resize(n);
  truth.years.resize(n);
  std::vector<std::map<int, std::size_t>> per_year(cfg.fronts.size());
  for (std::size_t i = 0; i < n; ++i) {
    truth.labels[i] = static_cast<int>(papers[i].front) + 1;
    truth.years[i] = papers[i].year;
    ++per_year[papers[i].front][papers[i].year];
  }
  for (std::size_t f = 0; f < cfg.fronts.size(); ++f)
    truth.peak_years[static_cast<int>(f) + 1] = peak_year(per_year[f]);
  return {std::move(records), std::move(truth)};
}

std::pair<Corpus, GroundTruth> generate_corpus(const SynthConfig& cfg) {
  auto [records, truth] = generate_records(cfg);
  return {resolve_citations(std::move(records)), std::move(truth)};
}

SynthConfig three_front_config(std::uint64_t seed) {
  SynthConfig cfg;
  cfg.fronts = {{300, 1985, 1992, default_theme_terms(0)},
                {250, 1993, 2000, default_theme_terms(1)},
                {200, 2001, 2008, default_theme_terms(2)}};
  cfg.p_in = 1.0;
  cfg.p_out = 0.02;
  cfg.pa_strength = 1.0;
  cfg.refs_per_paper = 5.0;
  cfg.seed = seed;
  return cfg;
}

void write_ground_truth_csv(std::ostream& out, const GroundTruth& truth) {
  out << "uid,front,year\n";
  for (std::size_t i = 0; i < truth.uids.size(); ++i)
    out << truth.uids[i] << ',' << truth.labels[i] << ',' << truth.years[i] << '\n';
}

NmiResult nmi(const Partition& a, const Partition& b) {
  const auto lb = b.lookup();
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> ca, cb;
  NmiResult res;
  std::size_t shared = 0;
  for (std::size_t i = 0; i < a.uids.size(); ++i) {
    auto it = lb.find(a.uids[i]);
    if (it != lb.end()) ++shared;
    if (it == lb.end() || a.assignment[i] == kNoise || it->second == kNoise) {
      ++res.excluded;
      continue;
    }
    ++joint[{a.assignment[i], it->second}];
    ++ca[a.assignment[i]];
    ++cb[it->second];
    ++res.compared;
  }
  res.excluded += b.uids.size() - shared;
  if (res.compared == 0) throw DataError("partitions share no labelled nodes");

  const auto total = static_cast<double>(res.compared);
  auto entropy = [&](const std::map<int, double>& counts) {
    double h = 0.0;
    for (const auto& [l, c] : counts) h -= (c / total) * std::log(c / total);
    return h;
  };
  const double ha = entropy(ca), hb = entropy(cb);
  if (ha == 0.0 || hb == 0.0) {
    res.value = (ha == 0.0 && hb == 0.0) ? 1.0 : 0.0;
    return res;
  }
  double mi = 0.0;
  for (const auto& [key, c] : joint)
    mi += (c / total) * std::log(c * total / (ca[key.first] * cb[key.second]));
  res.value = std::clamp(2.0 * mi / (ha + hb), 0.0, 1.0);
  return res;
}

}  // namespace rfront
