#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "rfront/citation_graph.hpp"
#include "rfront/powerlaw.hpp"
#include "rfront/synth.hpp"

using namespace rfront;

namespace {

Partition labelled(std::vector<int> labels) {
  Partition p;
  for (std::size_t i = 0; i < labels.size(); ++i) p.uids.push_back("u" + std::to_string(i));
  p.assignment = std::move(labels);
  return p;
}

SynthConfig small(std::uint64_t seed) {
  SynthConfig c;
  c.seed = seed;
  for (std::size_t f = 0; f < 3; ++f)
    c.fronts.push_back({50, 1990 + 3 * static_cast<int>(f), 1995 + 3 * static_cast<int>(f),
                        default_theme_terms(f)});
  return c;
}

SynthConfig single_front(std::uint64_t seed, std::size_t n) {
  SynthConfig c;
  c.seed = seed;
  c.fronts = {{n, 1980, 2009, default_theme_terms(0)}};
  return c;
}

}  // namespace

TEST_CASE("three fronts of fifty") {
  auto [corpus, truth] = generate_corpus(small(1));
  CHECK(corpus.records.size() == 150);
  CHECK(truth.uids.size() == 150);
  std::map<int, int> sizes;
  for (int l : truth.labels) ++sizes[l];
  CHECK(sizes == std::map<int, int>{{1, 50}, {2, 50}, {3, 50}});
  const auto cfg = small(1);
  for (std::size_t i = 0; i < truth.uids.size(); ++i) {
    const auto& f = cfg.fronts[static_cast<std::size_t>(truth.labels[i] - 1)];
    CHECK(truth.years[i] >= f.first_year);
    CHECK(truth.years[i] <= f.last_year);
  }
  auto p = truth.as_partition();
  CHECK(p.fronts.size() == 3);
}

TEST_CASE("generation is deterministic") {
  auto a = generate_records(small(5));
  auto b = generate_records(small(5));
  CHECK(a.first == b.first);
  CHECK(a.second.labels == b.second.labels);
  auto c = generate_records(small(6));
  CHECK_FALSE(a.first == c.first);
}

TEST_CASE("generated corpora keep corpus invariants") {
  std::mt19937_64 rng(40);
  for (int trial = 0; trial < 30; ++trial) {
    SynthConfig cfg;
    cfg.seed = rng();
    const int k = 1 + static_cast<int>(rng() % 4);
    for (int f = 0; f < k; ++f) {
      const int start = 1980 + static_cast<int>(rng() % 20);
      cfg.fronts.push_back({1 + rng() % 60, start, start + static_cast<int>(rng() % 6),
                            default_theme_terms(static_cast<std::size_t>(f))});
    }
    cfg.p_in = 0.5 + 0.5 * double(rng() % 100) / 100.0;
    cfg.p_out = cfg.p_in * double(rng() % 100) / 100.0;
    cfg.refs_per_paper = double(rng() % 12);
    cfg.pa_strength = double(rng() % 3);
    auto [corpus, truth] = generate_corpus(cfg);
    std::set<std::string> uids;
    std::map<std::string, int> year;
    for (const auto& r : corpus.records) {
      CHECK(uids.insert(r.uid).second);
      year[r.uid] = *r.year;
    }
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& l : corpus.links) {
      CHECK(l.citing != l.cited);
      CHECK(uids.contains(l.cited));
      CHECK(year[l.cited] <= year[l.citing]);
      CHECK(seen.insert({l.citing, l.cited}).second);
    }
    // every generated reference resolves
    CHECK(corpus.unresolved_count == 0);
    CHECK(truth.uids.size() == corpus.records.size());
  }
}

TEST_CASE("config validation") {
  auto c = small(1);
  c.p_out = 2.0;
  CHECK_THROWS(validate(c));
  c = small(1);
  c.fronts[0].size = 0;
  CHECK_THROWS(validate(c));
  c = small(1);
  c.refs_per_paper = -1;
  CHECK_THROWS(validate(c));
  c = small(1);
  c.fronts[1].first_year = 2100;
  CHECK_THROWS(validate(c));
}

TEST_CASE("themed abstracts") {
  auto [corpus, truth] = generate_corpus(small(2));
  const auto theme = default_theme_terms(0);
  std::set<std::string> words(theme.begin(), theme.end());
  std::size_t hits = 0, total = 0;
  for (std::size_t i = 0; i < corpus.records.size(); ++i) {
    if (truth.labels[i] != 1) continue;
    std::istringstream in(corpus.records[i].abstract);
    for (std::string w; in >> w; ++total) hits += words.contains(w);
  }
  const double share = double(hits) / double(total);
  CHECK(share > 0.5);
  CHECK(share < 0.7);
  CHECK(default_theme_terms(20).size() == 10);
}

TEST_CASE("preferential attachment produces a heavy tail") {
  // tail exponent by discrete maximum likelihood; the +1-smoothed Price
  // model with five references per paper predicts 2 + 1/5
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto [corpus, truth] = generate_corpus(single_front(seed, 20000));
    auto g = build_graph(corpus);
    double s = 0.0;
    std::size_t n = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (g.indegree(v) < 10) continue;
      s += std::log((double(g.indegree(v)) + 1.0) / 10.5);
      ++n;
    }
    const double gamma = 1.0 + double(n) / s;
    CHECK(gamma > 1.95);
    CHECK(gamma < 2.45);
  }
}

TEST_CASE("fitted exponent of a 5000-paper corpus") {
  // bound frozen from 20 seeds of this generator (observed -0.93..-0.88)
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto [corpus, truth] = generate_corpus(single_front(seed, 5000));
    auto fit = fit_power_law(indegree_histogram(build_graph(corpus)));
    CHECK(fit.b >= -1.05);
    CHECK(fit.b <= -0.75);
  }
}

TEST_CASE("nmi reference values") {
  CHECK(nmi(labelled({1, 1, 2, 2}), labelled({1, 1, 2, 2})).value == doctest::Approx(1.0));
  CHECK(nmi(labelled({1, 1, 2, 2}), labelled({2, 2, 1, 1})).value == doctest::Approx(1.0));
  CHECK(nmi(labelled({1, 1, 1, 1}), labelled({1, 2, 3, 4})).value == 0.0);
  CHECK(nmi(labelled({1, 1, 1}), labelled({4, 4, 4})).value == 1.0);

  // hand computation for [1,1,2,2] vs [1,2,2,2]
  const double hx = std::log(2.0);
  const double hy = -(0.25 * std::log(0.25) + 0.75 * std::log(0.75));
  const double hxy = -(0.25 * std::log(0.25) * 2 + 0.5 * std::log(0.5));
  const double want = (hx + hy - hxy) / ((hx + hy) / 2.0);
  auto r = nmi(labelled({1, 1, 2, 2}), labelled({1, 2, 2, 2}));
  CHECK(r.value == doctest::Approx(want).epsilon(1e-12));
  CHECK(r.value == doctest::Approx(0.34371).epsilon(1e-4));
  CHECK(r.compared == 4);

  auto noise = nmi(labelled({1, 1, 2, kNoise}), labelled({1, 1, 2, 2}));
  CHECK(noise.compared == 3);
  CHECK(noise.excluded == 1);

  Partition other;
  other.uids = {"zz"};
  other.assignment = {1};
  CHECK_THROWS_AS(nmi(labelled({1, 2}), other), DataError);
}

TEST_CASE("nmi symmetry and identity") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 40;
    std::vector<int> a(n), b(n);
    for (auto& x : a) x = static_cast<int>(rng() % 5);
    for (auto& x : b) x = 1 + static_cast<int>(rng() % 4);
    auto pa = labelled(a), pb = labelled(b);
    bool any = false;
    for (int x : a) any |= x != kNoise;
    if (!any) continue;
    CHECK(nmi(pa, pb).value == doctest::Approx(nmi(pb, pa).value).epsilon(1e-12));
    const double v = nmi(pa, pb).value;
    CHECK(v >= 0.0);
    CHECK(v <= 1.0 + 1e-12);
    std::set<int> distinct(b.begin(), b.end());
    if (distinct.size() >= 2) CHECK(nmi(pb, pb).value == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("ground truth csv") {
  auto [corpus, truth] = generate_corpus(small(3));
  std::ostringstream out;
  write_ground_truth_csv(out, truth);
  const std::string s = out.str();
  CHECK(s.rfind("uid,front,year\nSYN", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 151);
}
