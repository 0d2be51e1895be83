#include <doctest.h>

#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "rfront/citation_graph.hpp"
#include "rfront/modularity.hpp"
#include "test_graphs.hpp"

using namespace rfront;
using rfront::testing::make_graph;
using rfront::testing::random_graph;

TEST_CASE("build_graph copies records and links") {
  Corpus c;
  for (const char* uid : {"A", "B", "C"}) {
    RawRecord r;
    r.uid = uid;
    r.year = 1990;
    c.records.push_back(r);
  }
  c.links = {{"B", "A"}, {"C", "A"}};
  auto g = build_graph(c);
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.year(0) == 1990);
  CHECK(g.indegree(*g.find("A")) == 2);
  CHECK(build_graph(Corpus{}).empty());

  c.links.push_back({"C", "Z"});
  CHECK_THROWS_AS(build_graph(c), DataError);
}

TEST_CASE("graph construction enforces its invariants") {
  CHECK_THROWS(make_graph(2, {{0, 0}}));
  CHECK_THROWS(make_graph(2, {{0, 1}, {0, 1}}));
  CHECK_THROWS(make_graph(2, {{0, 2}}));
  CHECK_THROWS(CitationGraph({"a", "a"}, {std::nullopt, std::nullopt}, {}));
}

TEST_CASE("largest weak component") {
  // sizes {3, 2}
  auto g = make_graph(5, {{0, 1}, {2, 1}, {3, 4}});
  auto res = largest_component(g);
  CHECK(res.giant.node_count() == 3);
  CHECK(res.giant.edge_count() == 2);
  CHECK(res.component_sizes == std::vector<std::size_t>{3, 2});

  auto chain = make_graph(3, {{0, 1}, {1, 2}});
  auto same = largest_component(chain);
  CHECK(same.giant.uids() == chain.uids());
  CHECK(std::equal(same.giant.edges().begin(), same.giant.edges().end(), chain.edges().begin(),
                   chain.edges().end()));

  auto empty = largest_component(CitationGraph{});
  CHECK(empty.giant.empty());
  CHECK(empty.component_sizes.empty());
}

TEST_CASE("component ties go to the smallest uid") {
  CitationGraph g({"m", "n", "b", "c"}, std::vector<std::optional<int>>(4), {{0, 1}, {2, 3}});
  auto res = largest_component(g);
  CHECK(res.giant.uids() == std::vector<std::string>{"b", "c"});
}

TEST_CASE("indegree histogram") {
  auto star = make_graph(5, {{1, 0}, {2, 0}, {3, 0}, {4, 0}});
  auto h = indegree_histogram(star);
  CHECK(h.bins == std::map<std::size_t, std::size_t>{{0, 4}, {4, 1}});
  auto chain = make_graph(3, {{0, 1}, {1, 2}});
  CHECK(indegree_histogram(chain).bins == std::map<std::size_t, std::size_t>{{0, 1}, {1, 2}});
  auto e = indegree_histogram(CitationGraph{});
  CHECK(e.bins.empty());
  CHECK(e.n_nodes == 0);

  std::ostringstream csv;
  write_histogram_csv(csv, h);
  CHECK(csv.str() == "degree,count\n0,4\n4,1\n");
}

TEST_CASE("extract_core") {
  auto star = make_graph(5, {{1, 0}, {2, 0}, {3, 0}, {4, 0}});
  auto all = extract_core(star, 0);
  CHECK(all.node_count() == 5);
  CHECK(all.edge_count() == 4);
  auto core = extract_core(star, 1);
  CHECK(core.node_count() == 1);
  CHECK(core.edge_count() == 0);

  // thresholds use the input graph's indegree, once
  auto g = make_graph(4, {{0, 1}, {1, 2}, {3, 2}});
  auto c = extract_core(g, 1);
  CHECK(c.uids() == std::vector<std::string>{"n1", "n2"});
  CHECK(c.edge_count() == 1);
}

TEST_CASE("graph invariants on random graphs") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = random_graph(rng, 1 + rng() % 40, 0.08);
    auto comp = weak_components(g);
    auto res = largest_component(g);
    CHECK(std::accumulate(res.component_sizes.begin(), res.component_sizes.end(), std::size_t{0}) ==
          g.node_count());
    // every edge stays inside one component
    for (const auto& e : g.edges()) CHECK(comp[e.citing] == comp[e.cited]);

    auto h = indegree_histogram(g);
    std::size_t nodes = 0, edges = 0;
    for (auto [d, c] : h.bins) {
      CHECK(c >= 1);
      nodes += c;
      edges += d * c;
    }
    CHECK(nodes == g.node_count());
    CHECK(edges == g.edge_count());

    std::size_t k1 = rng() % 4, k2 = k1 + rng() % 4;
    auto c1 = extract_core(g, k1), c2 = extract_core(g, k2);
    std::set<std::string> s1(c1.uids().begin(), c1.uids().end());
    for (const auto& u : c2.uids()) CHECK(s1.contains(u));
  }
}

namespace {

Partition labels_over(const CitationGraph& g, std::vector<int> labels) {
  return make_partition(project_undirected(g), std::move(labels));
}

}  // namespace

TEST_CASE("quotient weights and threshold") {
  // fronts {0,1} and {2,3}; three cross edges
  auto g = make_graph(4, {{0, 1}, {0, 2}, {3, 1}, {2, 0}, {2, 3}});
  auto p = labels_over(g, {1, 1, 2, 2});
  auto q = quotient(g, p, 2, false);
  REQUIRE(q.edges.size() == 1);
  CHECK(q.edges[0].a == 1);
  CHECK(q.edges[0].b == 2);
  CHECK(q.edges[0].weight == 3);
  CHECK(q.edges[0].retained);
  CHECK(q.intra_weights.at(1) == 1);
  CHECK(q.intra_weights.at(2) == 1);
}

TEST_CASE("quotient fallback keeps a lonely front's heaviest edge") {
  auto g = make_graph(4, {{0, 1}, {1, 2}, {2, 3}});
  auto p = labels_over(g, {1, 1, 2, 2});
  auto without = quotient(g, p, 5, false);
  REQUIRE(without.edges.size() == 1);
  CHECK_FALSE(without.edges[0].retained);
  auto with = quotient(g, p, 5, true);
  CHECK(with.edges[0].retained);
  CHECK(with.edges[0].fallback);
}

TEST_CASE("quotient with only intra-front edges") {
  auto g = make_graph(4, {{0, 1}, {2, 3}, {3, 2}});
  auto p = labels_over(g, {1, 1, 2, 2});
  auto q = quotient(g, p, 1, true);
  CHECK(q.edges.empty());
  CHECK(q.intra_weights.at(1) + q.intra_weights.at(2) == g.edge_count());
}

TEST_CASE("quotient rejects unknown nodes and excludes noise") {
  auto g = make_graph(3, {{0, 1}, {1, 2}});
  Partition p = labels_over(g, {1, 1, kNoise});
  auto q = quotient(g, p, 1, false);
  CHECK(q.excluded_nodes == 1);
  CHECK(q.excluded_edges == 1);
  p.uids[2] = "ghost";
  CHECK_THROWS_AS(quotient(g, p, 1, false), DataError);
}
