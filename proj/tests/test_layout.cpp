#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/graphml.hpp>
#include <boost/graph/graphviz.hpp>
#include <json.hpp>

#include "rfront/layout.hpp"
#include "rfront/modularity.hpp"
#include "test_graphs.hpp"

using namespace rfront;
using rfront::testing::make_graph;
using rfront::testing::random_graph;

namespace {

using BGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS>;

LayoutOptions opts(std::uint64_t seed, std::size_t iterations) {
  LayoutOptions o;
  o.seed = seed;
  o.iterations = iterations;
  return o;
}

}  // namespace

TEST_CASE("empty and single-node layouts") {
  auto empty = layout_force(CitationGraph{}, opts(1, 10));
  CHECK(empty.coords.empty());

  auto one = make_graph(1, {});
  auto a = layout_force(one, opts(5, 1));
  auto b = layout_force(one, opts(5, 400));
  REQUIRE(a.coords.size() == 1);
  CHECK(a.coords[0].x == b.coords[0].x);
  CHECK(a.coords[0].y == b.coords[0].y);
  CHECK(a.coords[0].x >= 0.0);
  CHECK(a.coords[0].x <= 1.0);
  CHECK(b.iterations_run == 400);
  CHECK(b.seed == 5);

  CHECK_THROWS(layout_force(one, opts(5, 0)));
}

TEST_CASE("an edge settles at the ideal length") {
  auto g = make_graph(2, {{0, 1}});
  for (std::uint64_t seed : {1u, 2u, 3u, 99u}) {
    auto r = layout_force(g, opts(seed, 2000));
    const double k = std::sqrt(1.0 / 2.0);
    CHECK(r.ideal_length == doctest::Approx(k));
    const double d = std::hypot(r.coords[0].x - r.coords[1].x, r.coords[0].y - r.coords[1].y);
    CHECK(std::abs(d - k) <= 0.05 * k);
  }
}

TEST_CASE("layout is deterministic and finite") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = random_graph(rng, 1 + rng() % 80, 0.05);
    const std::uint64_t seed = rng();
    auto a = layout_force(g, opts(seed, 60));
    auto b = layout_force(g, opts(seed, 60));
    LayoutOptions serial = opts(seed, 60);
    serial.parallel = false;
    auto c = layout_force(g, serial);
    REQUIRE(a.coords.size() == g.node_count());
    for (std::size_t i = 0; i < a.coords.size(); ++i) {
      CHECK(std::isfinite(a.coords[i].x));
      CHECK(std::isfinite(a.coords[i].y));
      CHECK(a.coords[i].x == b.coords[i].x);
      CHECK(a.coords[i].y == b.coords[i].y);
      CHECK(a.coords[i].x == c.coords[i].x);
      CHECK(a.coords[i].y == c.coords[i].y);
    }
  }
}

TEST_CASE("coincident nodes stay finite") {
  // grid path with a tiny area pushes nodes together
  auto g = make_graph(30, {});
  LayoutOptions o = opts(3, 50);
  o.area = 1e-30;
  o.grid_threshold = 4;
  auto r = layout_force(g, o);
  for (const auto& v : r.coords) {
    CHECK(std::isfinite(v.x));
    CHECK(std::isfinite(v.y));
  }
}

TEST_CASE("graphml export parses with a reference reader") {
  auto g = make_graph(2, {{0, 1}});
  auto part = make_partition(project_undirected(g), {1, 1});
  auto lay = layout_force(g, opts(1, 10));
  std::ostringstream out;
  export_graph(out, g, &lay, &part, GraphFormat::graphml);
  const std::string text = out.str();
  CHECK(text.find("edgedefault=\"directed\"") != std::string::npos);
  CHECK(text.find("attr.name=\"front\"") != std::string::npos);

  BGraph bg;
  boost::dynamic_properties dp(boost::ignore_other_properties);
  std::istringstream in(text);
  boost::read_graphml(in, bg, dp);
  CHECK(boost::num_vertices(bg) == 2);
  CHECK(boost::num_edges(bg) == 1);
}

TEST_CASE("dot export parses with a reference reader") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = random_graph(rng, 1 + rng() % 30, 0.1);
    std::vector<int> labels(g.node_count(), 1);
    auto part = make_partition(project_undirected(g), labels);
    auto lay = layout_force(g, opts(1, 5));
    std::ostringstream out;
    export_graph(out, g, &lay, trial % 2 ? &part : nullptr, GraphFormat::dot);
    BGraph bg;
    boost::dynamic_properties dp(boost::ignore_other_properties);
    CHECK(boost::read_graphviz(out.str(), bg, dp));
    CHECK(boost::num_vertices(bg) == g.node_count());
    CHECK(boost::num_edges(bg) == g.edge_count());
  }
}

TEST_CASE("json export and formats") {
  auto g = make_graph(3, {{0, 1}, {2, 1}});
  std::ostringstream out;
  export_graph(out, g, nullptr, nullptr, GraphFormat::json);
  auto doc = nlohmann::json::parse(out.str());
  CHECK(doc["directed"] == true);
  CHECK(doc["nodes"].size() == 3);
  CHECK(doc["edges"].size() == 2);
  CHECK(doc["edges"][0]["source"] == "n0");

  CHECK(parse_graph_format("graphml") == GraphFormat::graphml);
  CHECK(parse_graph_format("dot") == GraphFormat::dot);
  CHECK(parse_graph_format("json") == GraphFormat::json);
  CHECK_THROWS(parse_graph_format("gexf"));
}
