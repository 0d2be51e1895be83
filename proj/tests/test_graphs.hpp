#pragma once

// Small graph builders shared by the test binaries.

#include <algorithm>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rfront/citation_graph.hpp"
#include "rfront/modularity.hpp"

namespace rfront::testing {

inline std::vector<std::string> names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("n" + std::to_string(i));
  return out;
}

inline CitationGraph make_graph(std::size_t n, std::vector<Edge> edges) {
  return CitationGraph(names(n), std::vector<std::optional<int>>(n), std::move(edges));
}

inline CitationGraph random_graph(std::mt19937_64& rng, std::size_t n, double p) {
  std::vector<Edge> edges;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = 0; b < n; ++b)
      if (a != b && u(rng) < p) edges.push_back({a, b});
  return make_graph(n, std::move(edges));
}

inline UGraph make_ugraph(std::size_t n, std::vector<std::pair<NodeId, NodeId>> edges) {
  return UGraph(names(n), std::move(edges));
}

inline UGraph random_ugraph(std::mt19937_64& rng, std::size_t n, double p) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b)
      if (u(rng) < p) edges.emplace_back(a, b);
  return make_ugraph(n, std::move(edges));
}

/// Two c-cliques, nodes [0, c) and [c, 2c), joined by the edge (c-1, c).
inline UGraph bridged_cliques(std::size_t c) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId base : {NodeId{0}, static_cast<NodeId>(c)})
    for (NodeId a = 0; a < c; ++a)
      for (NodeId b = a + 1; b < c; ++b) edges.emplace_back(base + a, base + b);
  edges.emplace_back(static_cast<NodeId>(c - 1), static_cast<NodeId>(c));
  return make_ugraph(2 * c, std::move(edges));
}

/// Enumerates every set partition of n items as restricted growth strings.
template <typename Fn>
void for_each_set_partition(std::size_t n, Fn&& fn) {
  std::vector<int> labels(n, 0);
  while (true) {
    fn(labels);
    std::size_t i = n;
    bool advanced = false;
    while (i > 1 && !advanced) {
      --i;
      const int prefix_max = *std::max_element(labels.begin(), labels.begin() + static_cast<long>(i));
      if (labels[i] <= prefix_max) {
        ++labels[i];
        std::fill(labels.begin() + static_cast<long>(i) + 1, labels.end(), 0);
        advanced = true;
      }
    }
    if (!advanced) return;
  }
}

/// Q by the adjacency-matrix definition: (1/2m) sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j),
/// with non-positive labels as singletons. Independent of the library's
/// community-sum route.
inline double brute_modularity(const UGraph& g, const std::vector<int>& labels) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<int>> adj(n, std::vector<int>(n, 0));
  for (NodeId v = 0; v < n; ++v)
    for (NodeId w : g.neighbors(v)) adj[v][w] = 1;
  const double two_m = 2.0 * static_cast<double>(g.edge_count());
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const bool same = i == j || (labels[i] > 0 && labels[i] == labels[j]);
      if (!same) continue;
      q += adj[i][j] - static_cast<double>(g.degree(static_cast<NodeId>(i))) *
                           static_cast<double>(g.degree(static_cast<NodeId>(j))) / two_m;
    }
  return q / two_m;
}

}  // namespace rfront::testing
