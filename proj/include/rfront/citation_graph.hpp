#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rfront/corpus.hpp"
#include "rfront/partition.hpp"

namespace rfront {

using NodeId = std::uint32_t;

struct Edge {
  NodeId citing;
  NodeId cited;

  auto operator<=>(const Edge&) const = default;
};

/// Immutable directed citation graph. Nodes are dense indices in insertion
/// order; edges are kept sorted by (citing, cited).
class CitationGraph {
 public:
  CitationGraph() = default;
  /// Throws std::invalid_argument on out-of-range endpoints, self-loops,
  /// duplicate edges or duplicate uids.
  CitationGraph(std::vector<std::string> uids, std::vector<std::optional<int>> years,
                std::vector<Edge> edges);

  std::size_t node_count() const { return uids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return uids_.empty(); }

  const std::string& uid(NodeId v) const { return uids_[v]; }
  std::optional<int> year(NodeId v) const { return years_[v]; }
  const std::vector<std::string>& uids() const { return uids_; }
  std::optional<NodeId> find(std::string_view uid) const;

  std::span<const Edge> edges() const { return edges_; }
  std::span<const NodeId> successors(NodeId v) const {
    return {out_adj_.data() + out_off_[v], out_adj_.data() + out_off_[v + 1]};
  }
  std::span<const NodeId> predecessors(NodeId v) const {
    return {in_adj_.data() + in_off_[v], in_adj_.data() + in_off_[v + 1]};
  }
  std::size_t indegree(NodeId v) const { return in_off_[v + 1] - in_off_[v]; }
  std::size_t outdegree(NodeId v) const { return out_off_[v + 1] - out_off_[v]; }

  /// Subgraph induced by `keep`, which must be strictly ascending.
  CitationGraph induced(std::span<const NodeId> keep) const;

 private:
  std::vector<std::string> uids_;
  std::vector<std::optional<int>> years_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> out_off_{0}, in_off_{0};
  std::vector<NodeId> out_adj_, in_adj_;
  std::unordered_map<std::string, NodeId> index_;
};

CitationGraph build_graph(const Corpus& corpus);

struct ComponentResult {
  CitationGraph giant;
  std::vector<std::size_t> component_sizes;  // descending
};

/// Largest weakly connected component; ties go to the component holding
/// the lexicographically smallest uid.
ComponentResult largest_component(const CitationGraph& graph);

/// Weak component index per node, components numbered by first node seen.
std::vector<std::size_t> weak_components(const CitationGraph& graph);

struct DegreeHistogram {
  std::map<std::size_t, std::size_t> bins;  // degree -> count, no zero counts
  std::size_t n_nodes = 0;
};

DegreeHistogram indegree_histogram(const CitationGraph& graph);

/// Induced subgraph on nodes whose indegree in `graph` is at least k_min.
CitationGraph extract_core(const CitationGraph& graph, std::size_t k_min);

struct GraphStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t components = 0;
  std::size_t giant_nodes = 0;
  std::size_t giant_edges = 0;
  std::size_t isolated = 0;
  std::size_t max_indegree = 0;
};

struct QuotientEdge {
  int a = 0;  // a < b
  int b = 0;
  std::size_t weight = 0;
  bool retained = false;
  bool fallback = false;  // retained only as its front's largest edge
};

/// Fronts collapsed to single nodes. `edges` holds every front pair with a
/// nonzero weight; the `retained` ones form the displayed graph.
struct QuotientGraph {
  std::vector<int> fronts;
  std::vector<QuotientEdge> edges;  // sorted by (a, b)
  std::map<int, std::size_t> intra_weights;
  std::size_t excluded_nodes = 0;  // noise or not in the partition
  std::size_t excluded_edges = 0;  // touching an excluded node
};

/// Edge weights count citations between two fronts in either direction.
/// Pairs with weight >= min_weight are retained; with keep_max_per_front a
/// front left without any retained pair keeps its heaviest one (ties go to
/// the smaller partner id).
QuotientGraph quotient(const CitationGraph& graph, const Partition& p, std::size_t min_weight,
                       bool keep_max_per_front);

void write_quotient_json(std::ostream& out, const QuotientGraph& qg, const Partition& p);

GraphStats graph_stats(const CitationGraph& graph);
void write_stats_report(std::ostream& out, const GraphStats& stats);
void write_histogram_csv(std::ostream& out, const DegreeHistogram& hist);

}  // namespace rfront
