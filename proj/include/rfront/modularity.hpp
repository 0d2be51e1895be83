#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rfront/citation_graph.hpp"
#include "rfront/partition.hpp"

namespace rfront {

/// Undirected simple graph over the same node indexing as the citation
/// graph it was projected from.
class UGraph {
 public:
  UGraph() = default;
  /// Parallel edges are collapsed; self-loops are rejected.
  UGraph(std::vector<std::string> uids, std::vector<std::pair<NodeId, NodeId>> edges);

  std::size_t node_count() const { return uids_.size(); }
  std::size_t edge_count() const { return m_; }
  const std::vector<std::string>& uids() const { return uids_; }
  const std::string& uid(NodeId v) const { return uids_[v]; }
  std::span<const NodeId> neighbors(NodeId v) const {
    return {adj_.data() + off_[v], adj_.data() + off_[v + 1]};
  }
  std::size_t degree(NodeId v) const { return off_[v + 1] - off_[v]; }

  /// Subgraph induced by `keep` (strictly ascending).
  UGraph induced(std::span<const NodeId> keep) const;

 private:
  std::vector<std::string> uids_;
  std::vector<std::size_t> off_{0};
  std::vector<NodeId> adj_;  // sorted per node
  std::size_t m_ = 0;
};

UGraph project_undirected(const CitationGraph& graph);

/// Q = sum_i (e_ii - a_i^2); noise and uncovered nodes count as singletons.
/// Throws std::domain_error when the graph has no edges.
double modularity(const UGraph& g, std::span<const int> labels);
double modularity(const UGraph& g, const Partition& p);

struct ClusterTrace {
  std::vector<std::pair<NodeId, NodeId>> merges;  // (kept, absorbed)
  std::vector<double> q;                          // q[0] singletons, q[t] after t merges
  std::size_t best_step = 0;
};

/// Greedy agglomerative modularity maximization (Clauset-Newman-Moore).
/// Merges the connected pair with the largest gain until none remain, with
/// ties going to the smallest id pair, and cuts at the first step of
/// maximal Q. Fronts are renumbered 1..k by descending internal edges.
Partition cluster_cnm(const UGraph& g, ClusterTrace* trace = nullptr);

/// Relabels fronts with fewer than `min_internal_edges` internal edges as
/// noise and renumbers the rest.
Partition filter_small(const UGraph& g, const Partition& p, std::size_t min_internal_edges);

/// Clusters the subgraph induced by one front. Sub-fronts are labelled
/// `<label>A`, `<label>B`, ... by descending internal edges.
Partition subcluster(const UGraph& g, const Partition& p, const std::string& front_label);

}  // namespace rfront
