#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "rfront/citation_graph.hpp"
#include "rfront/kernels.hpp"
#include "rfront/partition.hpp"

namespace rfront {

struct LayoutOptions {
  std::uint64_t seed = 1;
  std::size_t iterations = 500;
  double area = 1.0;                     // initial frame is the unit square scaled to this area
  double initial_temperature = 0.1;      // as a fraction of sqrt(area)
  std::size_t grid_threshold = 2000;     // use grid repulsion above this many nodes
  bool parallel = true;
};

struct LayoutResult {
  std::vector<kernels::Vec2> coords;  // per node
  std::size_t iterations_run = 0;
  std::uint64_t seed = 0;
  double ideal_length = 0.0;
};

/// Fruchterman-Reingold spring-electrical layout on the undirected view of
/// the graph. Deterministic for a fixed seed.
LayoutResult layout_force(const CitationGraph& graph, const LayoutOptions& opt);

enum class GraphFormat { graphml, dot, json };

GraphFormat parse_graph_format(std::string_view name);

/// Writes the graph with year, front and x/y node attributes where known.
void export_graph(std::ostream& out, const CitationGraph& graph, const LayoutResult* coords,
                  const Partition* p, GraphFormat format);

}  // namespace rfront
