#include "rfront/citation_graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace rfront {

CitationGraph::CitationGraph(std::vector<std::string> uids, std::vector<std::optional<int>> years,
                             std::vector<Edge> edges)
    : uids_(std::move(uids)), years_(std::move(years)), edges_(std::move(edges)) {
  const std::size_t n = uids_.size();
  if (years_.size() != n) throw std::invalid_argument("years and uids differ in length");
  index_.reserve(n);
  for (NodeId v = 0; v < n; ++v)
    if (!index_.emplace(uids_[v], v).second)
      throw std::invalid_argument("duplicate uid '" + uids_[v] + "'");

  std::sort(edges_.begin(), edges_.end());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.citing >= n || e.cited >= n) throw std::invalid_argument("edge endpoint out of range");
    if (e.citing == e.cited) throw std::invalid_argument("self-loop on '" + uids_[e.citing] + "'");
    if (i > 0 && edges_[i - 1] == e) throw std::invalid_argument("duplicate edge");
  }

  out_off_.assign(n + 1, 0);
  in_off_.assign(n + 1, 0);
  for (const auto& e : edges_) {
    ++out_off_[e.citing + 1];
    ++in_off_[e.cited + 1];
  }
  std::partial_sum(out_off_.begin(), out_off_.end(), out_off_.begin());
  std::partial_sum(in_off_.begin(), in_off_.end(), in_off_.begin());
  out_adj_.resize(edges_.size());
  in_adj_.resize(edges_.size());
  std::vector<std::size_t> out_fill(out_off_.begin(), out_off_.end() - 1);
  std::vector<std::size_t> in_fill(in_off_.begin(), in_off_.end() - 1);
  // Edges are sorted by citing then cited, so both lists come out ascending.
  for (const auto& e : edges_) {
    out_adj_[out_fill[e.citing]++] = e.cited;
    in_adj_[in_fill[e.cited]++] = e.citing;
  }
}

std::optional<NodeId> CitationGraph::find(std::string_view uid) const {
  auto it = index_.find(std::string(uid));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

CitationGraph CitationGraph::induced(std::span<const NodeId> keep) const {
  constexpr NodeId kDropped = static_cast<NodeId>(-1);
  std::vector<NodeId> remap(node_count(), kDropped);
  std::vector<std::string> uids;
  std::vector<std::optional<int>> years;
  uids.reserve(keep.size());
  years.reserve(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] >= node_count() || (i > 0 && keep[i] <= keep[i - 1]))
      throw std::invalid_argument("induced: node list must be ascending and in range");
    remap[keep[i]] = static_cast<NodeId>(i);
    uids.push_back(uids_[keep[i]]);
    years.push_back(years_[keep[i]]);
  }
  std::vector<Edge> edges;
  for (const auto& e : edges_)
    if (remap[e.citing] != kDropped && remap[e.cited] != kDropped)
      edges.push_back({remap[e.citing], remap[e.cited]});
  return CitationGraph(std::move(uids), std::move(years), std::move(edges));
}

CitationGraph build_graph(const Corpus& corpus) {
  std::vector<std::string> uids;
  std::vector<std::optional<int>> years;
  uids.reserve(corpus.records.size());
  years.reserve(corpus.records.size());
  std::unordered_map<std::string_view, NodeId> index;
  index.reserve(corpus.records.size());
  for (const auto& r : corpus.records) {
    index.emplace(r.uid, static_cast<NodeId>(uids.size()));
    uids.push_back(r.uid);
    years.push_back(r.year);
  }
  std::vector<Edge> edges;
  edges.reserve(corpus.links.size());
  for (const auto& link : corpus.links) {
    auto a = index.find(link.citing);
    auto b = index.find(link.cited);
    if (a == index.end() || b == index.end())
      throw DataError("link references unknown uid '" +
                      (a == index.end() ? link.citing : link.cited) + "'");
    edges.push_back({a->second, b->second});
  }
  return CitationGraph(std::move(uids), std::move(years), std::move(edges));
}

std::vector<std::size_t> weak_components(const CitationGraph& graph) {
  const std::size_t n = graph.node_count();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> comp(n, kUnset);
  std::vector<NodeId> stack;
  std::size_t next = 0;
  for (NodeId s = 0; s < n; ++s) {
    if (comp[s] != kUnset) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      for (auto nbrs : {graph.successors(v), graph.predecessors(v)}) {
        for (NodeId w : nbrs) {
          if (comp[w] == kUnset) {
            comp[w] = next;
            stack.push_back(w);
          }
        }
      }
    }
    ++next;
  }
  return comp;
}

ComponentResult largest_component(const CitationGraph& graph) {
  ComponentResult result;
  if (graph.empty()) return result;
  const auto comp = weak_components(graph);
  const std::size_t k = *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<std::size_t> size(k, 0);
  std::vector<const std::string*> min_uid(k, nullptr);
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    ++size[comp[v]];
    if (!min_uid[comp[v]] || graph.uid(v) < *min_uid[comp[v]]) min_uid[comp[v]] = &graph.uid(v);
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < k; ++c)
    if (size[c] > size[best] || (size[c] == size[best] && *min_uid[c] < *min_uid[best])) best = c;

  std::vector<NodeId> keep;
  for (NodeId v = 0; v < graph.node_count(); ++v)
    if (comp[v] == best) keep.push_back(v);
  result.giant = graph.induced(keep);
  result.component_sizes = std::move(size);
  std::sort(result.component_sizes.rbegin(), result.component_sizes.rend());
  return result;
}

DegreeHistogram indegree_histogram(const CitationGraph& graph) {
  DegreeHistogram hist;
  hist.n_nodes = graph.node_count();
  for (NodeId v = 0; v < graph.node_count(); ++v) ++hist.bins[graph.indegree(v)];
  return hist;
}

CitationGraph extract_core(const CitationGraph& graph, std::size_t k_min) {
  std::vector<NodeId> keep;
  for (NodeId v = 0; v < graph.node_count(); ++v)
    if (graph.indegree(v) >= k_min) keep.push_back(v);
  return graph.induced(keep);
}

QuotientGraph quotient(const CitationGraph& graph, const Partition& p, std::size_t min_weight,
                       bool keep_max_per_front) {
  const auto front_of = align(p, graph.uids());
  QuotientGraph qg;
  for (const auto& f : p.fronts) {
    qg.fronts.push_back(f.id);
    qg.intra_weights[f.id] = 0;
  }
  for (int f : front_of)
    if (f == kNoise || f == kUncovered) ++qg.excluded_nodes;

  std::map<std::pair<int, int>, std::size_t> weights;
  for (const auto& e : graph.edges()) {
    int a = front_of[e.citing], b = front_of[e.cited];
    if (a <= kNoise || b <= kNoise) {
      ++qg.excluded_edges;
      continue;
    }
    if (a == b) {
      ++qg.intra_weights[a];
    } else {
      if (a > b) std::swap(a, b);
      ++weights[{a, b}];
    }
  }
  for (const auto& [ab, w] : weights) {
    QuotientEdge e;
    e.a = ab.first;
    e.b = ab.second;
    e.weight = w;
    e.retained = w >= min_weight;
    qg.edges.push_back(e);
  }
  if (keep_max_per_front) {
    std::map<int, bool> has_retained;
    for (const auto& e : qg.edges)
      if (e.retained) has_retained[e.a] = has_retained[e.b] = true;
    for (int f : qg.fronts) {
      if (has_retained[f]) continue;
      QuotientEdge* best = nullptr;
      for (auto& e : qg.edges) {
        if (e.a != f && e.b != f) continue;
        // edges are sorted by (a, b), so the first heaviest has the smallest partner
        if (!best || e.weight > best->weight) best = &e;
      }
      if (best && !best->retained) {
        best->retained = true;
        best->fallback = true;
      }
    }
  }
  return qg;
}

void write_quotient_json(std::ostream& out, const QuotientGraph& qg, const Partition& p) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["fronts"] = ordered_json::array();
  for (int f : qg.fronts) {
    const FrontInfo* info = p.front(f);
    doc["fronts"].push_back({{"id", f},
                             {"label", info ? info->label : std::to_string(f)},
                             {"intra_weight", qg.intra_weights.at(f)}});
  }
  doc["edges"] = ordered_json::array();
  for (const auto& e : qg.edges)
    doc["edges"].push_back({{"a", e.a},
                            {"b", e.b},
                            {"weight", e.weight},
                            {"retained", e.retained},
                            {"fallback", e.fallback}});
  doc["excluded_nodes"] = qg.excluded_nodes;
  doc["excluded_edges"] = qg.excluded_edges;
  out << doc.dump(2) << '\n';
}

GraphStats graph_stats(const CitationGraph& graph) {
  GraphStats s;
  s.nodes = graph.node_count();
  s.edges = graph.edge_count();
  if (graph.empty()) return s;
  auto comp = largest_component(graph);
  s.components = comp.component_sizes.size();
  s.giant_nodes = comp.giant.node_count();
  s.giant_edges = comp.giant.edge_count();
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    if (graph.indegree(v) == 0 && graph.outdegree(v) == 0) ++s.isolated;
    s.max_indegree = std::max(s.max_indegree, graph.indegree(v));
  }
  return s;
}

void write_stats_report(std::ostream& out, const GraphStats& s) {
  out << "nodes: " << s.nodes << '\n'
      << "edges: " << s.edges << '\n'
      << "weak_components: " << s.components << '\n'
      << "giant_component_nodes: " << s.giant_nodes << '\n'
      << "giant_component_edges: " << s.giant_edges << '\n'
      << "isolated_nodes: " << s.isolated << '\n'
      << "max_indegree: " << s.max_indegree << '\n';
}

void write_histogram_csv(std::ostream& out, const DegreeHistogram& hist) {
  out << "degree,count\n";
  for (const auto& [d, c] : hist.bins) out << d << ',' << c << '\n';
}

}  // namespace rfront
