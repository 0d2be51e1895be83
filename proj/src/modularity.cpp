#include "rfront/modularity.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "rfront/error.hpp"

namespace rfront {

UGraph::UGraph(std::vector<std::string> uids, std::vector<std::pair<NodeId, NodeId>> edges)
    : uids_(std::move(uids)) {
  const std::size_t n = uids_.size();
  for (auto& [u, v] : edges) {
    if (u >= n || v >= n) throw std::invalid_argument("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loop on '" + uids_[u] + "'");
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  m_ = edges.size();

  off_.assign(n + 1, 0);
  for (const auto& [u, v] : edges) {
    ++off_[u + 1];
    ++off_[v + 1];
  }
  std::partial_sum(off_.begin(), off_.end(), off_.begin());
  adj_.resize(2 * m_);
  std::vector<std::size_t> fill(off_.begin(), off_.end() - 1);
  for (const auto& [u, v] : edges) {
    adj_[fill[u]++] = v;
    adj_[fill[v]++] = u;
  }
  for (std::size_t v = 0; v < n; ++v) std::sort(adj_.begin() + off_[v], adj_.begin() + off_[v + 1]);
}

UGraph UGraph::induced(std::span<const NodeId> keep) const {
  constexpr NodeId kDropped = static_cast<NodeId>(-1);
  std::vector<NodeId> remap(node_count(), kDropped);
  std::vector<std::string> uids;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] >= node_count() || (i > 0 && keep[i] <= keep[i - 1]))
      throw std::invalid_argument("induced: node list must be ascending and in range");
    remap[keep[i]] = static_cast<NodeId>(i);
    uids.push_back(uids_[keep[i]]);
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId v : keep)
    for (NodeId w : neighbors(v))
      if (w > v && remap[w] != kDropped) edges.emplace_back(remap[v], remap[w]);
  return UGraph(std::move(uids), std::move(edges));
}

UGraph project_undirected(const CitationGraph& graph) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(graph.edge_count());
  for (const auto& e : graph.edges()) edges.emplace_back(e.citing, e.cited);
  return UGraph(graph.uids(), std::move(edges));
}

namespace {

// Everything below is scaled by 4m^2 so that gains and Q compare exactly:
// Q * 4m^2 = sum_c (4m * w_c - d_c^2), gain * 4m^2 = 4m * w_ab - 2 d_a d_b.
using Scaled = std::int64_t;

Scaled scaled_modularity(const UGraph& g, std::span<const int> labels) {
  const auto m = static_cast<Scaled>(g.edge_count());
  std::unordered_map<int, std::pair<Scaled, Scaled>> fronts;  // id -> (internal, degree)
  Scaled total = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto d = static_cast<Scaled>(g.degree(v));
    const int f = labels[v];
    if (f <= kNoise) {
      total -= d * d;
      continue;
    }
    auto& acc = fronts[f];
    acc.second += d;
    for (NodeId w : g.neighbors(v))
      if (w > v && labels[w] == f) ++acc.first;
  }
  for (const auto& [id, acc] : fronts) total += 4 * m * acc.first - acc.second * acc.second;
  return total;
}

double unscale(Scaled value, std::size_t m) {
  const double denom = 4.0 * static_cast<double>(m) * static_cast<double>(m);
  return static_cast<double>(value) / denom;
}

struct Gain {
  Scaled value;
  NodeId a;  // a < b
  NodeId b;
};

struct GainOrder {
  bool operator()(const Gain& x, const Gain& y) const {
    if (x.value != y.value) return x.value > y.value;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  }
};

class Agglomeration {
 public:
  explicit Agglomeration(const UGraph& g)
      : m_(static_cast<Scaled>(g.edge_count())), degree_(g.node_count()), adj_(g.node_count()) {
    for (NodeId v = 0; v < g.node_count(); ++v) {
      degree_[v] = static_cast<Scaled>(g.degree(v));
      adj_[v].reserve(g.degree(v));
      for (NodeId w : g.neighbors(v)) adj_[v].emplace(w, 1);
    }
    Scaled q = 0;
    for (Scaled d : degree_) q -= d * d;
    q_.push_back(q);
    for (NodeId v = 0; v < g.node_count(); ++v)
      for (NodeId w : g.neighbors(v))
        if (w > v) gains_.insert(gain(v, w, 1));
  }

  void run() {
    while (!gains_.empty()) {
      const Gain top = *gains_.begin();
      merge(top.a, top.b);
      q_.push_back(q_.back() + top.value);
      merges_.emplace_back(top.a, top.b);
    }
  }

  const std::vector<Scaled>& q() const { return q_; }
  const std::vector<std::pair<NodeId, NodeId>>& merges() const { return merges_; }

 private:
  Gain gain(NodeId a, NodeId b, Scaled w) const {
    if (a > b) std::swap(a, b);
    return {4 * m_ * w - 2 * degree_[a] * degree_[b], a, b};
  }

  // b is absorbed into a (a < b).
  void merge(NodeId a, NodeId b) {
    for (const auto& [k, w] : adj_[a]) gains_.erase(gain(a, k, w));
    for (const auto& [k, w] : adj_[b])
      if (k != a) gains_.erase(gain(b, k, w));

    adj_[a].erase(b);
    for (const auto& [k, w] : adj_[b]) {
      if (k == a) continue;
      adj_[a][k] += w;
      auto& back = adj_[k];
      back.erase(b);
      back[a] += w;
    }
    adj_[b].clear();
    degree_[a] += degree_[b];
    degree_[b] = 0;

    for (const auto& [k, w] : adj_[a]) gains_.insert(gain(a, k, w));
  }

  Scaled m_;
  std::vector<Scaled> degree_;
  std::vector<std::unordered_map<NodeId, Scaled>> adj_;
  std::set<Gain, GainOrder> gains_;
  std::vector<Scaled> q_;
  std::vector<std::pair<NodeId, NodeId>> merges_;
};

// Front ids 1..k by descending internal edges, ties by smallest member.
std::vector<int> renumber(const UGraph& g, const std::vector<NodeId>& root) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> internal(n, 0);
  std::vector<bool> is_root(n, false);
  for (NodeId v = 0; v < n; ++v) {
    is_root[root[v]] = true;
    for (NodeId w : g.neighbors(v))
      if (w > v && root[w] == root[v]) ++internal[root[v]];
  }
  std::vector<NodeId> roots;
  for (NodeId v = 0; v < n; ++v)
    if (is_root[v]) roots.push_back(v);
  // A root is always the smallest member since survivors keep the smaller id.
  std::stable_sort(roots.begin(), roots.end(),
                   [&](NodeId x, NodeId y) { return internal[x] > internal[y]; });
  std::vector<int> id(n, 0);
  for (std::size_t i = 0; i < roots.size(); ++i) id[roots[i]] = static_cast<int>(i) + 1;
  std::vector<int> labels(n);
  for (NodeId v = 0; v < n; ++v) labels[v] = id[root[v]];
  return labels;
}

}  // namespace

double modularity(const UGraph& g, std::span<const int> labels) {
  if (g.edge_count() == 0) throw std::domain_error("modularity undefined");
  if (labels.size() != g.node_count()) throw std::invalid_argument("labels do not match graph size");
  return unscale(scaled_modularity(g, labels), g.edge_count());
}

double modularity(const UGraph& g, const Partition& p) {
  const auto labels = align(p, g.uids());
  if (std::find(labels.begin(), labels.end(), kUncovered) != labels.end())
    throw std::invalid_argument("partition does not cover every node");
  return modularity(g, labels);
}

Partition cluster_cnm(const UGraph& g, ClusterTrace* trace) {
  if (g.edge_count() == 0) throw std::invalid_argument("cannot cluster a graph without edges");
  Agglomeration agg(g);
  agg.run();

  const auto& q = agg.q();
  std::size_t best = 0;
  for (std::size_t t = 1; t < q.size(); ++t)
    if (q[t] > q[best]) best = t;

  std::vector<NodeId> root(g.node_count());
  std::iota(root.begin(), root.end(), NodeId{0});
  auto find = [&](NodeId v) {
    while (root[v] != v) v = root[v] = root[root[v]];
    return v;
  };
  for (std::size_t t = 0; t < best; ++t) {
    auto [a, b] = agg.merges()[t];
    root[find(b)] = find(a);
  }
  for (NodeId v = 0; v < g.node_count(); ++v) root[v] = find(v);

  if (trace) {
    trace->merges = agg.merges();
    trace->q.clear();
    for (Scaled s : q) trace->q.push_back(unscale(s, g.edge_count()));
    trace->best_step = best;
  }
  return make_partition(g, renumber(g, root));
}

Partition filter_small(const UGraph& g, const Partition& p, std::size_t min_internal_edges) {
  auto labels = align(p, g.uids());
  std::vector<int> new_id(p.fronts.size() + 1, kNoise);
  std::vector<std::string> new_labels;
  int next = 1;
  for (const auto& f : p.fronts) {
    if (f.internal_edges < min_internal_edges) continue;
    new_id[static_cast<std::size_t>(f.id)] = next;
    new_labels.push_back(f.label == std::to_string(f.id) ? std::to_string(next) : f.label);
    ++next;
  }
  for (auto& l : labels) l = l > kNoise ? new_id[static_cast<std::size_t>(l)] : kNoise;
  return make_partition(g, std::move(labels), new_labels);
}

namespace {

std::string suffix(std::size_t i) {
  std::string s(1, static_cast<char>('A' + i % 26));
  if (i >= 26) s += std::to_string(i / 26);
  return s;
}

}  // namespace

Partition subcluster(const UGraph& g, const Partition& p, const std::string& front_label) {
  const FrontInfo* front = p.front_by_label(front_label);
  if (!front) throw std::invalid_argument("no front labelled '" + front_label + "'");
  const auto labels = align(p, g.uids());
  std::vector<NodeId> members;
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (labels[v] == front->id) members.push_back(v);
  const UGraph sub = g.induced(members);
  if (sub.edge_count() == 0)
    throw std::invalid_argument("front '" + front_label + "' has no internal edges");
  Partition inner = cluster_cnm(sub);
  for (auto& f : inner.fronts) f.label = front_label + suffix(static_cast<std::size_t>(f.id) - 1);
  return inner;
}

}  // namespace rfront
