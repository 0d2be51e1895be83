#include "rfront/partition.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "rfront/error.hpp"
#include "rfront/modularity.hpp"

namespace rfront {

const FrontInfo* Partition::front(int id) const {
  if (id < 1 || static_cast<std::size_t>(id) > fronts.size()) return nullptr;
  return &fronts[static_cast<std::size_t>(id) - 1];
}

const FrontInfo* Partition::front_by_label(const std::string& label) const {
  for (const auto& f : fronts)
    if (f.label == label) return &f;
  return nullptr;
}

std::unordered_map<std::string, int> Partition::lookup() const {
  std::unordered_map<std::string, int> out;
  out.reserve(uids.size());
  for (std::size_t i = 0; i < uids.size(); ++i) out.emplace(uids[i], assignment[i]);
  return out;
}

std::size_t Partition::noise_count() const {
  return static_cast<std::size_t>(std::count(assignment.begin(), assignment.end(), kNoise));
}

std::vector<int> align(const Partition& p, const std::vector<std::string>& graph_uids) {
  if (p.uids == graph_uids) return p.assignment;
  std::unordered_map<std::string_view, std::size_t> index;
  index.reserve(graph_uids.size());
  for (std::size_t i = 0; i < graph_uids.size(); ++i) index.emplace(graph_uids[i], i);
  std::vector<int> out(graph_uids.size(), kUncovered);
  for (std::size_t i = 0; i < p.uids.size(); ++i) {
    auto it = index.find(p.uids[i]);
    if (it == index.end()) throw DataError("partition references unknown node '" + p.uids[i] + "'");
    out[it->second] = p.assignment[i];
  }
  return out;
}

Partition make_partition(const UGraph& g, std::vector<int> assignment,
                         const std::vector<std::string>& labels) {
  if (assignment.size() != g.node_count())
    throw std::invalid_argument("assignment does not match graph size");
  int k = 0;
  for (int a : assignment) {
    if (a < kNoise) throw std::invalid_argument("negative front id");
    k = std::max(k, a);
  }
  Partition p;
  p.uids = g.uids();
  p.fronts.resize(static_cast<std::size_t>(k));
  for (int id = 1; id <= k; ++id) {
    auto& f = p.fronts[static_cast<std::size_t>(id) - 1];
    f.id = id;
    f.label = static_cast<std::size_t>(id) <= labels.size() ? labels[static_cast<std::size_t>(id) - 1]
                                                            : std::to_string(id);
  }
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const int a = assignment[v];
    if (a == kNoise) continue;
    auto& f = p.fronts[static_cast<std::size_t>(a) - 1];
    ++f.nodes;
    for (NodeId w : g.neighbors(v))
      if (w > v && assignment[w] == a) ++f.internal_edges;
  }
  p.q = g.edge_count() > 0 ? modularity(g, assignment) : 0.0;
  p.assignment = std::move(assignment);
  return p;
}

void write_partition_csv(std::ostream& out, const Partition& p) {
  out << "uid,front_id\n";
  for (std::size_t i = 0; i < p.uids.size(); ++i) {
    out << p.uids[i] << ',';
    if (p.assignment[i] == kNoise)
      out << "noise";
    else
      out << p.front(p.assignment[i])->label;
    out << '\n';
  }
}

void write_partition_json(std::ostream& out, const Partition& p) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["q"] = p.q;
  doc["nodes"] = p.uids.size();
  doc["noise"] = p.noise_count();
  doc["fronts"] = ordered_json::array();
  for (const auto& f : p.fronts)
    doc["fronts"].push_back({{"id", f.id},
                             {"label", f.label},
                             {"nodes", f.nodes},
                             {"internal_edges", f.internal_edges}});
  out << doc.dump(2) << '\n';
}

Partition read_partition_csv(std::istream& in, const UGraph& g) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < g.node_count(); ++i) index.emplace(g.uid(static_cast<NodeId>(i)), i);

  std::vector<std::pair<std::size_t, std::string>> rows;
  std::vector<std::string> order;  // distinct labels by first appearance
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (line_no == 1 && line == "uid,front_id")) continue;
    auto comma = line.rfind(',');
    if (comma == std::string::npos) throw DataError("partition line " + std::to_string(line_no) + " has no comma");
    std::string uid = line.substr(0, comma), label = line.substr(comma + 1);
    auto it = index.find(uid);
    if (it == index.end()) throw DataError("partition references unknown node '" + uid + "'");
    if (label != "noise" && std::find(order.begin(), order.end(), label) == order.end())
      order.push_back(label);
    rows.emplace_back(it->second, std::move(label));
  }

  auto numeric = [](const std::string& s) -> std::optional<long> {
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
  };
  // Numeric labels keep their numeric order; others follow in appearance order.
  std::stable_sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
    auto na = numeric(a), nb = numeric(b);
    if (na && nb) return *na < *nb;
    return na.has_value() && !nb.has_value();
  });
  std::map<std::string, int> id_of;
  for (std::size_t i = 0; i < order.size(); ++i) id_of[order[i]] = static_cast<int>(i) + 1;

  std::vector<int> assignment(g.node_count(), kNoise);
  for (const auto& [node, label] : rows) assignment[node] = label == "noise" ? kNoise : id_of[label];
  return make_partition(g, std::move(assignment), order);
}

}  // namespace rfront
