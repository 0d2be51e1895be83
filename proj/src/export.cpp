#include <cstdio>
#include <stdexcept>

#include <json.hpp>

#include "rfront/layout.hpp"

namespace rfront {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

struct NodeAttrs {
  std::vector<int> front;
  const Partition* p = nullptr;

  std::string label(NodeId v) const {
    const int f = front[v];
    if (f == kNoise) return "noise";
    if (f == kUncovered) return "";
    return p->front(f)->label;
  }
};

void write_graphml(std::ostream& out, const CitationGraph& g, const LayoutResult* coords,
                   const NodeAttrs* attrs) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" "
         "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
         "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
         "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n"
         "  <key id=\"year\" for=\"node\" attr.name=\"year\" attr.type=\"int\"/>\n";
  if (attrs) out << "  <key id=\"front\" for=\"node\" attr.name=\"front\" attr.type=\"string\"/>\n";
  if (coords)
    out << "  <key id=\"x\" for=\"node\" attr.name=\"x\" attr.type=\"double\"/>\n"
           "  <key id=\"y\" for=\"node\" attr.name=\"y\" attr.type=\"double\"/>\n";
  out << "  <graph id=\"G\" edgedefault=\"directed\">\n";
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out << "    <node id=\"" << xml_escape(g.uid(v)) << "\">";
    if (auto y = g.year(v)) out << "<data key=\"year\">" << *y << "</data>";
    if (attrs && attrs->front[v] != kUncovered)
      out << "<data key=\"front\">" << xml_escape(attrs->label(v)) << "</data>";
    if (coords)
      out << "<data key=\"x\">" << num(coords->coords[v].x) << "</data><data key=\"y\">"
          << num(coords->coords[v].y) << "</data>";
    out << "</node>\n";
  }
  std::size_t i = 0;
  for (const auto& e : g.edges())
    out << "    <edge id=\"e" << i++ << "\" source=\"" << xml_escape(g.uid(e.citing)) << "\" target=\""
        << xml_escape(g.uid(e.cited)) << "\"/>\n";
  out << "  </graph>\n</graphml>\n";
}

void write_dot(std::ostream& out, const CitationGraph& g, const LayoutResult* coords,
               const NodeAttrs* attrs) {
  out << "digraph citations {\n";
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out << "  " << dot_quote(g.uid(v));
    std::vector<std::string> a;
    if (auto y = g.year(v)) a.push_back("year=" + std::to_string(*y));
    if (attrs && attrs->front[v] != kUncovered) a.push_back("front=" + dot_quote(attrs->label(v)));
    if (coords) {
      a.push_back("x=" + num(coords->coords[v].x));
      a.push_back("y=" + num(coords->coords[v].y));
      a.push_back("pos=" + dot_quote(num(coords->coords[v].x) + "," + num(coords->coords[v].y) + "!"));
    }
    if (!a.empty()) {
      out << " [";
      for (std::size_t i = 0; i < a.size(); ++i) out << (i ? ", " : "") << a[i];
      out << ']';
    }
    out << ";\n";
  }
  for (const auto& e : g.edges())
    out << "  " << dot_quote(g.uid(e.citing)) << " -> " << dot_quote(g.uid(e.cited)) << ";\n";
  out << "}\n";
}

void write_json(std::ostream& out, const CitationGraph& g, const LayoutResult* coords,
                const NodeAttrs* attrs) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["directed"] = true;
  doc["nodes"] = ordered_json::array();
  for (NodeId v = 0; v < g.node_count(); ++v) {
    ordered_json node;
    node["id"] = g.uid(v);
    node["year"] = g.year(v) ? ordered_json(*g.year(v)) : ordered_json(nullptr);
    if (attrs && attrs->front[v] != kUncovered) node["front"] = attrs->label(v);
    if (coords) {
      node["x"] = coords->coords[v].x;
      node["y"] = coords->coords[v].y;
    }
    doc["nodes"].push_back(std::move(node));
  }
  doc["edges"] = ordered_json::array();
  for (const auto& e : g.edges()) doc["edges"].push_back({{"source", g.uid(e.citing)}, {"target", g.uid(e.cited)}});
  out << doc.dump(1) << '\n';
}

}  // namespace

GraphFormat parse_graph_format(std::string_view name) {
  if (name == "graphml") return GraphFormat::graphml;
  if (name == "dot") return GraphFormat::dot;
  if (name == "json") return GraphFormat::json;
  throw std::invalid_argument("unknown graph format '" + std::string(name) + "'");
}

void export_graph(std::ostream& out, const CitationGraph& graph, const LayoutResult* coords,
                  const Partition* p, GraphFormat format) {
  if (coords && coords->coords.size() != graph.node_count())
    throw std::invalid_argument("layout does not cover the graph");
  NodeAttrs attrs;
  if (p) {
    attrs.front = align(*p, graph.uids());
    attrs.p = p;
  }
  const NodeAttrs* a = p ? &attrs : nullptr;
  switch (format) {
    case GraphFormat::graphml: write_graphml(out, graph, coords, a); break;
    case GraphFormat::dot: write_dot(out, graph, coords, a); break;
    case GraphFormat::json: write_json(out, graph, coords, a); break;
  }
}

}  // namespace rfront
