#include "softmapper/cli/export.hpp"

#include "softmapper/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace softmapper::cli {

namespace {

constexpr std::array<const char*, 8> kViridis{"#440154", "#46327e", "#365c8d", "#277f8e",
                                              "#1fa187", "#4ac16d", "#a0da39", "#fde725"};

Eigen::VectorXd vector_from_json(const Json& j, const char* key, std::size_t n) {
  Eigen::VectorXd out(static_cast<Index>(n));
  for (std::size_t v = 0; v < n; ++v) out(static_cast<Index>(v)) = j[v].at(key).get<double>();
  return out;
}

}  // namespace

std::string format_double(double x) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

Json mapper_to_json(const MapperDocument& doc) {
  const auto& g = doc.graph;
  if (doc.values.size() != g.node_count() || doc.colors.size() != g.node_count()) {
    throw std::invalid_argument("mapper export: need one value and one color per node");
  }
  Json nodes = Json::array();
  for (const auto& node : g.nodes) {
    nodes.push_back({{"id", node.id},
                     {"cover_index", node.cover_index},
                     {"members", node.members},
                     {"value", doc.values(node.id)},
                     {"color", doc.colors(node.id)}});
  }
  Json edges = Json::array();
  for (const auto& e : g.edges) edges.push_back({{"source", e.source}, {"target", e.target}, {"weight", e.weight}});
  return Json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

MapperDocument mapper_from_json(const Json& j) {
  MapperDocument doc;
  const Json& nodes = j.at("nodes");
  const Json& edges = j.at("edges");
  const std::size_t n = nodes.size();
  for (std::size_t v = 0; v < n; ++v) {
    MapperNode node{nodes[v].at("id").get<Index>(), nodes[v].at("cover_index").get<Index>(),
                    nodes[v].at("members").get<std::vector<Index>>()};
    if (node.id != static_cast<Index>(v)) throw std::invalid_argument("mapper json: node ids must be 0..n-1 in order");
    if (node.members.empty()) throw std::invalid_argument("mapper json: node " + std::to_string(v) + " has no members");
    std::sort(node.members.begin(), node.members.end());
    doc.graph.nodes.push_back(std::move(node));
  }
  for (const auto& e : edges) {
    MapperEdge edge{e.at("source").get<Index>(), e.at("target").get<Index>(), e.at("weight").get<Index>()};
    if (edge.source > edge.target) std::swap(edge.source, edge.target);
    if (edge.source < 0 || edge.target >= static_cast<Index>(n) || edge.source == edge.target) {
      throw std::invalid_argument("mapper json: edge references an unknown node");
    }
    doc.graph.edges.push_back(edge);
  }
  std::sort(doc.graph.edges.begin(), doc.graph.edges.end(), [](const MapperEdge& a, const MapperEdge& b) {
    return std::tie(a.source, a.target) < std::tie(b.source, b.target);
  });
  doc.values = vector_from_json(nodes, "value", n);
  doc.colors = vector_from_json(nodes, "color", n);
  return doc;
}

std::string ramp_color(double c, double lo, double hi) {
  if (!(hi > lo)) return kViridis[4];
  const double t = (c - lo) / (hi - lo);
  const auto step = static_cast<std::size_t>(std::clamp(std::floor(t * 8.0), 0.0, 7.0));
  return kViridis[step];
}

std::string export_dot(const MapperGraph& graph, const Eigen::VectorXd& colors) {
  if (colors.size() != graph.node_count()) throw std::invalid_argument("dot export: need one color per node");
  if (graph.nodes.empty()) return "graph mapper { }";
  const double lo = colors.minCoeff();
  const double hi = colors.maxCoeff();
  std::ostringstream out;
  out << "graph mapper {\n  node [shape=circle, style=filled];\n";
  for (const auto& node : graph.nodes) {
    out << "  " << node.id << " [label=\"" << node.id << "\", tooltip=\"" << node.members.size() << "\", fillcolor=\""
        << ramp_color(colors(node.id), lo, hi) << "\"];\n";
  }
  for (const auto& e : graph.edges) out << "  " << e.source << " -- " << e.target << " [weight=" << e.weight << "];\n";
  out << "}";
  return out.str();
}

void write_diagram_csv(std::ostream& out, const Diagram& diagram) {
  out << "class,birth,death,birth_node,death_node\n";
  for (const auto& p : diagram.points) {
    out << to_string(p.cls) << ',' << format_double(p.birth) << ',' << format_double(p.death) << ',' << p.birth_node
        << ',';
    if (p.death_node) out << *p.death_node;
    out << '\n';
  }
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  const Index s = trace.epochs.empty() ? 0 : trace.epochs.front().theta.size();
  out << "epoch,risk,grad_norm";
  for (Index k = 0; k < s; ++k) out << ",theta_" << k;
  out << ",seconds\n";
  for (const auto& r : trace.epochs) {
    out << r.epoch << ',' << format_double(r.risk) << ',' << format_double(r.grad_norm);
    for (Index k = 0; k < r.theta.size(); ++k) out << ',' << format_double(r.theta(k));
    out << ',' << format_double(r.seconds) << '\n';
  }
}

Trace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty trace file", 1);
  const auto columns = static_cast<Index>(std::count(line.begin(), line.end(), ',')) + 1;
  if (columns < 4 || line.rfind("epoch,risk,grad_norm", 0) != 0) throw FormatError("not a trace header", 1);
  const Index s = columns - 4;
  Trace trace;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> cells;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) {
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) throw FormatError("bad number '" + cell + "'", lineno);
      cells.push_back(v);
    }
    if (static_cast<Index>(cells.size()) != columns) throw FormatError("wrong column count", lineno);
    EpochRecord r;
    r.epoch = static_cast<int>(cells[0]);
    r.risk = cells[1];
    r.grad_norm = cells[2];
    r.theta = Eigen::Map<Eigen::VectorXd>(cells.data() + 3, s);
    r.seconds = cells.back();
    trace.epochs.push_back(std::move(r));
  }
  return trace;
}

std::string trace_svg(const Trace& trace) {
  constexpr double width = 640.0;
  constexpr double height = 400.0;
  constexpr double margin = 50.0;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "  <line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin << "\" y2=\""
      << height - margin << "\" stroke=\"black\"/>\n";
  out << "  <line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\"" << height - margin
      << "\" stroke=\"black\"/>\n";
  out << "  <text x=\"" << width / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">epoch</text>\n";
  out << "  <text x=\"15\" y=\"" << height / 2 << "\" transform=\"rotate(-90 15 " << height / 2
      << ")\" text-anchor=\"middle\">risk</text>\n";
  if (!trace.epochs.empty()) {
    double lo = trace.epochs.front().risk;
    double hi = lo;
    for (const auto& r : trace.epochs) {
      lo = std::min(lo, r.risk);
      hi = std::max(hi, r.risk);
    }
    const double span = hi > lo ? hi - lo : 1.0;
    const double last = std::max(1.0, static_cast<double>(trace.epochs.size() - 1));
    out << "  <text x=\"" << margin - 5 << "\" y=\"" << margin << "\" text-anchor=\"end\">" << format_double(hi)
        << "</text>\n";
    out << "  <text x=\"" << margin - 5 << "\" y=\"" << height - margin << "\" text-anchor=\"end\">"
        << format_double(lo) << "</text>\n";
    out << "  <polyline fill=\"none\" stroke=\"#277f8e\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < trace.epochs.size(); ++i) {
      const double x = margin + (width - 2 * margin) * static_cast<double>(i) / last;
      const double y = height - margin - (height - 2 * margin) * (trace.epochs[i].risk - lo) / span;
      out << (i ? " " : "") << x << ',' << y;
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace softmapper::cli
