#include "softmapper/persistence.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace softmapper {

std::string_view to_string(PointClass c) {
  switch (c) {
    case PointClass::ord0: return "Ord0";
    case PointClass::ext0: return "Ext0";
    case PointClass::ext1: return "Ext1";
    case PointClass::rel1: return "Rel1";
    case PointClass::h0: return "H0";
  }
  return "?";
}

std::size_t Diagram::count(PointClass c) const {
  return static_cast<std::size_t>(
      std::count_if(points.begin(), points.end(), [c](const PersistencePoint& p) { return p.cls == c; }));
}

FilteredGraph map_pers_filtration(const MapperGraph& graph, const Eigen::VectorXd& filter_values) {
  FilteredGraph fg;
  fg.graph = graph;
  fg.node_values.resize(graph.node_count());
  for (const auto& node : graph.nodes) {
    double sum = 0.0;
    for (Index i : node.members) {
      if (i < 0 || i >= filter_values.size()) throw std::out_of_range("node member has no filter value");
      sum += filter_values(i);
    }
    fg.node_values(node.id) = sum / static_cast<double>(node.members.size());
  }
  fg.edge_values.resize(graph.edge_count());
  fg.edge_argmax.resize(graph.edges.size());
  for (std::size_t k = 0; k < graph.edges.size(); ++k) {
    const auto& edge = graph.edges[k];
    const Index lo = std::min(edge.source, edge.target);
    const Index hi = std::max(edge.source, edge.target);
    const Index arg = fg.node_values(hi) > fg.node_values(lo) ? hi : lo;
    fg.edge_argmax[k] = arg;
    fg.edge_values(static_cast<Index>(k)) = fg.node_values(arg);
  }
  return fg;
}

namespace {

enum class Phase { apex, ascending, descending };

struct Simplex {
  int dim = 0;
  double value = 0.0;
  Phase phase = Phase::ascending;
  Index key = 0;   // node id or edge index, for tie-breaking
  Index node = 0;  // provenance: node realizing `value`
  std::vector<int> faces;  // construction ids
};

using Column = std::vector<int>;

void add_column(Column& target, const Column& other) {
  Column out;
  out.reserve(target.size() + other.size());
  std::set_symmetric_difference(target.begin(), target.end(), other.begin(), other.end(), std::back_inserter(out));
  target.swap(out);
}

}  // namespace

Diagram extended_persistence(const FilteredGraph& fg) {
  const MapperGraph& g = fg.graph;
  const auto nv = static_cast<int>(g.node_count());
  const auto ne = static_cast<int>(g.edge_count());
  Diagram diagram;
  if (nv == 0) return diagram;

  // Construction ids: apex 0, vertices 1..nv, edges, cone edges, cone triangles.
  std::vector<Simplex> simplices;
  simplices.reserve(static_cast<std::size_t>(1 + 2 * (nv + ne)));
  simplices.push_back({0, 0.0, Phase::apex, 0, 0, {}});
  const int vertex0 = 1;
  const int edge0 = vertex0 + nv;
  const int cone_edge0 = edge0 + ne;
  for (int v = 0; v < nv; ++v) {
    simplices.push_back({0, fg.node_values(v), Phase::ascending, v, v, {}});
  }
  for (int k = 0; k < ne; ++k) {
    const auto& e = g.edges[static_cast<std::size_t>(k)];
    simplices.push_back({1, fg.edge_values(k), Phase::ascending, k, fg.edge_argmax[static_cast<std::size_t>(k)],
                         {vertex0 + static_cast<int>(e.source), vertex0 + static_cast<int>(e.target)}});
  }
  for (int v = 0; v < nv; ++v) {
    simplices.push_back({1, fg.node_values(v), Phase::descending, v, v, {0, vertex0 + v}});
  }
  for (int k = 0; k < ne; ++k) {
    const auto& e = g.edges[static_cast<std::size_t>(k)];
    const Index lo = std::min(e.source, e.target);
    const Index hi = std::max(e.source, e.target);
    const Index argmin = fg.node_values(hi) < fg.node_values(lo) ? hi : lo;
    simplices.push_back({2, fg.node_values(argmin), Phase::descending, k, argmin,
                         {edge0 + k, cone_edge0 + static_cast<int>(e.source), cone_edge0 + static_cast<int>(e.target)}});
  }

  std::vector<int> order(simplices.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Simplex& x = simplices[static_cast<std::size_t>(a)];
    const Simplex& y = simplices[static_cast<std::size_t>(b)];
    if (x.phase != y.phase) return x.phase < y.phase;
    if (x.phase == Phase::ascending) {
      return std::tie(x.value, x.dim, x.key) < std::tie(y.value, y.dim, y.key);
    }
    if (x.value != y.value) return x.value > y.value;
    return std::tie(x.dim, x.key) < std::tie(y.dim, y.key);
  });
  std::vector<int> position(simplices.size());
  for (std::size_t p = 0; p < order.size(); ++p) position[static_cast<std::size_t>(order[p])] = static_cast<int>(p);

  // Standard left-to-right reduction over Z/2.
  std::vector<Column> columns(order.size());
  std::vector<int> pivot_owner(order.size(), -1);
  for (std::size_t p = 0; p < order.size(); ++p) {
    Column& col = columns[p];
    for (int face : simplices[static_cast<std::size_t>(order[p])].faces) col.push_back(position[static_cast<std::size_t>(face)]);
    std::sort(col.begin(), col.end());
    while (!col.empty() && pivot_owner[static_cast<std::size_t>(col.back())] >= 0) {
      add_column(col, columns[static_cast<std::size_t>(pivot_owner[static_cast<std::size_t>(col.back())])]);
    }
    if (col.empty()) continue;
    pivot_owner[static_cast<std::size_t>(col.back())] = static_cast<int>(p);

    const Simplex& birth = simplices[static_cast<std::size_t>(order[static_cast<std::size_t>(col.back())])];
    const Simplex& death = simplices[static_cast<std::size_t>(order[p])];
    PointClass cls;
    if (birth.phase == Phase::ascending && death.phase == Phase::ascending) {
      cls = PointClass::ord0;
    } else if (birth.phase == Phase::ascending) {
      cls = birth.dim == 0 ? PointClass::ext0 : PointClass::ext1;
    } else {
      cls = PointClass::rel1;
    }
    PersistencePoint point{birth.value, death.value, cls, birth.node, death.node};
    const bool trivial = point.birth == point.death;
    if (trivial && (cls == PointClass::ord0 || cls == PointClass::rel1)) continue;
    diagram.points.push_back(point);
  }
  return diagram;
}

Diagram regular_persistence(const FilteredGraph& fg) {
  const MapperGraph& g = fg.graph;
  const auto nv = static_cast<std::size_t>(g.node_count());
  Diagram diagram;
  if (nv == 0) return diagram;

  struct Event {
    double value;
    int dim;
    std::size_t key;
  };
  std::vector<Event> events;
  events.reserve(nv + g.edges.size());
  for (std::size_t v = 0; v < nv; ++v) events.push_back({fg.node_values(static_cast<Index>(v)), 0, v});
  for (std::size_t k = 0; k < g.edges.size(); ++k) events.push_back({fg.edge_values(static_cast<Index>(k)), 1, k});
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return std::tie(a.value, a.dim, a.key) < std::tie(b.value, b.dim, b.key);
  });

  std::vector<std::size_t> parent(nv);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::vector<Index> oldest(nv);  // node realizing the component minimum, per root
  std::iota(oldest.begin(), oldest.end(), Index{0});
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  auto younger = [&](Index a, Index b) {
    const double va = fg.node_values(a);
    const double vb = fg.node_values(b);
    return va != vb ? va > vb : a > b;
  };

  for (const Event& ev : events) {
    if (ev.dim == 0) continue;
    const auto& edge = g.edges[ev.key];
    auto ra = find(static_cast<std::size_t>(edge.source));
    auto rb = find(static_cast<std::size_t>(edge.target));
    if (ra == rb) continue;
    if (younger(oldest[ra], oldest[rb])) std::swap(ra, rb);
    // rb holds the younger component and dies here.
    const Index dying = oldest[rb];
    parent[rb] = ra;
    if (fg.node_values(dying) != ev.value) {
      diagram.points.push_back({fg.node_values(dying), ev.value, PointClass::h0, dying, fg.edge_argmax[ev.key]});
    }
  }

  Index argmax = 0;
  for (Index v = 1; v < g.node_count(); ++v) {
    if (fg.node_values(v) > fg.node_values(argmax)) argmax = v;
  }
  for (std::size_t v = 0; v < nv; ++v) {
    if (find(v) != v) continue;
    const Index birth = oldest[v];
    diagram.points.push_back({fg.node_values(birth), fg.node_values(argmax), PointClass::h0, birth, argmax});
  }
  return diagram;
}

double total_persistence(const Diagram& diagram) {
  double total = 0.0;
  for (const auto& p : diagram.points) total += p.persistence();
  return total;
}

Diagram persistence_diagram(const FilteredGraph& fg, PersistenceMode mode) {
  return mode == PersistenceMode::extended ? extended_persistence(fg) : regular_persistence(fg);
}

Eigen::MatrixXd node_value_jacobian(const MapperGraph& graph, const Eigen::MatrixXd& jacobian) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(graph.node_count(), jacobian.cols());
  if (jacobian.cols() == 0) return out;
  for (const auto& node : graph.nodes) {
    for (Index i : node.members) out.row(node.id) += jacobian.row(i);
    out.row(node.id) /= static_cast<double>(node.members.size());
  }
  return out;
}

Eigen::VectorXd total_persistence_gradient(const Diagram& diagram, const Eigen::MatrixXd& node_jacobian) {
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(node_jacobian.cols());
  if (grad.size() == 0) return grad;
  for (const auto& p : diagram.points) {
    const double sign = p.birth > p.death ? 1.0 : (p.birth < p.death ? -1.0 : 0.0);
    if (sign == 0.0) continue;
    grad += sign * node_jacobian.row(p.birth_node).transpose();
    if (p.death_node) grad -= sign * node_jacobian.row(*p.death_node).transpose();
  }
  return grad;
}

LossGradient loss_and_subgradient(const MapperGraph& graph, const FilterValues& values, PersistenceMode mode) {
  const FilteredGraph fg = map_pers_filtration(graph, values.values);
  const Diagram diagram = persistence_diagram(fg, mode);
  return {total_persistence(diagram),
          total_persistence_gradient(diagram, node_value_jacobian(graph, values.jacobian))};
}

LossGradient loss_and_subgradient(const PointCloud& cloud, const CoverAssignment& assignment,
                                  const FilterFamily& family, const FilterParams& params,
                                  const Clusterer& clusterer, PersistenceMode mode) {
  return loss_and_subgradient(map_comp(cloud, assignment, clusterer), family.evaluate(cloud, params), mode);
}

}  // namespace softmapper
