#include "softmapper/mapper.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace softmapper {

namespace {

Index intersection_size(const std::vector<Index>& a, const std::vector<Index>& b) {
  Index count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

}  // namespace

MapperGraph nerve(std::vector<MapperNode> nodes) {
  MapperGraph graph;
  graph.nodes = std::move(nodes);
  for (std::size_t u = 0; u < graph.nodes.size(); ++u) {
    auto& node = graph.nodes[u];
    if (node.members.empty()) throw std::invalid_argument("mapper node with no members");
    std::sort(node.members.begin(), node.members.end());
    node.id = static_cast<Index>(u);
  }
  for (std::size_t u = 0; u < graph.nodes.size(); ++u) {
    for (std::size_t v = u + 1; v < graph.nodes.size(); ++v) {
      const Index shared = intersection_size(graph.nodes[u].members, graph.nodes[v].members);
      if (shared > 0) graph.edges.push_back({static_cast<Index>(u), static_cast<Index>(v), shared});
    }
  }
  return graph;
}

MapperGraph map_comp(const PointCloud& cloud, const CoverAssignment& assignment, const Clusterer& clusterer) {
  if (assignment.points() != cloud.size()) {
    throw std::invalid_argument("map_comp: assignment has " + std::to_string(assignment.points()) +
                                " rows for " + std::to_string(cloud.size()) + " points");
  }
  std::vector<MapperNode> nodes;
  std::vector<Index> support;
  for (Index j = 0; j < assignment.resolution(); ++j) {
    support.clear();
    for (Index i = 0; i < assignment.points(); ++i) {
      if (assignment.e(i, j) != 0) support.push_back(i);
    }
    if (support.empty()) continue;
    for (auto& members : cluster(clusterer, cloud, support)) {
      nodes.push_back(MapperNode{0, j, std::move(members)});
    }
  }
  return nerve(std::move(nodes));
}

std::vector<std::vector<Index>> connected_components(const MapperGraph& graph) {
  const auto n = static_cast<std::size_t>(graph.node_count());
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& edge : graph.edges) {
    const auto a = find(static_cast<std::size_t>(edge.source));
    const auto b = find(static_cast<std::size_t>(edge.target));
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::vector<Index>> by_root(n);
  for (std::size_t v = 0; v < n; ++v) by_root[find(v)].push_back(static_cast<Index>(v));
  std::vector<std::vector<Index>> components;
  for (auto& c : by_root) {
    if (!c.empty()) components.push_back(std::move(c));
  }
  return components;
}

Index first_betti_number(const MapperGraph& graph) {
  return graph.edge_count() - graph.node_count() + static_cast<Index>(connected_components(graph).size());
}

}  // namespace softmapper
