#pragma once

#include "softmapper/clustering.hpp"
#include "softmapper/cover.hpp"
#include "softmapper/point_cloud.hpp"

#include <vector>

namespace softmapper {

struct MapperNode {
  Index id = 0;
  Index cover_index = 0;  // 0-based column of the assignment matrix
  std::vector<Index> members;  // sorted, nonempty
};

struct MapperEdge {
  Index source = 0;  // source < target
  Index target = 0;
  Index weight = 0;  // number of shared points
};

// One-dimensional nerve of the pullback cover.
struct MapperGraph {
  std::vector<MapperNode> nodes;
  std::vector<MapperEdge> edges;  // sorted by (source, target)

  Index node_count() const noexcept { return static_cast<Index>(nodes.size()); }
  Index edge_count() const noexcept { return static_cast<Index>(edges.size()); }
};

/// Cluster each column's support and connect every pair of clusters that share a point.
MapperGraph map_comp(const PointCloud& cloud, const CoverAssignment& assignment, const Clusterer& clusterer);

/// Nerve of an explicit node list; node ids are reassigned to list positions.
MapperGraph nerve(std::vector<MapperNode> nodes);

/// Components as sorted node-id lists, ordered by smallest id.
std::vector<std::vector<Index>> connected_components(const MapperGraph& graph);

/// #edges - #nodes + #components.
Index first_betti_number(const MapperGraph& graph);

}  // namespace softmapper
