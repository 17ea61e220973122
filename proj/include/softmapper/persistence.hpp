#pragma once

#include "softmapper/clustering.hpp"
#include "softmapper/cover.hpp"
#include "softmapper/filters.hpp"
#include "softmapper/mapper.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string_view>
#include <vector>

namespace softmapper {

// Mapper graph filtered by mean node values; edges take the max of their endpoints.
struct FilteredGraph {
  MapperGraph graph;
  Eigen::VectorXd node_values;
  Eigen::VectorXd edge_values;
  std::vector<Index> edge_argmax;  // endpoint realizing each edge value, ties -> smaller id
};

FilteredGraph map_pers_filtration(const MapperGraph& graph, const Eigen::VectorXd& filter_values);

enum class PointClass { ord0, ext0, ext1, rel1, h0 };

std::string_view to_string(PointClass c);

struct PersistencePoint {
  double birth = 0.0;
  double death = 0.0;
  PointClass cls = PointClass::h0;
  Index birth_node = 0;                // node whose value equals `birth`
  std::optional<Index> death_node;     // node whose value equals `death`

  double persistence() const noexcept { return birth > death ? birth - death : death - birth; }
};

struct Diagram {
  std::vector<PersistencePoint> points;

  std::size_t count(PointClass c) const;
};

/// Extended persistence of the graph, computed as ordinary persistence of the coned complex:
/// the apex comes first, then vertices and edges by ascending value, then cone edges (over
/// vertices) and cone triangles (over edges, valued at the lower endpoint) by descending value.
Diagram extended_persistence(const FilteredGraph& fg);

/// Sublevel-set H0. Each component's essential class is paired with the global maximum.
Diagram regular_persistence(const FilteredGraph& fg);

/// Sum of |birth - death|.
double total_persistence(const Diagram& diagram);

enum class PersistenceMode { regular, extended };

Diagram persistence_diagram(const FilteredGraph& fg, PersistenceMode mode);

struct LossGradient {
  double loss = 0.0;
  Eigen::VectorXd d_theta;
};

/// Per-node gradient of the mean filter value, |V| x s.
Eigen::MatrixXd node_value_jacobian(const MapperGraph& graph, const Eigen::MatrixXd& jacobian);

/// Subgradient of total persistence through the diagram's provenance.
Eigen::VectorXd total_persistence_gradient(const Diagram& diagram, const Eigen::MatrixXd& node_jacobian);

/// Total persistence of MapPers(graph, f) and a subgradient with respect to theta.
LossGradient loss_and_subgradient(const MapperGraph& graph, const FilterValues& values, PersistenceMode mode);

/// Same, starting from an assignment: the graph is MapComp(e) under `clusterer`.
LossGradient loss_and_subgradient(const PointCloud& cloud, const CoverAssignment& assignment,
                                  const FilterFamily& family, const FilterParams& params,
                                  const Clusterer& clusterer, PersistenceMode mode);

}  // namespace softmapper
