#pragma once

#include "softmapper/mapper.hpp"
#include "softmapper/optimizer.hpp"
#include "softmapper/persistence.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace softmapper::cli {

using Json = nlohmann::ordered_json;

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

struct MapperDocument {
  MapperGraph graph;
  Eigen::VectorXd values;  // node filtration values
  Eigen::VectorXd colors;
};

// {"nodes":[{"id","cover_index","members","value","color"}],"edges":[{"source","target","weight"}]}
Json mapper_to_json(const MapperDocument& doc);
MapperDocument mapper_from_json(const Json& j);

// 8-step viridis ramp over the color range; constant colors map to the middle step.
std::string ramp_color(double c, double lo, double hi);

std::string export_dot(const MapperGraph& graph, const Eigen::VectorXd& colors);

// class,birth,death,birth_node,death_node
void write_diagram_csv(std::ostream& out, const Diagram& diagram);

// epoch,risk,grad_norm,theta_0..theta_{s-1},seconds
void write_trace_csv(std::ostream& out, const Trace& trace);
Trace read_trace_csv(std::istream& in);

/// Standalone SVG learning curve (risk against epoch) with axes.
std::string trace_svg(const Trace& trace);

}  // namespace softmapper::cli
