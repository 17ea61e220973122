#pragma once

#include "softmapper/point_cloud.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace softmapper::cli {

// Shapes whose topologically best linear direction is known in closed form:
//   circle          unit circle in the xy-plane
//   cylinder        radius 1, height 4, axis z
//   y_shape         stem (0,0,0)-(0,0,1) and two unit arms leaving (0,0,1) at +-45 deg in the xz-plane
//   plane_with_leg  unit square centered in the xy-plane plus a thin leg of length 4.5 hanging
//                   from its center along -z (0.75% of the points, evenly spaced)
// Isotropic Gaussian noise of standard deviation `noise` is added to every coordinate.
PointCloud generate_synthetic(const std::string& name, Index n, double noise, std::uint64_t seed);

const std::vector<std::string>& synthetic_names();

}  // namespace softmapper::cli
