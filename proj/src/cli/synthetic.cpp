#include "softmapper/cli/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace softmapper::cli {

namespace {

constexpr double kLegLength = 4.5;
constexpr double kLegFraction = 0.0075;

}  // namespace

const std::vector<std::string>& synthetic_names() {
  static const std::vector<std::string> names{"circle", "cylinder", "y_shape", "plane_with_leg"};
  return names;
}

PointCloud generate_synthetic(const std::string& name, Index n, double noise, std::uint64_t seed) {
  if (n < 10) throw std::invalid_argument("synthetic clouds need n >= 10");
  if (!(noise >= 0.0)) throw std::invalid_argument("noise must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr double two_pi = 2.0 * std::numbers::pi;

  Eigen::MatrixXd x;
  if (name == "circle") {
    x.resize(n, 2);
    for (Index i = 0; i < n; ++i) {
      const double t = two_pi * unit(rng);
      x.row(i) << std::cos(t), std::sin(t);
    }
  } else if (name == "cylinder") {
    x.resize(n, 3);
    for (Index i = 0; i < n; ++i) {
      const double t = two_pi * unit(rng);
      x.row(i) << std::cos(t), std::sin(t), 4.0 * unit(rng);
    }
  } else if (name == "y_shape") {
    x.resize(n, 3);
    const double s = std::numbers::sqrt2 / 2.0;
    for (Index i = 0; i < n; ++i) {
      // Uniform arc length over the three unit segments.
      const double u = 3.0 * unit(rng);
      const double t = u - std::floor(u);
      switch (static_cast<int>(u)) {
        case 0: x.row(i) << 0.0, 0.0, t; break;
        case 1: x.row(i) << s * t, 0.0, 1.0 + s * t; break;
        default: x.row(i) << -s * t, 0.0, 1.0 + s * t; break;
      }
    }
  } else if (name == "plane_with_leg") {
    x.resize(n, 3);
    const auto leg = std::max<Index>(2, static_cast<Index>(std::lround(kLegFraction * static_cast<double>(n))));
    for (Index i = 0; i < n - leg; ++i) x.row(i) << unit(rng) - 0.5, unit(rng) - 0.5, 0.0;
    // Evenly spaced along the leg.
    for (Index j = 0; j < leg; ++j) {
      x.row(n - leg + j) << 0.0, 0.0, -kLegLength * (static_cast<double>(j) + 0.5) / static_cast<double>(leg);
    }
  } else {
    throw std::invalid_argument("unknown synthetic shape '" + name + "'");
  }

  if (noise > 0.0) {
    std::normal_distribution<double> gauss(0.0, noise);
    for (Index i = 0; i < x.rows(); ++i) {
      for (Index k = 0; k < x.cols(); ++k) x(i, k) += gauss(rng);
    }
  }
  return PointCloud(std::move(x));
}

}  // namespace softmapper::cli
