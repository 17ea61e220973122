#include "softmapper/filters.hpp"

#include <cmath>
#include <stdexcept>

namespace softmapper {

FilterParams::FilterParams(Eigen::VectorXd t) : theta(std::move(t)) {
  if (!theta.allFinite()) throw std::invalid_argument("filter parameters must be finite");
}

FilterValues linear_filter(const PointCloud& cloud, const FilterParams& params) {
  if (params.size() != cloud.dim()) {
    throw std::invalid_argument("linear filter: parameter dimension " + std::to_string(params.size()) +
                                " does not match point dimension " + std::to_string(cloud.dim()));
  }
  return FilterValues{cloud.points() * params.theta, cloud.points()};
}

FilterValues fixed_filter(const Eigen::VectorXd& values) {
  if (values.size() == 0) throw std::invalid_argument("fixed filter: empty value vector");
  if (!values.allFinite()) throw std::invalid_argument("fixed filter: values must be finite");
  return FilterValues{values, Eigen::MatrixXd(values.size(), 0)};
}

FilterValues LinearFilter::evaluate(const PointCloud& cloud, const FilterParams& params) const {
  return linear_filter(cloud, params);
}

FixedFilter::FixedFilter(Eigen::VectorXd values) : values_(std::move(values)) {
  fixed_filter(values_);
}

FilterValues FixedFilter::evaluate(const PointCloud& cloud, const FilterParams& params) const {
  if (values_.size() != cloud.size()) {
    throw std::invalid_argument("fixed filter: " + std::to_string(values_.size()) + " values for " +
                                std::to_string(cloud.size()) + " points");
  }
  if (params.size() != 0) throw std::invalid_argument("fixed filter takes no parameters");
  return fixed_filter(values_);
}

FilterParams diagonal_init(Index p) {
  if (p < 1) throw std::invalid_argument("diagonal_init: dimension must be >= 1");
  return FilterParams(Eigen::VectorXd::Constant(p, 1.0 / std::sqrt(static_cast<double>(p))));
}

}  // namespace softmapper
