#pragma once

#include "softmapper/point_cloud.hpp"

#include <Eigen/Dense>

#include <memory>
#include <string>

namespace softmapper {

/// Parameter vector theta of a filter family.
struct FilterParams {
  Eigen::VectorXd theta;

  FilterParams() = default;
  explicit FilterParams(Eigen::VectorXd t);

  Index size() const noexcept { return theta.size(); }
};

/// Filter values f_theta(x_i) and their Jacobian with respect to theta (n x s).
struct FilterValues {
  Eigen::VectorXd values;
  Eigen::MatrixXd jacobian;

  Index size() const noexcept { return values.size(); }
  Index param_dim() const noexcept { return jacobian.cols(); }
  double min() const { return values.minCoeff(); }
  double max() const { return values.maxCoeff(); }
};

/// A parameterized family theta -> f_theta with exact Jacobians.
class FilterFamily {
 public:
  virtual ~FilterFamily() = default;

  virtual FilterValues evaluate(const PointCloud& cloud, const FilterParams& params) const = 0;
  virtual Index param_dim(const PointCloud& cloud) const = 0;
  virtual std::string name() const = 0;
};

/// f_theta(x) = <x, theta>.
class LinearFilter final : public FilterFamily {
 public:
  FilterValues evaluate(const PointCloud& cloud, const FilterParams& params) const override;
  Index param_dim(const PointCloud& cloud) const override { return cloud.dim(); }
  std::string name() const override { return "linear"; }
};

/// Precomputed values with no parameters (s = 0); for build-only runs.
class FixedFilter final : public FilterFamily {
 public:
  explicit FixedFilter(Eigen::VectorXd values);

  FilterValues evaluate(const PointCloud& cloud, const FilterParams& params) const override;
  Index param_dim(const PointCloud&) const override { return 0; }
  std::string name() const override { return "fixed"; }

 private:
  Eigen::VectorXd values_;
};

FilterValues linear_filter(const PointCloud& cloud, const FilterParams& params);
FilterValues fixed_filter(const Eigen::VectorXd& values);

/// (1/sqrt(p), ..., 1/sqrt(p)).
FilterParams diagonal_init(Index p);

}  // namespace softmapper
