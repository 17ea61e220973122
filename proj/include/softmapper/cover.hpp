#pragma once

#include "softmapper/point_cloud.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace softmapper {

struct Interval {
  double lo;
  double hi;

  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
  double length() const noexcept { return hi - lo; }
};

// r closed intervals of equal length; consecutive ones share a fraction `gain` of it.
class IntervalCover {
 public:
  IntervalCover(std::vector<Interval> intervals, double gain);

  const std::vector<Interval>& intervals() const noexcept { return intervals_; }
  const Interval& operator[](Index j) const { return intervals_[static_cast<std::size_t>(j)]; }
  Index resolution() const noexcept { return static_cast<Index>(intervals_.size()); }
  double gain() const noexcept { return gain_; }

 private:
  std::vector<Interval> intervals_;
  double gain_;
};

/// L = (max - min) / (r - (r - 1) g), a_j = min + j (1 - g) L, b_j = a_j + L.
IntervalCover uniform_cover(const Eigen::VectorXd& values, Index resolution, double gain);

enum class SchemeKind { standard, smooth, gaussian };

using BinaryMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Independent Bernoulli success probabilities p_{ij} for the n x r assignment matrix.
struct AssignmentScheme {
  Eigen::MatrixXd probs;
  SchemeKind kind = SchemeKind::standard;
  double delta = 0.0;  // smooth only

  Index points() const noexcept { return probs.rows(); }
  Index resolution() const noexcept { return probs.cols(); }
};

/// One realization e of a scheme; e(i, j) = 1 puts point i in latent cover element j.
struct CoverAssignment {
  BinaryMatrix e;

  Index points() const noexcept { return e.rows(); }
  Index resolution() const noexcept { return e.cols(); }
  bool operator==(const CoverAssignment&) const = default;
};

/// Bump relaxation of the indicator of [lo, hi] with transition width delta.
double smooth_membership(double f, const Interval& interval, double delta);

AssignmentScheme standard_scheme(const Eigen::VectorXd& values, const IntervalCover& cover);
AssignmentScheme smooth_scheme(const Eigen::VectorXd& values, const IntervalCover& cover, double delta);

/// q_j(x) = exp(-(x - c_j)^T Sigma_j^{-1} (x - c_j)).
AssignmentScheme gaussian_scheme(const PointCloud& cloud, const Eigen::MatrixXd& centers,
                                 const std::vector<Eigen::MatrixXd>& covariances);

CoverAssignment sample(const AssignmentScheme& scheme, std::uint64_t seed);

/// Exact log P(A = e); -infinity when e has probability zero.
double log_prob(const AssignmentScheme& scheme, const CoverAssignment& e);

/// log P(A = e) with probabilities clamped to [1e-12, 1 - 1e-12]; always finite. Diagnostics only.
double log_prob_clamped(const AssignmentScheme& scheme, const CoverAssignment& e);

}  // namespace softmapper
