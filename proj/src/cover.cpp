#include "softmapper/cover.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace softmapper {

IntervalCover::IntervalCover(std::vector<Interval> intervals, double gain)
    : intervals_(std::move(intervals)), gain_(gain) {
  if (intervals_.empty()) throw std::invalid_argument("interval cover needs at least one interval");
  if (!(gain_ > 0.0 && gain_ < 1.0)) throw std::invalid_argument("gain must lie in (0, 1)");
  if (intervals_.size() == 1) {
    if (!(intervals_[0].lo <= intervals_[0].hi)) throw std::invalid_argument("interval with lo > hi");
    return;
  }
  const double length = intervals_[0].length();
  const double tol = 1e-9 * length;
  for (std::size_t j = 0; j < intervals_.size(); ++j) {
    const Interval& I = intervals_[j];
    if (!(I.lo < I.hi)) throw std::invalid_argument("interval with lo >= hi");
    if (std::abs(I.length() - length) > tol) throw std::invalid_argument("intervals must share one length");
    if (j + 1 < intervals_.size()) {
      const Interval& next = intervals_[j + 1];
      if (!(next.lo < I.hi)) throw std::invalid_argument("consecutive intervals must overlap");
      if (std::abs((I.hi - next.lo) - gain_ * length) > tol) {
        throw std::invalid_argument("consecutive overlap must equal gain * length");
      }
    }
  }
}

IntervalCover uniform_cover(const Eigen::VectorXd& values, Index resolution, double gain) {
  if (resolution < 1) throw std::invalid_argument("resolution must be >= 1");
  if (!(gain > 0.0 && gain < 1.0)) throw std::invalid_argument("gain must lie in (0, 1)");
  if (values.size() == 0) throw std::invalid_argument("cannot cover an empty value set");
  const double lo = values.minCoeff();
  const double hi = values.maxCoeff();
  if (resolution == 1) return IntervalCover({{lo, hi}}, gain);
  if (!(hi > lo)) throw std::invalid_argument("constant filter values cannot be covered by more than one interval");

  const auto r = static_cast<double>(resolution);
  const double length = (hi - lo) / (r - (r - 1.0) * gain);
  const double stride = (1.0 - gain) * length;
  std::vector<Interval> intervals;
  intervals.reserve(static_cast<std::size_t>(resolution));
  for (Index j = 0; j < resolution; ++j) {
    const double a = lo + static_cast<double>(j) * stride;
    intervals.push_back({a, a + length});
  }
  // Guard the union against rounding at the top end.
  intervals.back().hi = std::max(intervals.back().hi, hi);
  return IntervalCover(std::move(intervals), gain);
}

double smooth_membership(double f, const Interval& interval, double delta) {
  if (interval.contains(f)) return 1.0;
  double t = 0.0;
  if (f < interval.lo) {
    t = (interval.lo - f) / delta;
  } else {
    t = (f - interval.hi) / delta;
  }
  if (t >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

AssignmentScheme standard_scheme(const Eigen::VectorXd& values, const IntervalCover& cover) {
  AssignmentScheme scheme;
  scheme.kind = SchemeKind::standard;
  scheme.probs = Eigen::MatrixXd::Zero(values.size(), cover.resolution());
  for (Index i = 0; i < values.size(); ++i) {
    bool covered = false;
    for (Index j = 0; j < cover.resolution(); ++j) {
      if (cover[j].contains(values(i))) {
        scheme.probs(i, j) = 1.0;
        covered = true;
      }
    }
    if (!covered) {
      throw std::invalid_argument("filter value of point " + std::to_string(i) + " lies outside the cover");
    }
  }
  return scheme;
}

AssignmentScheme smooth_scheme(const Eigen::VectorXd& values, const IntervalCover& cover, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("smooth scheme: delta must be positive");
  AssignmentScheme scheme;
  scheme.kind = SchemeKind::smooth;
  scheme.delta = delta;
  scheme.probs.resize(values.size(), cover.resolution());
  for (Index i = 0; i < values.size(); ++i) {
    for (Index j = 0; j < cover.resolution(); ++j) {
      scheme.probs(i, j) = smooth_membership(values(i), cover[j], delta);
    }
  }
  return scheme;
}

AssignmentScheme gaussian_scheme(const PointCloud& cloud, const Eigen::MatrixXd& centers,
                                 const std::vector<Eigen::MatrixXd>& covariances) {
  const Index r = centers.rows();
  if (centers.cols() != cloud.dim()) throw std::invalid_argument("gaussian scheme: center dimension mismatch");
  if (static_cast<Index>(covariances.size()) != r) {
    throw std::invalid_argument("gaussian scheme: need one covariance per center");
  }
  std::vector<Eigen::LLT<Eigen::MatrixXd>> factors;
  factors.reserve(covariances.size());
  for (std::size_t j = 0; j < covariances.size(); ++j) {
    const Eigen::MatrixXd& sigma = covariances[j];
    if (sigma.rows() != cloud.dim() || sigma.cols() != cloud.dim()) {
      throw std::invalid_argument("gaussian scheme: covariance " + std::to_string(j) + " has wrong shape");
    }
    if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, sigma.cwiseAbs().maxCoeff())) {
      throw std::invalid_argument("gaussian scheme: covariance " + std::to_string(j) + " is not symmetric");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) {
      throw std::invalid_argument("gaussian scheme: covariance " + std::to_string(j) + " is not positive definite");
    }
    factors.push_back(std::move(llt));
  }

  AssignmentScheme scheme;
  scheme.kind = SchemeKind::gaussian;
  scheme.probs.resize(cloud.size(), r);
  for (Index j = 0; j < r; ++j) {
    for (Index i = 0; i < cloud.size(); ++i) {
      const Eigen::VectorXd d = (cloud.point(i) - centers.row(j)).transpose();
      const double quad = d.dot(factors[static_cast<std::size_t>(j)].solve(d));
      scheme.probs(i, j) = std::exp(-std::max(quad, 0.0));
    }
  }
  return scheme;
}

CoverAssignment sample(const AssignmentScheme& scheme, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  CoverAssignment out{BinaryMatrix::Zero(scheme.points(), scheme.resolution())};
  for (Index i = 0; i < scheme.points(); ++i) {
    for (Index j = 0; j < scheme.resolution(); ++j) {
      const double p = scheme.probs(i, j);
      // Degenerate coordinates consume no randomness so that Dirac entries stay exact.
      if (p >= 1.0) {
        out.e(i, j) = 1;
      } else if (p > 0.0) {
        out.e(i, j) = uniform(rng) < p ? 1 : 0;
      }
    }
  }
  return out;
}

namespace {

template <class Clamp>
double bernoulli_log_mass(const AssignmentScheme& scheme, const CoverAssignment& e, Clamp clamp) {
  if (e.points() != scheme.points() || e.resolution() != scheme.resolution()) {
    throw std::invalid_argument("log_prob: assignment shape does not match scheme");
  }
  double total = 0.0;
  for (Index i = 0; i < scheme.points(); ++i) {
    for (Index j = 0; j < scheme.resolution(); ++j) {
      const double p = clamp(scheme.probs(i, j));
      const double mass = e.e(i, j) != 0 ? p : 1.0 - p;
      if (mass == 1.0) continue;
      if (mass <= 0.0) return -std::numeric_limits<double>::infinity();
      total += std::log(mass);
    }
  }
  return total;
}

}  // namespace

double log_prob(const AssignmentScheme& scheme, const CoverAssignment& e) {
  return bernoulli_log_mass(scheme, e, [](double p) { return p; });
}

double log_prob_clamped(const AssignmentScheme& scheme, const CoverAssignment& e) {
  return bernoulli_log_mass(scheme, e, [](double p) { return std::clamp(p, 1e-12, 1.0 - 1e-12); });
}

}  // namespace softmapper
