#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace softmapper {

using Index = Eigen::Index;

// n points in R^p, Euclidean metric, plus optional per-point scalar attributes
// (timepoints, gene columns, ...) that are carried for coloring only.
class PointCloud {
 public:
  using Attributes = std::map<std::string, Eigen::VectorXd>;

  explicit PointCloud(Eigen::MatrixXd points, Attributes attributes = {});

  Index size() const noexcept { return points_.rows(); }
  Index dim() const noexcept { return points_.cols(); }

  const Eigen::MatrixXd& points() const noexcept { return points_; }
  auto point(Index i) const { return points_.row(i); }

  const Attributes& attributes() const noexcept { return attributes_; }
  bool has_attribute(const std::string& name) const { return attributes_.count(name) != 0; }
  const Eigen::VectorXd& attribute(const std::string& name) const;

  PointCloud with_attribute(const std::string& name, Eigen::VectorXd values) const;

  double distance(Index i, Index j) const { return (points_.row(i) - points_.row(j)).norm(); }

 private:
  Eigen::MatrixXd points_;
  Attributes attributes_;
};

PointCloud parse_csv(std::istream& in, bool has_header);
PointCloud load_csv(const std::filesystem::path& path, bool has_header);

// Vertex coordinates of an ASCII OFF mesh; faces are skipped.
PointCloud parse_off_vertices(std::istream& in);
PointCloud load_off_vertices(const std::filesystem::path& path);

// x'_{ij} = log(1 + scale * x_{ij} / sum_k x_{ik}). Rows must be nonnegative with a positive sum.
PointCloud normalize_counts(const PointCloud& cloud, double scale);

// Symmetrized Hausdorff distance between the row sets of `a` and `b`.
double hausdorff_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// ceil(fraction * n) distinct indices drawn uniformly without replacement, sorted.
std::vector<Index> subsample_indices(Index n, double fraction, std::uint64_t seed);

// Hausdorff distance between the cloud and a seeded uniform subsample of it.
double hausdorff_to_subsample(const PointCloud& cloud, double fraction, std::uint64_t seed);

}  // namespace softmapper
