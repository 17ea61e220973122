#pragma once

#include "softmapper/point_cloud.hpp"

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace softmapper {

struct KMeans {
  Index k = 3;
  int max_iter = 100;
  std::uint64_t seed = 0;
};

struct SingleLinkage {
  double threshold = 1.0;
};

// The fixed clustering algorithm applied inside every latent cover element.
class Clusterer {
 public:
  using Kind = std::variant<KMeans, SingleLinkage>;

  static Clusterer kmeans(Index k, int max_iter = 100, std::uint64_t seed = 0);
  static Clusterer single_linkage(double threshold);

  const Kind& kind() const noexcept { return kind_; }

 private:
  explicit Clusterer(Kind kind) : kind_(kind) {}
  Kind kind_;
};

using Cluster = std::vector<Index>;

// Partition of `members` into clusters. Each cluster is sorted ascending and clusters are
// ordered by their smallest member.
std::vector<Cluster> cluster(const Clusterer& clusterer, const PointCloud& cloud, std::span<const Index> members);

// Single linkage with threshold = factor * hausdorff_to_subsample(cloud, fraction, seed).
Clusterer threshold_from_hausdorff(const PointCloud& cloud, double fraction, double factor, std::uint64_t seed);

}  // namespace softmapper
