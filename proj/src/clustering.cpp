#include "softmapper/clustering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace softmapper {

Clusterer Clusterer::kmeans(Index k, int max_iter, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (max_iter < 1) throw std::invalid_argument("kmeans: max_iter must be >= 1");
  return Clusterer(KMeans{k, max_iter, seed});
}

Clusterer Clusterer::single_linkage(double threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("single linkage: threshold must be > 0");
  return Clusterer(SingleLinkage{threshold});
}

namespace {

constexpr Index kGridMaxDim = 3;
constexpr std::size_t kGridMinPoints = 64;

std::vector<Cluster> canonicalize(std::vector<Cluster> clusters) {
  std::erase_if(clusters, [](const Cluster& c) { return c.empty(); });
  for (auto& c : clusters) std::sort(c.begin(), c.end());
  std::sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) { return a.front() < b.front(); });
  return clusters;
}

std::vector<Cluster> run_kmeans(const KMeans& params, const PointCloud& cloud, std::span<const Index> members) {
  const auto m = static_cast<Index>(members.size());
  if (m < params.k) {
    std::vector<Cluster> singletons;
    for (Index i : members) singletons.push_back({i});
    return canonicalize(std::move(singletons));
  }

  Eigen::MatrixXd x(m, cloud.dim());
  for (Index a = 0; a < m; ++a) x.row(a) = cloud.point(members[static_cast<std::size_t>(a)]);

  // k-means++ seeding.
  std::mt19937_64 rng(params.seed);
  std::vector<Index> seeds{std::uniform_int_distribution<Index>(0, m - 1)(rng)};
  Eigen::VectorXd nearest = (x.rowwise() - x.row(seeds[0])).rowwise().squaredNorm();
  while (static_cast<Index>(seeds.size()) < params.k) {
    const double total = nearest.sum();
    if (!(total > 0.0)) break;  // every point coincides with a chosen center
    std::uniform_real_distribution<double> uniform(0.0, total);
    double target = uniform(rng);
    Index pick = m - 1;
    for (Index a = 0; a < m; ++a) {
      target -= nearest(a);
      if (target < 0.0 && nearest(a) > 0.0) {
        pick = a;
        break;
      }
    }
    while (nearest(pick) <= 0.0) --pick;
    seeds.push_back(pick);
    nearest = nearest.cwiseMin((x.rowwise() - x.row(pick)).rowwise().squaredNorm());
  }

  const auto k = static_cast<Index>(seeds.size());
  Eigen::MatrixXd centers(k, x.cols());
  for (Index c = 0; c < k; ++c) centers.row(c) = x.row(seeds[static_cast<std::size_t>(c)]);

  std::vector<Index> label(static_cast<std::size_t>(m), -1);
  for (int iter = 0; iter < params.max_iter; ++iter) {
    bool changed = false;
    for (Index a = 0; a < m; ++a) {
      Index best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (Index c = 0; c < k; ++c) {
        const double d = (x.row(a) - centers.row(c)).squaredNorm();
        if (d < best_d) {  // strict: ties go to the lowest centroid index
          best_d = d;
          best = c;
        }
      }
      if (label[static_cast<std::size_t>(a)] != best) {
        label[static_cast<std::size_t>(a)] = best;
        changed = true;
      }
    }
    if (!changed) break;
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, x.cols());
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
    for (Index a = 0; a < m; ++a) {
      sums.row(label[static_cast<std::size_t>(a)]) += x.row(a);
      counts(label[static_cast<std::size_t>(a)]) += 1.0;
    }
    for (Index c = 0; c < k; ++c) {
      if (counts(c) > 0.0) centers.row(c) = sums.row(c) / counts(c);
    }
  }

  std::vector<Cluster> clusters(static_cast<std::size_t>(k));
  for (Index a = 0; a < m; ++a) {
    clusters[static_cast<std::size_t>(label[static_cast<std::size_t>(a)])].push_back(members[static_cast<std::size_t>(a)]);
  }
  return canonicalize(std::move(clusters));
}

std::vector<Cluster> run_single_linkage(const SingleLinkage& params, const PointCloud& cloud,
                                        std::span<const Index> members) {
  const std::size_t m = members.size();
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  auto unite = [&](std::size_t a, std::size_t b) {
    const auto ra = find(a);
    const auto rb = find(b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  };
  const double t2 = params.threshold * params.threshold;
  auto close = [&](std::size_t a, std::size_t b) {
    return (cloud.point(members[a]) - cloud.point(members[b])).squaredNorm() <= t2;
  };

  const Index dim = cloud.dim();
  if (dim <= kGridMaxDim && m > kGridMinPoints) {
    // Bucket points into cubes of side `threshold`; linked pairs lie in adjacent cubes.
    using Cell = std::array<std::int64_t, kGridMaxDim>;
    auto cell_of = [&](std::size_t a) {
      Cell c{};
      for (Index k = 0; k < dim; ++k) {
        c[static_cast<std::size_t>(k)] =
            static_cast<std::int64_t>(std::floor(cloud.points()(members[a], k) / params.threshold));
      }
      return c;
    };
    std::map<Cell, std::vector<std::size_t>> grid;
    for (std::size_t a = 0; a < m; ++a) grid[cell_of(a)].push_back(a);

    std::vector<Cell> offsets{Cell{}};
    for (Index k = 0; k < dim; ++k) {
      std::vector<Cell> next;
      for (const Cell& o : offsets) {
        for (std::int64_t d = -1; d <= 1; ++d) {
          Cell c = o;
          c[static_cast<std::size_t>(k)] = d;
          next.push_back(c);
        }
      }
      offsets.swap(next);
    }
    for (const auto& [cell, bucket] : grid) {
      for (const Cell& o : offsets) {
        Cell neighbor = cell;
        for (std::size_t k = 0; k < neighbor.size(); ++k) neighbor[k] += o[k];
        if (neighbor < cell) continue;  // each unordered cell pair once
        auto it = grid.find(neighbor);
        if (it == grid.end()) continue;
        const bool same = neighbor == cell;
        for (std::size_t ia = 0; ia < bucket.size(); ++ia) {
          for (std::size_t ib = same ? ia + 1 : 0; ib < it->second.size(); ++ib) {
            const std::size_t a = bucket[ia];
            const std::size_t b = it->second[ib];
            if (find(a) != find(b) && close(a, b)) unite(a, b);
          }
        }
      }
    }
  } else {
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a + 1; b < m; ++b) {
        if (find(a) != find(b) && close(a, b)) unite(a, b);
      }
    }
  }

  std::vector<Cluster> clusters(m);
  for (std::size_t a = 0; a < m; ++a) clusters[find(a)].push_back(members[a]);
  return canonicalize(std::move(clusters));
}

}  // namespace

std::vector<Cluster> cluster(const Clusterer& clusterer, const PointCloud& cloud, std::span<const Index> members) {
  if (members.empty()) throw std::invalid_argument("cluster: empty member set");
  for (Index i : members) {
    if (i < 0 || i >= cloud.size()) throw std::out_of_range("cluster: member index out of range");
  }
  return std::visit(
      [&](const auto& params) -> std::vector<Cluster> {
        using T = std::decay_t<decltype(params)>;
        if constexpr (std::is_same_v<T, KMeans>) {
          return run_kmeans(params, cloud, members);
        } else {
          return run_single_linkage(params, cloud, members);
        }
      },
      clusterer.kind());
}

Clusterer threshold_from_hausdorff(const PointCloud& cloud, double fraction, double factor, std::uint64_t seed) {
  if (!(factor > 0.0)) throw std::invalid_argument("threshold factor must be > 0");
  return Clusterer::single_linkage(factor * hausdorff_to_subsample(cloud, fraction, seed));
}

}  // namespace softmapper
