#include "softmapper/errors.hpp"
#include "softmapper/point_cloud.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace softmapper;

namespace {

PointCloud csv(const std::string& text, bool header = false) {
  std::istringstream in(text);
  return parse_csv(in, header);
}

PointCloud off(const std::string& text) {
  std::istringstream in(text);
  return parse_off_vertices(in);
}

}  // namespace

TEST_CASE("csv parses rows into points") {
  const auto cloud = csv("0,0\n1,0\n0,1\n");
  CHECK(cloud.size() == 3);
  CHECK(cloud.dim() == 2);
  CHECK(cloud.points()(1, 0) == 1.0);

  const auto wide = csv("1,2,3\n4,5,6\n7,8,9\n10,11,12");
  CHECK(wide.size() == 4);
  CHECK(wide.dim() == 3);
}

TEST_CASE("csv header line is skipped") {
  const auto cloud = csv("x,y\n1.5,-2e-3\n", true);
  CHECK(cloud.size() == 1);
  CHECK(cloud.points()(0, 1) == doctest::Approx(-0.002));
}

TEST_CASE("csv errors name the offending line") {
  try {
    csv("a,b\n");
    FAIL("expected a format error");
  } catch (const FormatError& e) {
    CHECK(e.line() == 1);
  }
  try {
    csv("1,2\n3,4\n5\n");
    FAIL("expected a format error");
  } catch (const FormatError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(csv(""), FormatError);
  CHECK_THROWS_AS(csv("1,nan\n"), FormatError);
}

TEST_CASE("csv loading from disk is deterministic") {
  const auto path = std::filesystem::temp_directory_path() / "softmapper_test_cloud.csv";
  {
    std::ofstream out(path);
    out << "0.1,0.2\n0.3,0.4\n";
  }
  const auto a = load_csv(path, false);
  const auto b = load_csv(path, false);
  CHECK(a.points() == b.points());
  std::filesystem::remove(path);
  CHECK_THROWS(load_csv(path, false));
}

TEST_CASE("off loader keeps vertices and drops faces") {
  const auto tri = off("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n");
  CHECK(tri.size() == 3);
  CHECK(tri.dim() == 3);

  std::ostringstream cube;
  cube << "OFF\n# a cube\n8 6 12\n";
  for (int v = 0; v < 8; ++v) cube << (v & 1) << ' ' << ((v >> 1) & 1) << ' ' << ((v >> 2) & 1) << '\n';
  for (int f = 0; f < 6; ++f) cube << "4 0 1 2 3\n";
  CHECK(off(cube.str()).size() == 8);
}

TEST_CASE("off loader rejects malformed input") {
  CHECK_THROWS_WITH_AS(off("OFF\n0 0 0\n"), doctest::Contains("empty vertex set"), FormatError);
  CHECK_THROWS_AS(off("PLY\n3 1 0\n"), FormatError);
  CHECK_THROWS_WITH_AS(off("OFF\n3 0 0\n0 0 0\n1 0 0\n"), doctest::Contains("vertex count mismatch"), FormatError);
  CHECK_THROWS_AS(off(""), FormatError);
}

TEST_CASE("point cloud invariants") {
  CHECK_THROWS(PointCloud(Eigen::MatrixXd(0, 2)));
  Eigen::MatrixXd bad(1, 1);
  bad << std::numeric_limits<double>::infinity();
  CHECK_THROWS(PointCloud(bad));
  CHECK_THROWS(PointCloud(Eigen::MatrixXd::Zero(3, 2), {{"t", Eigen::VectorXd::Zero(2)}}));
  const PointCloud ok(Eigen::MatrixXd::Zero(3, 2), {{"t", Eigen::VectorXd::Ones(3)}});
  CHECK(ok.attribute("t").sum() == 3.0);
  CHECK_THROWS(ok.attribute("missing"));
}

TEST_CASE("normalize_counts") {
  Eigen::MatrixXd x(2, 2);
  x << 1, 1, 1, 3;
  const auto out = normalize_counts(PointCloud(x), 2.0).points();
  CHECK(out(0, 0) == doctest::Approx(std::log(2.0)));
  CHECK(out(0, 1) == doctest::Approx(std::log(2.0)));

  const auto big = normalize_counts(PointCloud(x), 1e4).points();
  CHECK(big(1, 0) == doctest::Approx(std::log(1.0 + 2500.0)));
  CHECK(big(1, 1) == doctest::Approx(std::log(1.0 + 7500.0)));

  Eigen::MatrixXd zero(1, 2);
  zero << 0, 0;
  CHECK_THROWS_WITH(normalize_counts(PointCloud(zero), 1.0), doctest::Contains("row 0"));
  Eigen::MatrixXd neg(1, 2);
  neg << -1, 2;
  CHECK_THROWS(normalize_counts(PointCloud(neg), 1.0));
}

TEST_CASE("normalize_counts is row-local") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  Eigen::MatrixXd x(6, 4);
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.cols(); ++j) x(i, j) = u(rng) + 0.1;
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(6);
  perm.indices() << 3, 0, 5, 1, 4, 2;
  const Eigen::MatrixXd a = perm * normalize_counts(PointCloud(x), 100.0).points();
  const Eigen::MatrixXd b = normalize_counts(PointCloud(perm * x), 100.0).points();
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("hausdorff distance to a subsample") {
  Eigen::MatrixXd line(2, 1);
  line << 0, 10;
  Eigen::MatrixXd first(1, 1);
  first << 0;
  CHECK(hausdorff_distance(line, first) == 10.0);
  // Either one-point subsample of {0, 10} is at distance 10.
  CHECK(hausdorff_to_subsample(PointCloud(line), 0.5, 7) == 10.0);

  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  Eigen::MatrixXd x(100, 3);
  for (Index i = 0; i < x.rows(); ++i)
    for (Index k = 0; k < 3; ++k) x(i, k) = g(rng);
  const PointCloud cloud(x);
  CHECK(hausdorff_to_subsample(cloud, 1.0, 5) == 0.0);

  const auto picked = subsample_indices(100, 1.0 / 3.0, 5);
  CHECK(picked.size() == 34);
  Eigen::MatrixXd sub(static_cast<Index>(picked.size()), 3);
  for (std::size_t k = 0; k < picked.size(); ++k) sub.row(static_cast<Index>(k)) = x.row(picked[k]);
  CHECK(hausdorff_to_subsample(cloud, 1.0 / 3.0, 5) == doctest::Approx(oracle::brute_force_hausdorff(x, sub)).epsilon(1e-12));
  CHECK(hausdorff_to_subsample(cloud, 1.0 / 3.0, 5) > 0.0);
  CHECK(subsample_indices(100, 0.3, 9) == subsample_indices(100, 0.3, 9));
}

TEST_CASE("hausdorff is zero exactly when the subsample hits every distinct point") {
  Eigen::MatrixXd dup(4, 1);
  dup << 1, 1, 2, 2;
  const PointCloud cloud(dup);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto picked = subsample_indices(4, 0.5, seed);
    bool both = false;
    {
      std::set<double> seen;
      for (Index i : picked) seen.insert(dup(i, 0));
      both = seen.size() == 2;
    }
    CHECK((hausdorff_to_subsample(cloud, 0.5, seed) == 0.0) == both);
  }
  CHECK_THROWS(subsample_indices(10, 0.0, 1));
  CHECK_THROWS(subsample_indices(10, 1.5, 1));
}
