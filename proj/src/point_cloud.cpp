#include "softmapper/point_cloud.hpp"

#include "softmapper/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string_view>

namespace softmapper {

PointCloud::PointCloud(Eigen::MatrixXd points, Attributes attributes)
    : points_(std::move(points)), attributes_(std::move(attributes)) {
  if (points_.rows() < 1 || points_.cols() < 1) {
    throw std::invalid_argument("point cloud must have at least one point and one dimension");
  }
  if (!points_.allFinite()) {
    throw std::invalid_argument("point cloud contains non-finite coordinates");
  }
  for (const auto& [name, values] : attributes_) {
    if (values.size() != points_.rows()) {
      throw std::invalid_argument("attribute '" + name + "' has length " +
                                  std::to_string(values.size()) + ", expected " +
                                  std::to_string(points_.rows()));
    }
  }
}

const Eigen::VectorXd& PointCloud::attribute(const std::string& name) const {
  auto it = attributes_.find(name);
  if (it == attributes_.end()) throw std::out_of_range("no attribute named '" + name + "'");
  return it->second;
}

PointCloud PointCloud::with_attribute(const std::string& name, Eigen::VectorXd values) const {
  Attributes attrs = attributes_;
  attrs[name] = std::move(values);
  return PointCloud(points_, std::move(attrs));
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view token, double& out) {
  token = trim(token);
  if (token.empty()) return false;
  if (token.front() == '+') token.remove_prefix(1);
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

Eigen::MatrixXd rows_to_matrix(const std::vector<std::vector<double>>& rows) {
  Eigen::MatrixXd m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return m;
}

}  // namespace

PointCloud parse_csv(std::istream& in, bool has_header) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (has_header && lineno == 1) continue;
    std::string_view view = trim(line);
    if (view.empty()) continue;

    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = view.find(',', start);
      const auto cell = view.substr(start, comma == std::string_view::npos ? view.npos : comma - start);
      double value = 0.0;
      if (!parse_double(cell, value)) {
        throw FormatError("non-numeric cell '" + std::string(trim(cell)) + "'", lineno);
      }
      row.push_back(value);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw FormatError("expected " + std::to_string(rows.front().size()) + " columns, found " +
                            std::to_string(row.size()),
                        lineno);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError("empty file: no data rows", std::max<std::size_t>(lineno, 1));
  return PointCloud(rows_to_matrix(rows));
}

PointCloud load_csv(const std::filesystem::path& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return parse_csv(in, has_header);
}

PointCloud parse_off_vertices(std::istream& in) {
  // Tokenize while tracking line numbers; '#' starts a comment.
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::pair<std::string, std::size_t>> tokens;
  auto next_token = [&](std::size_t idx) -> const std::pair<std::string, std::size_t>* {
    while (tokens.size() <= idx) {
      if (!std::getline(in, line)) return nullptr;
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) tokens.emplace_back(tok, lineno);
    }
    return &tokens[idx];
  };

  std::size_t pos = 0;
  const auto* header = next_token(pos++);
  if (header == nullptr) throw FormatError("empty file: missing OFF header", 1);
  if (header->first != "OFF") throw FormatError("expected 'OFF' header, found '" + header->first + "'", header->second);

  long counts[3] = {0, 0, 0};
  for (long& c : counts) {
    const auto* tok = next_token(pos++);
    if (tok == nullptr) throw FormatError("missing vertex/face/edge counts", lineno);
    auto [ptr, ec] = std::from_chars(tok->first.data(), tok->first.data() + tok->first.size(), c);
    if (ec != std::errc() || ptr != tok->first.data() + tok->first.size() || c < 0) {
      throw FormatError("invalid count '" + tok->first + "'", tok->second);
    }
  }
  if (counts[0] == 0) throw FormatError("empty vertex set", header->second + 1);

  Eigen::MatrixXd points(counts[0], 3);
  for (Index v = 0; v < counts[0]; ++v) {
    for (Index k = 0; k < 3; ++k) {
      const auto* tok = next_token(pos++);
      if (tok == nullptr) {
        throw FormatError("vertex count mismatch: header declares " + std::to_string(counts[0]) +
                              " vertices, file ends after " + std::to_string(v),
                          lineno);
      }
      double value = 0.0;
      if (!parse_double(tok->first, value)) {
        throw FormatError("non-numeric vertex coordinate '" + tok->first + "'", tok->second);
      }
      points(v, k) = value;
    }
  }
  return PointCloud(std::move(points));
}

PointCloud load_off_vertices(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return parse_off_vertices(in);
}

PointCloud normalize_counts(const PointCloud& cloud, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("normalize_counts: scale must be positive");
  const Eigen::MatrixXd& x = cloud.points();
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    if ((x.row(i).array() < 0.0).any()) {
      throw std::invalid_argument("normalize_counts: negative entry in row " + std::to_string(i));
    }
    const double total = x.row(i).sum();
    if (!(total > 0.0)) {
      throw std::invalid_argument("normalize_counts: zero row sum in row " + std::to_string(i));
    }
    out.row(i) = (1.0 + scale * x.row(i).array() / total).log();
  }
  return PointCloud(std::move(out), cloud.attributes());
}

namespace {

// sup over rows of `from` of the distance to the nearest row of `to`.
double directed_hausdorff(const Eigen::MatrixXd& from, const Eigen::MatrixXd& to) {
  double worst = 0.0;
  for (Index i = 0; i < from.rows(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < to.rows() && nearest > worst; ++j) {
      nearest = std::min(nearest, (from.row(i) - to.row(j)).squaredNorm());
    }
    worst = std::max(worst, nearest);
  }
  return std::sqrt(worst);
}

}  // namespace

double hausdorff_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() == 0 || b.rows() == 0) throw std::invalid_argument("hausdorff_distance: empty set");
  if (a.cols() != b.cols()) throw std::invalid_argument("hausdorff_distance: dimension mismatch");
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

std::vector<Index> subsample_indices(Index n, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("subsample fraction must lie in (0, 1]");
  }
  const auto m = std::min<Index>(n, static_cast<Index>(std::ceil(fraction * static_cast<double>(n))));
  if (m < 1) throw std::invalid_argument("subsample would be empty");
  std::vector<Index> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), Index{0});
  std::vector<Index> picked;
  picked.reserve(static_cast<std::size_t>(m));
  std::mt19937_64 rng(seed);
  std::sample(all.begin(), all.end(), std::back_inserter(picked), m, rng);
  return picked;
}

double hausdorff_to_subsample(const PointCloud& cloud, double fraction, std::uint64_t seed) {
  const auto picked = subsample_indices(cloud.size(), fraction, seed);
  if (static_cast<Index>(picked.size()) == cloud.size()) return 0.0;
  Eigen::MatrixXd sub(static_cast<Index>(picked.size()), cloud.dim());
  for (std::size_t k = 0; k < picked.size(); ++k) sub.row(static_cast<Index>(k)) = cloud.point(picked[k]);
  return hausdorff_distance(cloud.points(), sub);
}

}  // namespace softmapper
