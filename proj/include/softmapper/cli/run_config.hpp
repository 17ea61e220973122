#pragma once

#include "softmapper/cli/export.hpp"
#include "softmapper/clustering.hpp"
#include "softmapper/filters.hpp"
#include "softmapper/optimizer.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace softmapper::cli {

/// Invalid or inconsistent run configuration (exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  // dataset: a file, or a synthetic generator when `synthetic` is set
  std::string input;
  std::string format = "csv";  // csv | off
  bool header = false;
  double normalize_scale = 0.0;  // > 0 applies normalize_counts
  std::string synthetic;
  Index n = 600;
  double noise = 0.02;

  // filter
  std::string filter = "linear";  // linear | coordinate | attribute
  std::vector<double> theta;      // linear; empty means the diagonal
  Index coordinate = 0;
  std::string filter_attribute;

  // cover
  Index resolution = 25;
  double gain = 0.3;
  double delta_rel = 1e-2;
  std::string scheme;  // standard | smooth; empty: standard for build, smooth for optimize

  // clustering
  std::string clusterer = "kmeans";  // kmeans | linkage
  Index k = 3;
  double threshold = 0.0;  // 0: derive from the Hausdorff heuristic
  double threshold_factor = 1.0;
  double subsample_fraction = 1.0 / 3.0;

  // persistence and optimizer
  std::string mode = "extended";  // extended | regular
  int epochs = 200;
  int mc_samples = 10;
  std::string schedule = "constant";  // constant | robbins_monro
  double alpha = 0.1;
  double noise_std = 0.0;
  bool maximize = false;
  unsigned threads = 0;

  std::string color;  // attribute name; empty colors by the filter
  std::string output = "softmapper_out";
  std::uint64_t seed = 0;

  Json to_json() const;
  static RunConfig from_json(const Json& j);

  /// FNV-1a of the canonical JSON form without the output path, as 16 hex digits.
  std::string hash() const;

  void validate() const;
};

PointCloud load_dataset(const RunConfig& config);
std::unique_ptr<FilterFamily> make_filter(const RunConfig& config, const PointCloud& cloud);
FilterParams initial_params(const RunConfig& config, const FilterFamily& family, const PointCloud& cloud);
Clusterer make_clusterer(const RunConfig& config, const PointCloud& cloud);
OptimConfig make_optim_config(const RunConfig& config, SchemeKind default_scheme);
PersistenceMode parse_mode(const std::string& mode);

}  // namespace softmapper::cli
