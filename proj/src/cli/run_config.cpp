#include "softmapper/cli/run_config.hpp"

#include "softmapper/cli/synthetic.hpp"

#include <array>
#include <cstdio>
#include <set>

namespace softmapper::cli {

namespace {

template <class T>
void read(const Json& j, const char* key, T& field, std::set<std::string>& seen) {
  seen.insert(key);
  if (!j.contains(key)) return;
  try {
    field = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

void require_one_of(const std::string& key, const std::string& value, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (value == a) return;
  }
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
  throw ConfigError(key + " must be one of {" + list + "}, got '" + value + "'");
}

}  // namespace

Json RunConfig::to_json() const {
  return Json{{"input", input},
              {"format", format},
              {"header", header},
              {"normalize_scale", normalize_scale},
              {"synthetic", synthetic},
              {"n", n},
              {"noise", noise},
              {"filter", filter},
              {"theta", theta},
              {"coordinate", coordinate},
              {"filter_attribute", filter_attribute},
              {"resolution", resolution},
              {"gain", gain},
              {"delta_rel", delta_rel},
              {"scheme", scheme},
              {"clusterer", clusterer},
              {"k", k},
              {"threshold", threshold},
              {"threshold_factor", threshold_factor},
              {"subsample_fraction", subsample_fraction},
              {"mode", mode},
              {"epochs", epochs},
              {"mc_samples", mc_samples},
              {"schedule", schedule},
              {"alpha", alpha},
              {"noise_std", noise_std},
              {"maximize", maximize},
              {"threads", threads},
              {"color", color},
              {"output", output},
              {"seed", seed}};
}

RunConfig RunConfig::from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  std::set<std::string> seen;
  read(j, "input", c.input, seen);
  read(j, "format", c.format, seen);
  read(j, "header", c.header, seen);
  read(j, "normalize_scale", c.normalize_scale, seen);
  read(j, "synthetic", c.synthetic, seen);
  read(j, "n", c.n, seen);
  read(j, "noise", c.noise, seen);
  read(j, "filter", c.filter, seen);
  read(j, "theta", c.theta, seen);
  read(j, "coordinate", c.coordinate, seen);
  read(j, "filter_attribute", c.filter_attribute, seen);
  read(j, "resolution", c.resolution, seen);
  read(j, "gain", c.gain, seen);
  read(j, "delta_rel", c.delta_rel, seen);
  read(j, "scheme", c.scheme, seen);
  read(j, "clusterer", c.clusterer, seen);
  read(j, "k", c.k, seen);
  read(j, "threshold", c.threshold, seen);
  read(j, "threshold_factor", c.threshold_factor, seen);
  read(j, "subsample_fraction", c.subsample_fraction, seen);
  read(j, "mode", c.mode, seen);
  read(j, "epochs", c.epochs, seen);
  read(j, "mc_samples", c.mc_samples, seen);
  read(j, "schedule", c.schedule, seen);
  read(j, "alpha", c.alpha, seen);
  read(j, "noise_std", c.noise_std, seen);
  read(j, "maximize", c.maximize, seen);
  read(j, "threads", c.threads, seen);
  read(j, "color", c.color, seen);
  read(j, "output", c.output, seen);
  read(j, "seed", c.seed, seen);
  for (const auto& [key, value] : j.items()) {
    if (!seen.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  return c;
}

std::string RunConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto j = to_json();
  j.erase("output");
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(h));
  return buf.data();
}

void RunConfig::validate() const {
  if (input.empty() == synthetic.empty()) throw ConfigError("give exactly one of --input or --synthetic");
  require_one_of("format", format, {"csv", "off"});
  require_one_of("filter", filter, {"linear", "coordinate", "attribute"});
  if (!scheme.empty()) require_one_of("scheme", scheme, {"standard", "smooth"});
  require_one_of("clusterer", clusterer, {"kmeans", "linkage"});
  require_one_of("mode", mode, {"extended", "regular"});
  require_one_of("schedule", schedule, {"constant", "robbins_monro"});
  if (!input.empty() && !std::filesystem::exists(input)) throw ConfigError("input file '" + input + "' does not exist");
  if (!synthetic.empty()) {
    require_one_of("synthetic", synthetic, {"circle", "cylinder", "y_shape", "plane_with_leg"});
    if (n < 10) throw ConfigError("n must be >= 10");
    if (!(noise >= 0.0)) throw ConfigError("noise must be >= 0");
  }
  if (normalize_scale < 0.0) throw ConfigError("normalize_scale must be >= 0");
  if (coordinate < 0) throw ConfigError("coordinate must be >= 0");
  if (filter == "attribute" && filter_attribute.empty()) throw ConfigError("filter 'attribute' needs --filter-attribute");
  if (resolution < 1) throw ConfigError("resolution must be >= 1");
  if (!(gain > 0.0 && gain < 1.0)) throw ConfigError("gain must lie in (0, 1)");
  if (!(delta_rel > 0.0)) throw ConfigError("delta_rel must be > 0");
  if (k < 1) throw ConfigError("k must be >= 1");
  if (threshold < 0.0) throw ConfigError("threshold must be >= 0");
  if (!(threshold_factor > 0.0)) throw ConfigError("threshold_factor must be > 0");
  if (!(subsample_fraction > 0.0 && subsample_fraction <= 1.0)) throw ConfigError("subsample_fraction must lie in (0, 1]");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (mc_samples < 1) throw ConfigError("mc_samples must be >= 1");
  if (!(alpha >= 0.0)) throw ConfigError("alpha must be >= 0");
  if (!(noise_std >= 0.0)) throw ConfigError("noise_std must be >= 0");
  if (output.empty()) throw ConfigError("output must not be empty");
}

PointCloud load_dataset(const RunConfig& config) {
  PointCloud cloud = !config.synthetic.empty()
                         ? generate_synthetic(config.synthetic, config.n, config.noise, config.seed)
                         : (config.format == "off" ? load_off_vertices(config.input)
                                                   : load_csv(config.input, config.header));
  if (config.normalize_scale > 0.0) cloud = normalize_counts(cloud, config.normalize_scale);
  return cloud;
}

std::unique_ptr<FilterFamily> make_filter(const RunConfig& config, const PointCloud& cloud) {
  if (config.filter == "linear") return std::make_unique<LinearFilter>();
  if (config.filter == "coordinate") {
    if (config.coordinate >= cloud.dim()) {
      throw ConfigError("coordinate " + std::to_string(config.coordinate) + " out of range for dimension " +
                        std::to_string(cloud.dim()));
    }
    return std::make_unique<FixedFilter>(cloud.points().col(config.coordinate));
  }
  if (!cloud.has_attribute(config.filter_attribute)) {
    throw ConfigError("no attribute named '" + config.filter_attribute + "'");
  }
  return std::make_unique<FixedFilter>(cloud.attribute(config.filter_attribute));
}

FilterParams initial_params(const RunConfig& config, const FilterFamily& family, const PointCloud& cloud) {
  const Index s = family.param_dim(cloud);
  if (s == 0) {
    if (!config.theta.empty()) throw ConfigError("theta given for a filter without parameters");
    return FilterParams{};
  }
  if (config.theta.empty()) return diagonal_init(s);
  if (static_cast<Index>(config.theta.size()) != s) {
    throw ConfigError("theta has " + std::to_string(config.theta.size()) + " entries, the filter needs " +
                      std::to_string(s));
  }
  return FilterParams(Eigen::Map<const Eigen::VectorXd>(config.theta.data(), s));
}

Clusterer make_clusterer(const RunConfig& config, const PointCloud& cloud) {
  if (config.clusterer == "kmeans") return Clusterer::kmeans(config.k, 100, config.seed);
  if (config.threshold > 0.0) return Clusterer::single_linkage(config.threshold);
  const double h = hausdorff_to_subsample(cloud, config.subsample_fraction, config.seed);
  if (!(h > 0.0)) throw ConfigError("Hausdorff heuristic gave threshold 0; set --threshold or a smaller fraction");
  return threshold_from_hausdorff(cloud, config.subsample_fraction, config.threshold_factor, config.seed);
}

PersistenceMode parse_mode(const std::string& mode) {
  return mode == "regular" ? PersistenceMode::regular : PersistenceMode::extended;
}

OptimConfig make_optim_config(const RunConfig& config, SchemeKind default_scheme) {
  OptimConfig oc;
  oc.epochs = config.epochs;
  oc.mc_samples = config.mc_samples;
  if (config.schedule == "robbins_monro") {
    oc.schedule = RobbinsMonroStep{config.alpha};
  } else {
    oc.schedule = ConstantStep{config.alpha};
  }
  oc.noise_std = config.noise_std;
  oc.seed = config.seed;
  oc.mode = parse_mode(config.mode);
  oc.scheme = config.scheme.empty() ? default_scheme
                                    : (config.scheme == "smooth" ? SchemeKind::smooth : SchemeKind::standard);
  oc.delta_rel = config.delta_rel;
  oc.resolution = config.resolution;
  oc.gain = config.gain;
  oc.maximize = config.maximize;
  oc.threads = config.threads;
  return oc;
}

}  // namespace softmapper::cli
