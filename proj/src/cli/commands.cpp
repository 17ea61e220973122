#include "softmapper/cli/commands.hpp"

#include "softmapper/cli/synthetic.hpp"
#include "softmapper/errors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>

#ifndef SOFTMAPPER_VERSION
#define SOFTMAPPER_VERSION "unknown"
#endif

namespace softmapper::cli {

namespace {

namespace fs = std::filesystem;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

Json vector_json(const Eigen::VectorXd& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

Json header_json(const RunConfig& config, const char* command) {
  return Json{{"command", command},
              {"version", SOFTMAPPER_VERSION},
              {"seed", config.seed},
              {"config_hash", config.hash()},
              {"config", config.to_json()}};
}

Json build_json(const BuildSummary& s) {
  return Json{{"nodes", s.nodes},
              {"edges", s.edges},
              {"components", s.components},
              {"betti1", s.betti1},
              {"total_persistence", s.total_persistence}};
}

// Leading principal axis of the centered cloud.
Eigen::VectorXd pca_top_component(const PointCloud& cloud) {
  const Eigen::MatrixXd centered = cloud.points().rowwise() - cloud.points().colwise().mean();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(centered.transpose() * centered);
  return eig.eigenvectors().col(cloud.dim() - 1);
}

Eigen::VectorXd axis_correlation(const Eigen::VectorXd& direction) {
  const double norm = direction.norm();
  if (!(norm > 0.0)) return Eigen::VectorXd::Zero(direction.size());
  return direction.cwiseAbs() / norm;
}

}  // namespace

BuildSummary write_build_outputs(const RunConfig& config, const PointCloud& cloud, const FilterFamily& family,
                                 const FilterParams& params, const Clusterer& clusterer, const fs::path& dir) {
  make_dir(dir);
  const FilterValues values = family.evaluate(cloud, params);
  const OptimConfig oc = make_optim_config(config, SchemeKind::standard);
  const CoverAssignment e = sample(build_scheme(values.values, oc), config.seed);
  const MapperGraph graph = map_comp(cloud, e, clusterer);
  const FilteredGraph fg = map_pers_filtration(graph, values.values);
  const Diagram diagram = persistence_diagram(fg, oc.mode);

  Eigen::VectorXd colors = fg.node_values;
  if (!config.color.empty()) {
    if (!cloud.has_attribute(config.color)) throw ConfigError("no attribute named '" + config.color + "' to color by");
    colors = map_pers_filtration(graph, cloud.attribute(config.color)).node_values;
  }

  write_text(dir / "mapper.json", mapper_to_json({graph, fg.node_values, colors}).dump(2) + "\n");
  write_text(dir / "mapper.dot", export_dot(graph, colors) + "\n");
  std::ostringstream csv;
  write_diagram_csv(csv, diagram);
  write_text(dir / "diagram.csv", csv.str());

  BuildSummary s;
  s.nodes = graph.node_count();
  s.edges = graph.edge_count();
  s.components = static_cast<Index>(connected_components(graph).size());
  s.betti1 = s.edges - s.nodes + s.components;
  s.total_persistence = total_persistence(diagram);
  return s;
}

void cmd_build(const RunConfig& config, std::ostream& log) {
  config.validate();
  const PointCloud cloud = load_dataset(config);
  const auto family = make_filter(config, cloud);
  const FilterParams params = initial_params(config, *family, cloud);
  const Clusterer clusterer = make_clusterer(config, cloud);
  const fs::path dir(config.output);
  const BuildSummary s = write_build_outputs(config, cloud, *family, params, clusterer, dir);

  Json summary = header_json(config, "build");
  summary["graph"] = build_json(s);
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  log << "mapper graph: " << s.nodes << " nodes, " << s.edges << " edges, beta1 " << s.betti1
      << ", total persistence " << format_double(s.total_persistence) << "\n";
}

void cmd_optimize(const RunConfig& config, std::ostream& log) {
  config.validate();
  const PointCloud cloud = load_dataset(config);
  const auto family = make_filter(config, cloud);
  if (family->param_dim(cloud) < 1) throw ConfigError("the " + family->name() + " filter has nothing to optimize");
  const FilterParams theta0 = initial_params(config, *family, cloud);
  const Clusterer clusterer = make_clusterer(config, cloud);
  const OptimConfig oc = make_optim_config(config, SchemeKind::smooth);
  try {
    oc.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what());
  }

  const OptimResult result = optimize(cloud, *family, theta0, clusterer, oc);

  const fs::path dir(config.output);
  make_dir(dir);
  std::ostringstream csv;
  write_trace_csv(csv, result.trace);
  write_text(dir / "trace.csv", csv.str());
  write_text(dir / "trace.svg", trace_svg(result.trace));
  write_text(dir / "theta_final.json", Json{{"theta", vector_json(result.theta.theta)}}.dump(2) + "\n");

  const BuildSummary initial = write_build_outputs(config, cloud, *family, theta0, clusterer, dir / "initial");
  const BuildSummary final = write_build_outputs(config, cloud, *family, result.theta, clusterer, dir / "final");

  Json summary = header_json(config, "optimize");
  summary["theta_initial"] = vector_json(theta0.theta);
  summary["theta_final"] = vector_json(result.theta.theta);
  summary["risk_first"] = result.trace.epochs.front().risk;
  summary["risk_last"] = result.trace.epochs.back().risk;
  summary["axis_correlation"] = vector_json(axis_correlation(result.theta.theta));
  summary["pca_axis_correlation"] = vector_json(axis_correlation(pca_top_component(cloud)));
  summary["initial_graph"] = build_json(initial);
  summary["final_graph"] = build_json(final);
  write_text(dir / "summary.json", summary.dump(2) + "\n");

  log << "optimized " << oc.epochs << " epochs; risk " << format_double(summary["risk_first"].get<double>()) << " -> "
      << format_double(summary["risk_last"].get<double>()) << "\n";
}

void cmd_synth(const RunConfig& config, std::ostream& log) {
  if (config.synthetic.empty()) throw ConfigError("synth needs --synthetic");
  config.validate();
  const PointCloud cloud = generate_synthetic(config.synthetic, config.n, config.noise, config.seed);
  const fs::path path(config.output);
  if (path.has_parent_path()) make_dir(path.parent_path());
  std::ostringstream out;
  for (Index i = 0; i < cloud.size(); ++i) {
    for (Index k = 0; k < cloud.dim(); ++k) out << (k ? "," : "") << format_double(cloud.points()(i, k));
    out << '\n';
  }
  write_text(path, out.str());
  log << "wrote " << cloud.size() << " points to " << path.string() << "\n";
}

void cmd_export(const fs::path& mapper_json, const fs::path& dot, const fs::path& trace_csv, const fs::path& svg,
                std::ostream& log) {
  if (mapper_json.empty() == dot.empty() && !mapper_json.empty()) {
    std::ifstream in(mapper_json);
    if (!in) throw ConfigError("cannot read '" + mapper_json.string() + "'");
    Json j;
    try {
      j = Json::parse(in);
    } catch (const nlohmann::json::exception& ex) {
      throw ConfigError("invalid mapper json: " + std::string(ex.what()));
    }
    const MapperDocument doc = mapper_from_json(j);
    write_text(dot, export_dot(doc.graph, doc.colors) + "\n");
    log << "wrote " << dot.string() << "\n";
  } else if (!mapper_json.empty() || !dot.empty()) {
    throw ConfigError("--mapper and --dot go together");
  }
  if (trace_csv.empty() == svg.empty() && !trace_csv.empty()) {
    std::ifstream in(trace_csv);
    if (!in) throw ConfigError("cannot read '" + trace_csv.string() + "'");
    write_text(svg, trace_svg(read_trace_csv(in)));
    log << "wrote " << svg.string() << "\n";
  } else if (!trace_csv.empty() || !svg.empty()) {
    throw ConfigError("--trace and --svg go together");
  }
  if (mapper_json.empty() && trace_csv.empty()) throw ConfigError("export needs --mapper/--dot or --trace/--svg");
}

namespace {

enum class Kind { text, integer, real, flag, reals };

struct OptionSpec {
  const char* flag;
  const char* key;
  Kind kind;
  const char* help;
};

const std::vector<OptionSpec>& option_specs() {
  static const std::vector<OptionSpec> specs{
      {"--input", "input", Kind::text, "point cloud file"},
      {"--format", "format", Kind::text, "csv or off"},
      {"--header", "header", Kind::flag, "CSV has a header line"},
      {"--normalize-scale", "normalize_scale", Kind::real, "apply log(1 + scale * x / rowsum) when > 0"},
      {"--synthetic", "synthetic", Kind::text, "circle, cylinder, y_shape or plane_with_leg"},
      {"--n", "n", Kind::integer, "synthetic point count"},
      {"--noise", "noise", Kind::real, "synthetic Gaussian noise"},
      {"--filter", "filter", Kind::text, "linear, coordinate or attribute"},
      {"--theta", "theta", Kind::reals, "linear filter parameters (default: diagonal)"},
      {"--coordinate", "coordinate", Kind::integer, "column used by the coordinate filter"},
      {"--filter-attribute", "filter_attribute", Kind::text, "attribute used by the attribute filter"},
      {"--resolution", "resolution", Kind::integer, "number of cover intervals"},
      {"--gain", "gain", Kind::real, "overlap fraction of consecutive intervals"},
      {"--delta-rel", "delta_rel", Kind::real, "smooth transition width relative to the filter range"},
      {"--scheme", "scheme", Kind::text, "standard or smooth"},
      {"--clusterer", "clusterer", Kind::text, "kmeans or linkage"},
      {"--k", "k", Kind::integer, "k-means cluster count"},
      {"--threshold", "threshold", Kind::real, "single linkage threshold (0: Hausdorff heuristic)"},
      {"--threshold-factor", "threshold_factor", Kind::real, "multiplier on the Hausdorff heuristic"},
      {"--subsample-fraction", "subsample_fraction", Kind::real, "subsample size for the Hausdorff heuristic"},
      {"--mode", "mode", Kind::text, "extended or regular persistence"},
      {"--epochs", "epochs", Kind::integer, "optimizer epochs N"},
      {"--mc-samples", "mc_samples", Kind::integer, "Monte-Carlo samples M per epoch"},
      {"--schedule", "schedule", Kind::text, "constant or robbins_monro"},
      {"--alpha", "alpha", Kind::real, "initial learning rate"},
      {"--noise-std", "noise_std", Kind::real, "gradient noise standard deviation"},
      {"--maximize", "maximize", Kind::flag, "maximize total persistence"},
      {"--threads", "threads", Kind::integer, "worker threads (0: all cores)"},
      {"--color", "color", Kind::text, "attribute used to color nodes (default: filter)"},
      {"--output", "output", Kind::text, "output directory (synth: CSV file)"},
      {"--seed", "seed", Kind::integer, "random seed"},
  };
  return specs;
}

struct RawOptions {
  std::string config_path;
  std::map<std::string, std::string> text;
  std::map<std::string, bool> flags;
  std::map<std::string, std::vector<double>> reals;
  std::map<std::string, CLI::Option*> handles;
};

void add_run_options(CLI::App* app, RawOptions& raw) {
  app->add_option("--config", raw.config_path, "JSON file with the same keys; flags override it");
  for (const auto& spec : option_specs()) {
    CLI::Option* opt = nullptr;
    switch (spec.kind) {
      case Kind::flag: opt = app->add_flag(spec.flag, raw.flags[spec.key], spec.help); break;
      case Kind::reals: opt = app->add_option(spec.flag, raw.reals[spec.key], spec.help)->delimiter(','); break;
      case Kind::integer:
        opt = app->add_option(spec.flag, raw.text[spec.key], spec.help)->check(CLI::Number);
        break;
      case Kind::real: opt = app->add_option(spec.flag, raw.text[spec.key], spec.help)->check(CLI::Number); break;
      case Kind::text: opt = app->add_option(spec.flag, raw.text[spec.key], spec.help); break;
    }
    raw.handles[spec.key] = opt;
  }
}

RunConfig resolve(const RawOptions& raw) {
  Json j = Json::object();
  if (!raw.config_path.empty()) {
    std::ifstream in(raw.config_path);
    if (!in) throw ConfigError("cannot read config '" + raw.config_path + "'");
    try {
      j = Json::parse(in);
    } catch (const nlohmann::json::exception& ex) {
      throw ConfigError("invalid config json: " + std::string(ex.what()));
    }
  }
  for (const auto& spec : option_specs()) {
    if (raw.handles.at(spec.key)->count() == 0) continue;
    switch (spec.kind) {
      case Kind::flag: j[spec.key] = raw.flags.at(spec.key); break;
      case Kind::reals: j[spec.key] = raw.reals.at(spec.key); break;
      case Kind::integer: {
        const std::string& s = raw.text.at(spec.key);
        if (s.find_first_not_of("0123456789-") != std::string::npos) {
          throw ConfigError(std::string(spec.flag) + " needs an integer");
        }
        if (std::string(spec.key) == "seed" || std::string(spec.key) == "threads") {
          if (s.front() == '-') throw ConfigError(std::string(spec.flag) + " must be >= 0");
          j[spec.key] = std::stoull(s);
        } else {
          j[spec.key] = std::stoll(s);
        }
        break;
      }
      case Kind::real: j[spec.key] = std::stod(raw.text.at(spec.key)); break;
      case Kind::text: j[spec.key] = raw.text.at(spec.key); break;
    }
  }
  return RunConfig::from_json(j);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Soft Mapper: stochastic Mapper graphs and topological filter optimization", "softmapper"};
  app.set_version_flag("--version", SOFTMAPPER_VERSION);
  app.require_subcommand(1);

  RawOptions build_raw;
  RawOptions optimize_raw;
  RawOptions synth_raw;
  auto* build = app.add_subcommand("build", "build one Mapper graph and its persistence diagram");
  auto* optimize_cmd = app.add_subcommand("optimize", "optimize a linear filter by stochastic subgradient descent");
  auto* synth = app.add_subcommand("synth", "write a synthetic point cloud as CSV");
  add_run_options(build, build_raw);
  add_run_options(optimize_cmd, optimize_raw);
  add_run_options(synth, synth_raw);

  std::string mapper_json;
  std::string dot;
  std::string trace_csv;
  std::string svg;
  auto* exp = app.add_subcommand("export", "render mapper.json as DOT or trace.csv as SVG");
  exp->add_option("--mapper", mapper_json, "mapper.json to read");
  exp->add_option("--dot", dot, "DOT file to write");
  exp->add_option("--trace", trace_csv, "trace.csv to read");
  exp->add_option("--svg", svg, "SVG file to write");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (build->parsed()) {
      cmd_build(resolve(build_raw), out);
    } else if (optimize_cmd->parsed()) {
      cmd_optimize(resolve(optimize_raw), out);
    } else if (synth->parsed()) {
      cmd_synth(resolve(synth_raw), out);
    } else {
      cmd_export(mapper_json, dot, trace_csv, svg, out);
    }
  } catch (const ConfigError& ex) {
    err << "error: " << ex.what() << "\n";
    return kUsageError;
  } catch (const FormatError& ex) {
    err << "error: " << ex.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& ex) {
    err << "error: " << ex.what() << "\n";
    return kUsageError;
  } catch (const nlohmann::json::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kUsageError;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kRuntimeError;
  }
  return kSuccess;
}

}  // namespace softmapper::cli
