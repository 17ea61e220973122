#pragma once

#include "softmapper/cli/run_config.hpp"

#include <filesystem>
#include <iosfwd>

namespace softmapper::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kRuntimeError = 2 };

struct BuildSummary {
  Index nodes = 0;
  Index edges = 0;
  Index components = 0;
  Index betti1 = 0;
  double total_persistence = 0.0;
};

/// Builds one Mapper graph at `params` and writes mapper.json, mapper.dot and diagram.csv into `dir`.
BuildSummary write_build_outputs(const RunConfig& config, const PointCloud& cloud, const FilterFamily& family,
                                 const FilterParams& params, const Clusterer& clusterer,
                                 const std::filesystem::path& dir);

void cmd_build(const RunConfig& config, std::ostream& log);
void cmd_optimize(const RunConfig& config, std::ostream& log);
void cmd_synth(const RunConfig& config, std::ostream& log);

/// mapper.json -> DOT and/or trace.csv -> SVG.
void cmd_export(const std::filesystem::path& mapper_json, const std::filesystem::path& dot,
                const std::filesystem::path& trace_csv, const std::filesystem::path& svg, std::ostream& log);

/// Full command line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace softmapper::cli
