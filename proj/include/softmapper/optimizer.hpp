#pragma once

#include "softmapper/clustering.hpp"
#include "softmapper/cover.hpp"
#include "softmapper/filters.hpp"
#include "softmapper/persistence.hpp"

#include <cstdint>
#include <variant>
#include <vector>

namespace softmapper {

struct ConstantStep {
  double alpha0 = 0.1;
};

/// alpha_i = alpha0 / (1 + i).
struct RobbinsMonroStep {
  double alpha0 = 0.1;
};

using StepSchedule = std::variant<ConstantStep, RobbinsMonroStep>;

double step_size(const StepSchedule& schedule, int epoch);

struct OptimConfig {
  int epochs = 200;
  int mc_samples = 10;
  StepSchedule schedule = ConstantStep{0.1};
  double noise_std = 0.0;
  std::uint64_t seed = 0;
  PersistenceMode mode = PersistenceMode::extended;
  SchemeKind scheme = SchemeKind::smooth;  // smooth or standard
  double delta_rel = 1e-2;                 // delta = delta_rel * (max f - min f)
  Index resolution = 10;
  double gain = 0.3;
  bool maximize = false;  // descend on -total persistence instead
  unsigned threads = 0;   // 0: hardware concurrency

  void validate() const;
};

struct EpochRecord {
  int epoch = 0;
  Eigen::VectorXd theta;  // parameters at which the epoch's samples were drawn
  double risk = 0.0;      // Monte-Carlo estimate of expected total persistence
  double grad_norm = 0.0; // norm of the averaged subgradient of the (signed) objective
  double seconds = 0.0;   // wall time since optimization started
};

struct Trace {
  std::vector<EpochRecord> epochs;
};

struct OptimResult {
  FilterParams theta;
  Trace trace;
};

/// Assignment scheme the optimizer draws from at the given filter values.
AssignmentScheme build_scheme(const Eigen::VectorXd& values, const OptimConfig& config);

/// Seed of the m-th Monte-Carlo sample of an epoch.
std::uint64_t sample_seed(std::uint64_t base, int epoch, int sample);

struct RiskEstimate {
  double risk = 0.0;             // mean total persistence over the samples
  double standard_error = 0.0;
  Eigen::VectorXd gradient;      // mean subgradient of the signed objective
};

/// M seeded samples of the scheme at `params`, evaluated in parallel and reduced in index order.
RiskEstimate estimate_risk_and_gradient(const PointCloud& cloud, const FilterFamily& family,
                                        const FilterParams& params, const Clusterer& clusterer,
                                        const OptimConfig& config, int epoch = 0);

/// (1/M) sum_m L(e_m, f_theta).
double estimate_risk(const PointCloud& cloud, const FilterFamily& family, const FilterParams& params,
                     const Clusterer& clusterer, const OptimConfig& config);

/// Stochastic subgradient descent: theta_{i+1} = theta_i - alpha_i (y_i + xi_i).
OptimResult optimize(const PointCloud& cloud, const FilterFamily& family, const FilterParams& theta0,
                     const Clusterer& clusterer, const OptimConfig& config);

}  // namespace softmapper
