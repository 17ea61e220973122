#include "softmapper/optimizer.hpp"

#include "softmapper/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <random>
#include <stdexcept>
#include <thread>

namespace softmapper {

double step_size(const StepSchedule& schedule, int epoch) {
  return std::visit(
      [epoch](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConstantStep>) {
          return s.alpha0;
        } else {
          return s.alpha0 / (1.0 + static_cast<double>(epoch));
        }
      },
      schedule);
}

void OptimConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (mc_samples < 1) throw std::invalid_argument("mc_samples must be >= 1");
  const double alpha0 = std::visit([](const auto& s) { return s.alpha0; }, schedule);
  if (!(alpha0 >= 0.0) || !std::isfinite(alpha0)) throw std::invalid_argument("learning rate must be finite and >= 0");
  if (!(noise_std >= 0.0)) throw std::invalid_argument("noise_std must be >= 0");
  if (scheme == SchemeKind::gaussian) throw std::invalid_argument("the optimizer drives smooth or standard schemes only");
  if (!(delta_rel > 0.0)) throw std::invalid_argument("delta_rel must be > 0");
  if (resolution < 1) throw std::invalid_argument("resolution must be >= 1");
  if (!(gain > 0.0 && gain < 1.0)) throw std::invalid_argument("gain must lie in (0, 1)");
}

AssignmentScheme build_scheme(const Eigen::VectorXd& values, const OptimConfig& config) {
  const IntervalCover cover = uniform_cover(values, config.resolution, config.gain);
  if (config.scheme == SchemeKind::standard) return standard_scheme(values, cover);
  return smooth_scheme(values, cover, config.delta_rel * (values.maxCoeff() - values.minCoeff()));
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Runs task(m) for m in [0, count) on up to `threads` workers; rethrows the first failure by index.
template <class Task>
void parallel_for(int count, unsigned threads, Task task) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(count));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  auto run = [&](unsigned worker) {
    for (int m = static_cast<int>(worker); m < count; m += static_cast<int>(threads)) {
      try {
        task(m);
      } catch (...) {
        errors[static_cast<std::size_t>(m)] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(run, w);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::uint64_t sample_seed(std::uint64_t base, int epoch, int sample) {
  return splitmix64(splitmix64(base ^ splitmix64(static_cast<std::uint64_t>(epoch))) +
                    static_cast<std::uint64_t>(sample));
}

RiskEstimate estimate_risk_and_gradient(const PointCloud& cloud, const FilterFamily& family,
                                        const FilterParams& params, const Clusterer& clusterer,
                                        const OptimConfig& config, int epoch) {
  config.validate();
  const FilterValues values = family.evaluate(cloud, params);
  const AssignmentScheme scheme = build_scheme(values.values, config);
  const int samples = config.mc_samples;

  std::vector<LossGradient> results(static_cast<std::size_t>(samples));
  parallel_for(samples, config.threads, [&](int m) {
    const CoverAssignment e = sample(scheme, sample_seed(config.seed, epoch, m));
    results[static_cast<std::size_t>(m)] = loss_and_subgradient(map_comp(cloud, e, clusterer), values, config.mode);
  });

  RiskEstimate out;
  out.gradient = Eigen::VectorXd::Zero(values.param_dim());
  double sum_sq = 0.0;
  for (const auto& r : results) {
    out.risk += r.loss;
    sum_sq += r.loss * r.loss;
    out.gradient += r.d_theta;
  }
  const double m = static_cast<double>(samples);
  out.risk /= m;
  out.gradient /= m;
  if (config.maximize) out.gradient = -out.gradient;
  if (samples > 1) {
    const double var = std::max(0.0, (sum_sq - m * out.risk * out.risk) / (m - 1.0));
    out.standard_error = std::sqrt(var / m);
  }
  return out;
}

double estimate_risk(const PointCloud& cloud, const FilterFamily& family, const FilterParams& params,
                     const Clusterer& clusterer, const OptimConfig& config) {
  return estimate_risk_and_gradient(cloud, family, params, clusterer, config).risk;
}

OptimResult optimize(const PointCloud& cloud, const FilterFamily& family, const FilterParams& theta0,
                     const Clusterer& clusterer, const OptimConfig& config) {
  config.validate();
  if (family.param_dim(cloud) < 1) throw std::invalid_argument("filter family has no parameters to optimize");
  if (theta0.size() != family.param_dim(cloud)) throw std::invalid_argument("initial parameters have the wrong dimension");

  std::mt19937_64 noise_rng(splitmix64(config.seed ^ 0x6e6f697365ULL));
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto start = std::chrono::steady_clock::now();

  OptimResult result{theta0, {}};
  result.trace.epochs.reserve(static_cast<std::size_t>(config.epochs));
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    RiskEstimate est;
    try {
      est = estimate_risk_and_gradient(cloud, family, result.theta, clusterer, config, epoch);
    } catch (const std::exception& ex) {
      throw NumericError("epoch " + std::to_string(epoch) + ": " + ex.what());
    }
    if (!std::isfinite(est.risk) || !est.gradient.allFinite()) {
      throw NumericError("epoch " + std::to_string(epoch) + ": non-finite loss or gradient");
    }

    Eigen::VectorXd step = est.gradient;
    if (config.noise_std > 0.0) {
      for (Index k = 0; k < step.size(); ++k) step(k) += config.noise_std * normal(noise_rng);
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.trace.epochs.push_back({epoch, result.theta.theta, est.risk, est.gradient.norm(), elapsed});

    Eigen::VectorXd next = result.theta.theta - step_size(config.schedule, epoch) * step;
    if (!next.allFinite()) throw NumericError("epoch " + std::to_string(epoch) + ": parameters became non-finite");
    result.theta = FilterParams(std::move(next));
  }
  return result;
}

}  // namespace softmapper
