#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hazkde/asymptotics.hpp"
#include "hazkde/estimators.hpp"
#include "hazkde/models.hpp"

namespace hazkde {

// An estimator with everything pinned down for simulation.
struct ResolvedEstimator {
  EstimatorKind kind = EstimatorKind::direct;
  std::string kernel = "epanechnikov";
  double bandwidth = 0.0;
};

// Replication r of a run draws its sample from a stream seeded with
// derive_replication_seed(master_seed, offset + r); the mixing function is
// a SplitMix64 finalizer, so disjoint index ranges give independent,
// reproducible streams and parallel schedules cannot change the result.
std::uint64_t derive_replication_seed(std::uint64_t master_seed,
                                      std::uint64_t replication_index);

// Replications are accumulated in fixed blocks of this many replications,
// merged in index order; serial and parallel runs are therefore
// bit-identical, and runs over adjacent block-aligned index ranges pool
// exactly (see pool()).
std::size_t simulation_block_size();

struct SimulationSpec {
  explicit SimulationSpec(ParametricModel m) : model(std::move(m)) {}

  ParametricModel model;
  std::size_t n = 100;
  std::size_t replications = 1;
  std::vector<ResolvedEstimator> estimators;  // one, or two for comparison
  double eps_lo = 0.05;   // quantile range mapped to the x evaluation grid
  double eps_hi = 0.95;
  std::size_t grid = 101;
  std::uint64_t master_seed = 0;
  std::uint64_t replication_offset = 0;
  unsigned threads = 0;  // 0 = hardware default

  void validate() const;
};

struct PointStats {
  double x;
  double bias;
  double variance;
  double mse;  // bias^2 + variance by construction
  std::uint64_t valid;
  std::uint64_t skipped;
};

struct EstimatorSummary {
  ResolvedEstimator estimator;
  std::vector<PointStats> points;
  double mise;  // trapezoid of mse over the x grid
  std::uint64_t skipped;
  std::uint64_t ts_fallbacks;
  bool valid;  // skip fraction stayed within 1%
};

struct SimulationResult {
  std::string model;
  std::uint64_t n = 0;
  std::uint64_t replications = 0;
  std::uint64_t replication_offset = 0;
  std::uint64_t master_seed = 0;
  std::vector<double> grid_x;
  std::vector<double> true_hazard;
  std::vector<EstimatorSummary> estimators;
  // 100 * (1 - MISE[second] / MISE[first]) when two estimators are run
  std::optional<double> improvement_rate;
  bool valid = true;

  // Raw per-block accumulator state, retained so results pool exactly.
  struct Block {
    std::uint64_t first;  // global index of the block's first replication
    std::uint64_t count;
    std::vector<double> sum;             // estimator-major, grid-minor
    std::vector<double> sum_sq;
    std::vector<std::uint64_t> valid;
    std::vector<std::uint64_t> ts_fallbacks;  // per estimator
  };
  std::vector<Block> blocks;
};

// Empirical bias/variance/MSE over a quantile grid plus MISE, against the
// model's true hazard.  Per-replication estimator failures (degenerate
// ratio denominators) are skipped and counted, never fatal.
SimulationResult simulate_mise(const SimulationSpec& spec);

// Pointwise variant at a single x0.
struct MsePointSummary {
  ResolvedEstimator estimator;
  PointStats stats;
  std::uint64_t ts_fallbacks;
};
std::vector<MsePointSummary> simulate_mse(const SimulationSpec& spec,
                                          double x0);

// Exact pooling of two runs over adjacent replication ranges:
// a covers [offset, offset + R_a), b must start at offset + R_a, and a's
// range must be aligned to simulation_block_size().  The pooled result is
// bit-identical to one run over the union range.
SimulationResult pool(const SimulationResult& a, const SimulationResult& b);

// Convenience wrapper: run the two-estimator spec and return
// 100 * (1 - MISE[second]/MISE[first]).
double improvement_rate(const SimulationSpec& spec);

double standard_normal_cdf(double x);

// Kolmogorov-Smirnov distance between a sample and a CDF.
template <typename Cdf>
double ks_statistic(std::vector<double> values, const Cdf& cdf);

struct NormalityResult {
  double ks_stat;
  double p_value;
  double h;
  std::size_t replications;
};

// Replicates the direct estimator at x0 with h = c * n^(-d), standardizes
// each replicate by the asymptotic (B1, V1) pair of the given kernel, and
// tests the standardized values against the standard normal.
// Requires 1/5 <= d < 1/2 and at least 100 replications.
NormalityResult normality_check(const ParametricModel& model, double x0,
                                std::size_t n, double bandwidth_scale,
                                double bandwidth_exponent,
                                std::size_t replications,
                                std::uint64_t master_seed,
                                const Kernel& kernel);

// --- template implementation ---

template <typename Cdf>
double ks_statistic(std::vector<double> values, const Cdf& cdf) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = cdf(values[i]);
    const double hi = (static_cast<double>(i) + 1.0) / n - f;
    const double lo = f - static_cast<double>(i) / n;
    if (hi > d) d = hi;
    if (lo > d) d = lo;
  }
  return d;
}

}  // namespace hazkde
