#include "hazkde/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "hazkde/special_functions.hpp"

namespace hazkde {

namespace {

constexpr std::size_t kBlockReps = 64;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Block = SimulationResult::Block;

// One block of replications, accumulated in replication order.
Block run_block(const SimulationSpec& spec,
                const std::vector<const Kernel*>& kernels,
                const std::vector<double>& xs, std::uint64_t first,
                std::uint64_t count) {
  const std::size_t ne = spec.estimators.size();
  const std::size_t ng = xs.size();
  Block blk;
  blk.first = first;
  blk.count = count;
  blk.sum.assign(ne * ng, 0.0);
  blk.sum_sq.assign(ne * ng, 0.0);
  blk.valid.assign(ne * ng, 0);
  blk.ts_fallbacks.assign(ne, 0);

  for (std::uint64_t r = 0; r < count; ++r) {
    const std::uint64_t seed =
        derive_replication_seed(spec.master_seed, first + r);
    SortedSample sample(spec.model.sample(spec.n, seed));
    for (std::size_t e = 0; e < ne; ++e) {
      const auto& est = spec.estimators[e];
      TerrellScottStats ts;
      for (std::size_t g = 0; g < ng; ++g) {
        double value;
        try {
          value = evaluate_hazard(est.kind, sample, *kernels[e],
                                  est.bandwidth, xs[g], &ts);
        } catch (const DenominatorDegenerateError&) {
          continue;  // counted via valid[] shortfall
        }
        const std::size_t idx = e * ng + g;
        blk.sum[idx] += value;
        blk.sum_sq[idx] += value * value;
        ++blk.valid[idx];
      }
      blk.ts_fallbacks[e] += ts.pilot_fallbacks;
    }
  }
  return blk;
}

// Fold blocks in index order and fill points/MISE/improvement; blocks are
// moved into the result so runs can later be pooled without re-simulation.
void summarize(SimulationResult& res, std::vector<Block> blocks) {
  const std::size_t ne = res.estimators.size();
  const std::size_t ng = res.grid_x.size();
  std::vector<double> sum(ne * ng, 0.0), sum_sq(ne * ng, 0.0);
  std::vector<std::uint64_t> valid(ne * ng, 0), ts_fb(ne, 0);
  std::uint64_t total_reps = 0;
  for (const Block& b : blocks) {
    for (std::size_t i = 0; i < ne * ng; ++i) {
      sum[i] += b.sum[i];
      sum_sq[i] += b.sum_sq[i];
      valid[i] += b.valid[i];
    }
    for (std::size_t e = 0; e < ne; ++e) ts_fb[e] += b.ts_fallbacks[e];
    total_reps += b.count;
  }

  res.valid = true;
  for (std::size_t e = 0; e < ne; ++e) {
    EstimatorSummary& es = res.estimators[e];
    es.ts_fallbacks = ts_fb[e];
    es.points.resize(ng);
    std::uint64_t skipped = 0;
    for (std::size_t g = 0; g < ng; ++g) {
      const std::size_t idx = e * ng + g;
      PointStats& p = es.points[g];
      p.x = res.grid_x[g];
      p.valid = valid[idx];
      p.skipped = total_reps - valid[idx];
      skipped += p.skipped;
      if (valid[idx] == 0) {
        p.bias = p.variance = p.mse = kNaN;
        continue;
      }
      const double nv = static_cast<double>(valid[idx]);
      const double mean = sum[idx] / nv;
      double var = sum_sq[idx] / nv - mean * mean;
      if (var < 0.0) var = 0.0;
      p.bias = mean - res.true_hazard[g];
      p.variance = var;
      p.mse = p.bias * p.bias + var;
    }
    es.skipped = skipped;
    es.valid = static_cast<double>(skipped) <=
               0.01 * static_cast<double>(total_reps) * static_cast<double>(ng);
    if (!es.valid) res.valid = false;

    double mise = 0.0;
    bool mise_ok = ng >= 2;
    for (std::size_t g = 0; mise_ok && g + 1 < ng; ++g) {
      const double a = es.points[g].mse, b = es.points[g + 1].mse;
      if (std::isnan(a) || std::isnan(b)) {
        mise_ok = false;
        break;
      }
      mise += 0.5 * (res.grid_x[g + 1] - res.grid_x[g]) * (a + b);
    }
    es.mise = mise_ok ? mise : kNaN;
  }

  res.improvement_rate.reset();
  if (ne == 2 && res.estimators[0].mise > 0.0 &&
      !std::isnan(res.estimators[0].mise) &&
      !std::isnan(res.estimators[1].mise))
    res.improvement_rate =
        100.0 * (1.0 - res.estimators[1].mise / res.estimators[0].mise);

  res.blocks = std::move(blocks);
}

SimulationResult run(const SimulationSpec& spec, const std::vector<double>& xs,
                     const std::vector<double>& hz) {
  std::vector<const Kernel*> kernels;
  kernels.reserve(spec.estimators.size());
  for (const auto& e : spec.estimators)
    kernels.push_back(&Kernel::by_name(e.kernel));

  // block boundaries sit on global replication indices
  const std::uint64_t lo = spec.replication_offset;
  const std::uint64_t hi = lo + spec.replications;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;  // first, count
  for (std::uint64_t first = lo; first < hi;) {
    const std::uint64_t block_end = (first / kBlockReps + 1) * kBlockReps;
    const std::uint64_t end = std::min(hi, block_end);
    ranges.emplace_back(first, end - first);
    first = end;
  }

  std::vector<Block> blocks(ranges.size());
  unsigned threads = spec.threads
                         ? spec.threads
                         : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(ranges.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < ranges.size(); ++i)
      blocks[i] =
          run_block(spec, kernels, xs, ranges[i].first, ranges[i].second);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < ranges.size(); i += threads)
          blocks[i] =
              run_block(spec, kernels, xs, ranges[i].first, ranges[i].second);
      });
    }
    for (auto& th : pool) th.join();
  }

  SimulationResult res;
  res.model = spec.model.describe();
  res.n = spec.n;
  res.replications = spec.replications;
  res.replication_offset = spec.replication_offset;
  res.master_seed = spec.master_seed;
  res.grid_x = xs;
  res.true_hazard = hz;
  res.estimators.resize(spec.estimators.size());
  for (std::size_t e = 0; e < spec.estimators.size(); ++e)
    res.estimators[e].estimator = spec.estimators[e];
  summarize(res, std::move(blocks));
  return res;
}

}  // namespace

std::uint64_t derive_replication_seed(std::uint64_t master_seed,
                                      std::uint64_t replication_index) {
  std::uint64_t z =
      master_seed + (replication_index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::size_t simulation_block_size() { return kBlockReps; }

void SimulationSpec::validate() const {
  if (n < 1) throw std::invalid_argument("simulation: n must be >= 1");
  if (replications < 1)
    throw std::invalid_argument("simulation: replications must be >= 1");
  if (estimators.empty() || estimators.size() > 2)
    throw std::invalid_argument("simulation: one or two estimators required");
  for (const auto& e : estimators) {
    if (!(e.bandwidth > 0.0))
      throw std::invalid_argument("simulation: bandwidth must be positive");
    Kernel::by_name(e.kernel);
  }
  if (!(eps_lo > 0.0 && eps_lo < eps_hi && eps_hi < 1.0))
    throw std::invalid_argument(
        "simulation: quantile range must satisfy 0 < lo < hi < 1");
  if (grid < 2) throw std::invalid_argument("simulation: grid must be >= 2");
}

SimulationResult simulate_mise(const SimulationSpec& spec) {
  spec.validate();
  std::vector<double> xs(spec.grid), hz(spec.grid);
  for (std::size_t g = 0; g < spec.grid; ++g) {
    const double eps = spec.eps_lo + (spec.eps_hi - spec.eps_lo) *
                                         static_cast<double>(g) /
                                         static_cast<double>(spec.grid - 1);
    xs[g] = spec.model.quantile(eps);
    hz[g] = spec.model.hazard(xs[g]);
  }
  return run(spec, xs, hz);
}

std::vector<MsePointSummary> simulate_mse(const SimulationSpec& spec,
                                          double x0) {
  spec.validate();
  const std::vector<double> xs{x0};
  const std::vector<double> hz{spec.model.hazard(x0)};
  SimulationResult res = run(spec, xs, hz);
  std::vector<MsePointSummary> out;
  out.reserve(res.estimators.size());
  for (const auto& es : res.estimators)
    out.push_back({es.estimator, es.points[0], es.ts_fallbacks});
  return out;
}

SimulationResult pool(const SimulationResult& a, const SimulationResult& b) {
  if (a.model != b.model || a.n != b.n || a.master_seed != b.master_seed ||
      a.grid_x != b.grid_x || a.estimators.size() != b.estimators.size())
    throw std::invalid_argument("pool: runs are not compatible");
  for (std::size_t e = 0; e < a.estimators.size(); ++e) {
    const auto& ea = a.estimators[e].estimator;
    const auto& eb = b.estimators[e].estimator;
    if (ea.kind != eb.kind || ea.kernel != eb.kernel ||
        ea.bandwidth != eb.bandwidth)
      throw std::invalid_argument("pool: estimator specs differ");
  }
  if (b.replication_offset != a.replication_offset + a.replications)
    throw std::invalid_argument("pool: replication ranges are not adjacent");
  if (a.replication_offset % kBlockReps != 0 ||
      a.replications % kBlockReps != 0)
    throw std::invalid_argument(
        "pool: first range must be aligned to simulation_block_size()");

  SimulationResult res = a;
  res.replications = a.replications + b.replications;
  std::vector<Block> blocks = a.blocks;
  blocks.insert(blocks.end(), b.blocks.begin(), b.blocks.end());
  summarize(res, std::move(blocks));
  return res;
}

double improvement_rate(const SimulationSpec& spec) {
  if (spec.estimators.size() != 2)
    throw std::invalid_argument("improvement_rate: two estimators required");
  const SimulationResult res = simulate_mise(spec);
  if (!res.improvement_rate)
    throw std::runtime_error("improvement_rate: MISE undefined for this run");
  return *res.improvement_rate;
}

double standard_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

NormalityResult normality_check(const ParametricModel& model, double x0,
                                std::size_t n, double bandwidth_scale,
                                double bandwidth_exponent,
                                std::size_t replications,
                                std::uint64_t master_seed,
                                const Kernel& kernel) {
  if (!(bandwidth_scale > 0.0))
    throw std::invalid_argument("normality_check: scale c must be positive");
  if (!(bandwidth_exponent >= 0.2 && bandwidth_exponent < 0.5))
    throw std::invalid_argument(
        "normality_check: exponent d must satisfy 1/5 <= d < 1/2");
  if (replications < 100)
    throw std::invalid_argument(
        "normality_check: insufficient replicates (minimum 100)");
  const double nn = static_cast<double>(n);
  const double h = bandwidth_scale * std::pow(nn, -bandwidth_exponent);
  const KernelMoments mom = kernel_moments(kernel);
  const double b1 = direct_bias_coeff(model, x0, mom);
  const double v1 = direct_variance_coeff(model, x0, mom);
  const double hz = model.hazard(x0);
  const double scale = std::sqrt(nn * h);

  std::vector<double> z(replications);
  for (std::size_t r = 0; r < replications; ++r) {
    const std::uint64_t seed = derive_replication_seed(master_seed, r);
    SortedSample sample(model.sample(n, seed));
    const double est = direct_hazard(sample, kernel, h, x0);
    z[r] = scale * (est - hz - h * h * b1) / std::sqrt(v1);
  }
  const double d = ks_statistic(std::move(z),
                                [](double t) { return standard_normal_cdf(t); });
  return {d, ks_pvalue(d, replications), h, replications};
}

}  // namespace hazkde
