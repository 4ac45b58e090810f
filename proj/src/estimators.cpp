#include "hazkde/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hazkde {

namespace {

void require_bandwidth(double h) {
  if (!(h > 0.0) || !std::isfinite(h))
    throw std::invalid_argument("bandwidth must be positive");
}

// Margin used when locating the kernel window by binary search.  The
// window is a superset of the support; inclusion of each point is decided
// by the kernel itself, so the margin only has to cover rounding of the
// search bounds.
double window_slack(double center, double radius) {
  return 1e-9 * (std::abs(center) + radius) +
         std::numeric_limits<double>::min();
}

}  // namespace

EstimatorKind estimator_kind_from_name(std::string_view name) {
  if (name == "naive") return EstimatorKind::naive;
  if (name == "direct") return EstimatorKind::direct;
  if (name == "terrell-scott" || name == "ts")
    return EstimatorKind::terrell_scott;
  throw std::invalid_argument("unknown estimator: " + std::string(name));
}

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::naive:
      return "naive";
    case EstimatorKind::direct:
      return "direct";
    case EstimatorKind::terrell_scott:
      return "terrell-scott";
  }
  return "?";
}

double naive_hazard(const SortedSample& s, const Kernel& k, double h,
                    double x0, const NaiveOptions& options) {
  require_bandwidth(h);
  const auto& xs = s.values();
  const std::size_t n = xs.size();
  const double radius = h * k.support_halfwidth();
  const double slack = window_slack(x0, radius);

  // Observations left of the window contribute W = 1 and K = 0 exactly;
  // they are counted rather than evaluated.  Points inside the widened
  // window are evaluated pairwise so that the kernel argument depends on
  // x0 - X_i only.
  const std::size_t lo = static_cast<std::size_t>(
      std::lower_bound(xs.begin(), xs.end(), x0 - radius - slack) -
      xs.begin());
  const std::size_t hi = static_cast<std::size_t>(
      std::upper_bound(xs.begin(), xs.end(), x0 + radius + slack) -
      xs.begin());

  double cdf_acc = static_cast<double>(lo);
  double pdf_acc = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    const double u = (x0 - xs[i]) / h;
    pdf_acc += k(u);
    cdf_acc += k.cdf(u);
  }
  const double fhat = pdf_acc / (static_cast<double>(n) * h);
  const double denom = 1.0 - cdf_acc / static_cast<double>(n);
  if (denom <= options.denom_tol)
    throw DenominatorDegenerateError(
        "naive hazard: 1 - Fhat(x0) <= " + std::to_string(options.denom_tol) +
        " at x0=" + std::to_string(x0));
  return fhat / denom;
}

double direct_hazard(const SortedSample& s, const Kernel& k, double h,
                     double x0) {
  require_bandwidth(h);
  const auto& xs = s.values();
  const auto& eta = s.integrated_ecdf_at_data();
  const auto& emin = s.expected_min_at_data();
  const std::size_t n = xs.size();
  const double eta0 = s.integrated_ecdf(x0);
  const double m0 = s.expected_min(x0);
  const double radius = h * k.support_halfwidth();
  const double slack = window_slack(m0, radius);

  const std::size_t lo = static_cast<std::size_t>(
      std::lower_bound(emin.begin(), emin.end(), m0 - radius - slack) -
      emin.begin());
  const std::size_t hi = static_cast<std::size_t>(
      std::upper_bound(emin.begin(), emin.end(), m0 + radius + slack) -
      emin.begin());

  double acc = 0.0;
  for (std::size_t j = lo; j < hi; ++j) {
    // (X_j - eta_j) - (x0 - eta0), grouped as differences of likes so the
    // value is invariant under exact location shifts of the data
    const double u = ((xs[j] - x0) - (eta[j] - eta0)) / h;
    acc += k(u);
  }
  return acc / (static_cast<double>(n) * h);
}

double ts_combine(double at_h, double at_2h, TerrellScottStats* stats) {
  if (at_h <= 0.0) return 0.0;
  if (at_2h <= 1e-12) {
    if (stats) ++stats->pilot_fallbacks;
    return at_h;
  }
  return std::pow(at_h, 4.0 / 3.0) * std::pow(at_2h, -1.0 / 3.0);
}

double terrell_scott_hazard(const SortedSample& s, const Kernel& k, double h,
                            double x0, TerrellScottStats* stats) {
  require_bandwidth(h);
  const double narrow = direct_hazard(s, k, h, x0);
  const double wide = direct_hazard(s, k, 2.0 * h, x0);
  return ts_combine(narrow, wide, stats);
}

double direct_density_ratio(const SortedSample& num, const SortedSample& den,
                            const Kernel& k, double h, double x0) {
  require_bandwidth(h);
  const auto& xs = num.values();
  const std::size_t n = xs.size();
  const double g0 = den.ecdf(x0);
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double u = (g0 - den.ecdf(xs[j])) / h;
    acc += k(u);
  }
  return acc / (static_cast<double>(n) * h);
}

double evaluate_hazard(EstimatorKind kind, const SortedSample& s,
                       const Kernel& k, double h, double x0,
                       TerrellScottStats* stats, const NaiveOptions& options) {
  switch (kind) {
    case EstimatorKind::naive:
      return naive_hazard(s, k, h, x0, options);
    case EstimatorKind::direct:
      return direct_hazard(s, k, h, x0);
    case EstimatorKind::terrell_scott:
      return terrell_scott_hazard(s, k, h, x0, stats);
  }
  throw std::logic_error("evaluate_hazard: bad kind");
}

PluginBandwidth plugin_bandwidth(const SortedSample& s, const Kernel& k,
                                 EstimatorKind kind, double x0) {
  const std::size_t n = s.size();
  const double nn = static_cast<double>(n);
  const double pilot = 1.06 * s.sd() * std::pow(nn, -0.2);
  if (!(pilot > 0.0))
    throw std::invalid_argument("plugin bandwidth: sample has zero spread");

  double f = 0.0, f1 = 0.0, f2 = 0.0, cdf = 0.0;
  for (double x : s.values()) {
    const double u = (x0 - x) / pilot;
    f += k(u);
    f1 += k.deriv1(u);
    f2 += k.deriv2(u);
    cdf += k.cdf(u);
  }
  f /= nn * pilot;
  f1 /= nn * pilot * pilot;
  f2 /= nn * pilot * pilot * pilot;
  const double m = 1.0 - cdf / nn;
  if (m <= 1e-12)
    throw DenominatorDegenerateError(
        "plugin bandwidth: pilot survival estimate vanished at x0=" +
        std::to_string(x0));

  const double a12 = k.moment(1, 2);
  const double a20 = k.moment(2, 0);

  double num, surv_pow;
  if (kind == EstimatorKind::naive) {
    num = m * f2 + f * f1;
    surv_pow = m * m;
  } else {
    num = m * (m * f2 + 4.0 * f * f1) + 3.0 * f * f * f;
    double m9 = 1.0;
    for (int i = 0; i < 9; ++i) m9 *= m;
    surv_pow = m9;
  }

  PluginBandwidth out{pilot, pilot, false};
  const double scale = std::abs(m * f2) + std::abs(f * f1) + std::abs(f * f * f);
  if (f <= 0.0 || std::abs(num) < 1e-10 * scale || num == 0.0) {
    out.degenerate_fallback = true;
    return out;
  }
  const double ratio = (a20 / (a12 * a12)) * surv_pow * f / (num * num);
  double h = std::pow(nn, -0.2) * std::pow(ratio, 0.2);
  if (kind == EstimatorKind::terrell_scott) h = std::pow(h, 5.0 / 9.0);
  out.h = h;
  return out;
}

void EstimatorSpec::validate() const {
  if (bandwidth && !(*bandwidth > 0.0))
    throw std::invalid_argument("estimator: fixed bandwidth must be positive");
  Kernel::by_name(kernel);  // throws for unknown names
}

}  // namespace hazkde
