#include "hazkde/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace hazkde {

namespace {

constexpr double kSurvivalFloor = 1e-30;  // 10th power stays normal
constexpr double kDegenerateBiasSq = 1e-300;

double checked_survival(const ParametricModel& model, double x0) {
  const double m = model.survival(x0);
  if (m < kSurvivalFloor)
    throw SurvivalUnderflowError(
        "survival function underflowed at x0=" + std::to_string(x0));
  return m;
}

// Sums whose cancellation falls below the accumulated rounding noise of
// their terms are numerically indistinguishable from zero; snap them so
// analytically vanishing bias coefficients come out exactly zero.
double cancel_guard(double total, double term_scale) {
  if (std::abs(total) <
      64.0 * std::numeric_limits<double>::epsilon() * term_scale)
    return 0.0;
  return total;
}

double pow_n(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

}  // namespace

double direct_bias_coeff(const ParametricModel& model, double x0,
                         const KernelMoments& mom) {
  const double m = checked_survival(model, x0);
  const double f = model.pdf_deriv(x0, 0);
  const double f1 = model.pdf_deriv(x0, 1);
  const double f2 = model.pdf_deriv(x0, 2);
  const double t1 = m * (m * f2);
  const double t2 = m * (4.0 * f * f1);
  const double t3 = 3.0 * f * f * f;
  const double num = cancel_guard(
      m * (m * f2 + 4.0 * f * f1) + t3,
      std::abs(t1) + std::abs(t2) + std::abs(t3));
  return 0.5 * mom.a12 * num / pow_n(m, 5);
}

double direct_variance_coeff(const ParametricModel& model, double x0,
                             const KernelMoments& mom) {
  const double m = checked_survival(model, x0);
  return mom.a20 * model.pdf(x0) / m;
}

double naive_bias_coeff(const ParametricModel& model, double x0,
                        const KernelMoments& mom) {
  const double m = checked_survival(model, x0);
  const double f = model.pdf_deriv(x0, 0);
  const double f1 = model.pdf_deriv(x0, 1);
  const double f2 = model.pdf_deriv(x0, 2);
  const double t1 = m * f2;
  const double t2 = f * f1;
  const double num = cancel_guard(t1 + t2, std::abs(t1) + std::abs(t2));
  return 0.5 * mom.a12 * num / (m * m);
}

double naive_variance_coeff(const ParametricModel& model, double x0,
                            const KernelMoments& mom) {
  const double m = checked_survival(model, x0);
  return mom.a20 * model.pdf(x0) / (m * m);
}

double a2(const ParametricModel& model, double x0, const KernelMoments& mom) {
  const double m = checked_survival(model, x0);
  const double m1 = -model.pdf_deriv(x0, 0);
  const double m2 = -model.pdf_deriv(x0, 1);
  const double m3 = -model.pdf_deriv(x0, 2);
  const double t1 = -(m * m) * m3;
  const double t2 = 4.0 * m * m1 * m2;
  const double t3 = -3.0 * m1 * m1 * m1;
  const double num = cancel_guard(t1 + t2 + t3, std::abs(t1) + std::abs(t2) +
                                                    std::abs(t3));
  return 0.5 * mom.a12 * num / pow_n(m, 5);
}

double a4(const ParametricModel& model, double x0, const KernelMoments& mom) {
  const double m = checked_survival(model, x0);
  const double m1 = -model.pdf_deriv(x0, 0);
  const double m2 = -model.pdf_deriv(x0, 1);
  const double m3 = -model.pdf_deriv(x0, 2);
  const double m4 = -model.pdf_deriv(x0, 3);
  const double m5 = -model.pdf_deriv(x0, 4);
  const double num = -60.0 * m * m * m1 * m1 * m3 +
                     15.0 * pow_n(m, 3) * m2 * m3 +
                     11.0 * pow_n(m, 3) * m1 * m4 - pow_n(m, 4) * m5 +
                     210.0 * m * pow_n(m1, 3) * m2 -
                     73.0 * m * m * m1 * m2 * m2 - 105.0 * pow_n(m1, 5);
  return mom.a14 / 24.0 * num / pow_n(m, 9);
}

double ts_bias_coeff(const ParametricModel& model, double x0,
                     const KernelMoments& mom) {
  const double hz = model.hazard(x0);
  if (!(hz > 0.0))
    throw std::domain_error("ts_bias: hazard vanishes at x0=" +
                            std::to_string(x0));
  const double a2v = a2(model, x0, mom);
  const double a4v = a4(model, x0, mom);
  return (2.0 * a2v * a2v - 4.0 * a4v * hz) / hz;
}

double ts_bias(const ParametricModel& model, double x0, double h,
               const KernelMoments& mom) {
  return ts_bias_coeff(model, x0, mom) * pow_n(h, 4);
}

double ts_variance_proxy_factor() {
  const double c = 4.0 / 3.0 + 1.0 / (3.0 * std::sqrt(2.0));
  return c * c;
}

AmseReport amse(EstimatorKind kind, const ParametricModel& model, double x0,
                std::uint64_t n, double h, const KernelMoments& mom) {
  if (!(h > 0.0)) throw std::invalid_argument("amse: h must be positive");
  if (n < 1) throw std::invalid_argument("amse: n must be >= 1");
  AmseReport r;
  r.kind = kind;
  r.x0 = x0;
  r.n = n;
  r.h = h;
  const double nn = static_cast<double>(n);
  if (kind == EstimatorKind::terrell_scott) {
    const double c = ts_bias_coeff(model, x0, mom);
    const double v =
        ts_variance_proxy_factor() * direct_variance_coeff(model, x0, mom);
    r.bias_sq = pow_n(h, 4) * pow_n(h, 4) * c * c;
    r.variance = v / (nn * h);
  } else {
    const double b = kind == EstimatorKind::naive
                         ? naive_bias_coeff(model, x0, mom)
                         : direct_bias_coeff(model, x0, mom);
    const double v = kind == EstimatorKind::naive
                         ? naive_variance_coeff(model, x0, mom)
                         : direct_variance_coeff(model, x0, mom);
    r.bias_sq = pow_n(h, 4) * b * b;
    r.variance = v / (nn * h);
  }
  r.amse = r.bias_sq + r.variance;
  r.optimal_h = optimal_bandwidth(kind, model, x0, n, mom);
  return r;
}

std::optional<double> optimal_bandwidth(EstimatorKind kind,
                                        const ParametricModel& model,
                                        double x0, std::uint64_t n,
                                        const KernelMoments& mom) {
  const double nn = static_cast<double>(n);
  if (kind == EstimatorKind::terrell_scott)
    return ts_optimal_bandwidth(model, x0, n, mom);
  const double b = kind == EstimatorKind::naive
                       ? naive_bias_coeff(model, x0, mom)
                       : direct_bias_coeff(model, x0, mom);
  const double v = kind == EstimatorKind::naive
                       ? naive_variance_coeff(model, x0, mom)
                       : direct_variance_coeff(model, x0, mom);
  const double bias_sq = b * b;
  if (bias_sq < kDegenerateBiasSq) return std::nullopt;
  return std::pow(v / (4.0 * nn * bias_sq), 0.2);
}

std::optional<double> ts_optimal_bandwidth(const ParametricModel& model,
                                           double x0, std::uint64_t n,
                                           const KernelMoments& mom) {
  const double c = ts_bias_coeff(model, x0, mom);
  if (c * c < kDegenerateBiasSq) return std::nullopt;
  const double v =
      ts_variance_proxy_factor() * direct_variance_coeff(model, x0, mom);
  return std::pow(v / (8.0 * static_cast<double>(n) * c * c), 1.0 / 9.0);
}

double ts_rule_bandwidth(double h_direct) {
  if (!(h_direct > 0.0))
    throw std::invalid_argument("ts_rule_bandwidth: h must be positive");
  return std::pow(h_direct, 5.0 / 9.0);
}

double numeric_optimal_bandwidth(EstimatorKind kind,
                                 const ParametricModel& model, double x0,
                                 std::uint64_t n, const KernelMoments& mom) {
  // golden section on log h; the objective is convex in log h
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = std::log(1e-9);
  double hi = std::log(1e9);
  auto objective = [&](double t) {
    return amse(kind, model, x0, n, std::exp(t), mom).amse;
  };
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = objective(x2);
    }
  }
  return std::exp(0.5 * (lo + hi));
}

MiseCoefficients integrated_amse_coeffs(EstimatorKind kind,
                                        const ParametricModel& model,
                                        double eps_lo, double eps_hi,
                                        std::size_t grid,
                                        const KernelMoments& mom) {
  if (!(eps_lo > 0.0 && eps_lo < eps_hi && eps_hi < 1.0))
    throw std::invalid_argument("quantile range must satisfy 0 < lo < hi < 1");
  if (grid < 2) throw std::invalid_argument("grid must have >= 2 points");
  std::vector<double> xs(grid), bias_sq(grid), var(grid);
  for (std::size_t g = 0; g < grid; ++g) {
    const double eps =
        eps_lo + (eps_hi - eps_lo) * static_cast<double>(g) /
                     static_cast<double>(grid - 1);
    const double x = model.quantile(eps);
    xs[g] = x;
    if (kind == EstimatorKind::terrell_scott) {
      const double c = ts_bias_coeff(model, x, mom);
      bias_sq[g] = c * c;  // coefficient of h^8
      var[g] = ts_variance_proxy_factor() * direct_variance_coeff(model, x, mom);
    } else {
      const double b = kind == EstimatorKind::naive
                           ? naive_bias_coeff(model, x, mom)
                           : direct_bias_coeff(model, x, mom);
      bias_sq[g] = b * b;
      var[g] = kind == EstimatorKind::naive
                   ? naive_variance_coeff(model, x, mom)
                   : direct_variance_coeff(model, x, mom);
    }
  }
  MiseCoefficients out{0.0, 0.0};
  for (std::size_t g = 0; g + 1 < grid; ++g) {
    const double w = xs[g + 1] - xs[g];
    out.integrated_bias_sq += 0.5 * w * (bias_sq[g] + bias_sq[g + 1]);
    out.integrated_variance += 0.5 * w * (var[g] + var[g + 1]);
  }
  return out;
}

std::optional<double> mise_optimal_bandwidth(EstimatorKind kind,
                                             const ParametricModel& model,
                                             std::uint64_t n, double eps_lo,
                                             double eps_hi, std::size_t grid,
                                             const KernelMoments& mom) {
  const auto c = integrated_amse_coeffs(kind, model, eps_lo, eps_hi, grid, mom);
  const double nn = static_cast<double>(n);
  if (c.integrated_bias_sq < kDegenerateBiasSq) return std::nullopt;
  if (kind == EstimatorKind::terrell_scott)
    return std::pow(c.integrated_variance / (8.0 * nn * c.integrated_bias_sq),
                    1.0 / 9.0);
  return std::pow(c.integrated_variance / (4.0 * nn * c.integrated_bias_sq),
                  0.2);
}

}  // namespace hazkde
