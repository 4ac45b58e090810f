#pragma once

#include <cstdint>
#include <optional>

#include "hazkde/estimators.hpp"
#include "hazkde/kernels.hpp"
#include "hazkde/models.hpp"

namespace hazkde {

// Leading-order mean squared error of a hazard estimator at a point:
//   amse = bias_sq + variance,  bias_sq = h^4 * B^2,  variance = V / (n h)
// together with the AMSE-minimizing bandwidth (empty when the squared
// bias coefficient vanishes and no finite optimum exists).
struct AmseReport {
  EstimatorKind kind;
  double x0;
  std::uint64_t n;
  double h;
  double bias_sq;
  double variance;
  double amse;
  std::optional<double> optimal_h;
};

// Bias coefficient B1 of the direct estimator,
//   (A12/2) [ (1-F){(1-F)f'' + 4 f f'} + 3 f^3 ] / (1-F)^5  at x0.
// Cancellation below the floating-point noise floor of the three terms is
// treated as an exact zero (constant-hazard families cancel analytically).
double direct_bias_coeff(const ParametricModel& model, double x0,
                         const KernelMoments& mom);

// Variance coefficient V1 = A20 * f/(1-F) at x0; the pointwise variance
// at (n, h) is V1 / (n h).
double direct_variance_coeff(const ParametricModel& model, double x0,
                             const KernelMoments& mom);

// Ratio-estimator counterparts: bias (A12/2)[(1-F)f'' + f f']/(1-F)^2 and
// variance A20 * f/(1-F)^2 (never below the direct coefficient).
double naive_bias_coeff(const ParametricModel& model, double x0,
                        const KernelMoments& mom);
double naive_variance_coeff(const ParametricModel& model, double x0,
                            const KernelMoments& mom);

// Coefficients of the h^2 and h^4 terms of the direct estimator's bias
// expansion, written in survival-function derivatives m = 1 - F.  a2 is
// algebraically identical to direct_bias_coeff.
double a2(const ParametricModel& model, double x0, const KernelMoments& mom);
double a4(const ParametricModel& model, double x0, const KernelMoments& mom);

// h^4 bias of the bias-reduced combination:
//   [2 a2^2(x0) - 4 a4(x0) H(x0)] / H(x0) * h^4.
double ts_bias(const ParametricModel& model, double x0, double h,
               const KernelMoments& mom);
double ts_bias_coeff(const ParametricModel& model, double x0,
                     const KernelMoments& mom);

// Variance inflation factor of the (4/3, -1/3) two-bandwidth combination,
// used as an explicit upper-bound proxy where no closed form exists.
double ts_variance_proxy_factor();

AmseReport amse(EstimatorKind kind, const ParametricModel& model, double x0,
                std::uint64_t n, double h, const KernelMoments& mom);

// Closed-form AMSE-optimal bandwidth (V/(4 n B^2))^(1/5) for the naive and
// direct kinds; the (.)^(1/9) proxy rate for terrell_scott.  Empty result
// marks an unbounded optimum (squared bias coefficient below 1e-300).
std::optional<double> optimal_bandwidth(EstimatorKind kind,
                                        const ParametricModel& model,
                                        double x0, std::uint64_t n,
                                        const KernelMoments& mom);

// Golden-section argmin of amse(h); cross-checks the closed form.
double numeric_optimal_bandwidth(EstimatorKind kind,
                                 const ParametricModel& model, double x0,
                                 std::uint64_t n, const KernelMoments& mom);

// Bandwidth rule for the bias-reduced estimator given the MISE-optimal
// direct bandwidth: h_direct^(5/9).
double ts_rule_bandwidth(double h_direct);

// Heuristic pointwise optimum for the bias-reduced estimator, minimizing
// ts_bias^2 + proxy variance; order n^(-1/9).
std::optional<double> ts_optimal_bandwidth(const ParametricModel& model,
                                           double x0, std::uint64_t n,
                                           const KernelMoments& mom);

// Integrated squared-bias and variance coefficients over the x-image of a
// quantile grid (trapezoid rule), so that
//   MISE(h) ~ h^4 * integrated_bias_sq + integrated_variance / (n h).
struct MiseCoefficients {
  double integrated_bias_sq;
  double integrated_variance;
};

MiseCoefficients integrated_amse_coeffs(EstimatorKind kind,
                                        const ParametricModel& model,
                                        double eps_lo, double eps_hi,
                                        std::size_t grid,
                                        const KernelMoments& mom);

// MISE-optimal bandwidth over the quantile grid; empty when the
// integrated squared bias vanishes.
std::optional<double> mise_optimal_bandwidth(EstimatorKind kind,
                                             const ParametricModel& model,
                                             std::uint64_t n, double eps_lo,
                                             double eps_hi, std::size_t grid,
                                             const KernelMoments& mom);

}  // namespace hazkde
