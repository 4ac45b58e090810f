#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hazkde {

// Thrown when 1 - F(x) has underflowed and ratios against powers of the
// survival function are meaningless.
class SurvivalUnderflowError : public std::runtime_error {
 public:
  explicit SurvivalUnderflowError(const std::string& what)
      : std::runtime_error(what) {}
};

// An analytic lifetime distribution: density with derivatives up to order
// four, distribution/survival functions, hazard, quantile and a seeded
// inverse-CDF sampler.  Instances are immutable value objects.
class ParametricModel {
 public:
  enum class Family { exponential, uniform, gamma, weibull, scaled_beta };

  static ParametricModel exponential(double lambda);      // F = 1 - e^(-lambda x)
  static ParametricModel uniform(double b);                // flat on (0, b)
  static ParametricModel gamma(double shape, double scale);
  static ParametricModel weibull(double shape, double scale);
  static ParametricModel scaled_beta(double r, double s, double scale);

  // Parse "family:key=value,..." as used on the command line, e.g.
  // "gamma:shape=0.5,scale=100" or "beta:r=2,s=5,scale=100".
  static ParametricModel parse(std::string_view spec);

  Family family() const { return family_; }
  std::string describe() const;

  // support endpoints; upper may be +infinity
  std::pair<double, double> support() const;

  double pdf(double x) const;
  double cdf(double x) const;
  double survival(double x) const;  // 1 - F, evaluated in the upper tail

  // k-th derivative of the density at an interior point, k = 0..4.
  // Throws std::domain_error outside the open support interval.
  double pdf_deriv(double x, int order) const;

  // f(x) / (1 - F(x)); throws SurvivalUnderflowError when the survival
  // function has underflowed to zero.
  double hazard(double x) const;

  // Inverse CDF; requires eps in (0, 1).
  double quantile(double eps) const;

  // n inverse-CDF draws from a deterministic uniform stream seeded with
  // `seed`; identical (seed, n) always yields identical output.
  std::vector<double> sample(std::size_t n, std::uint64_t seed) const;

 private:
  ParametricModel(Family f, double p1, double p2, double p3);

  // log-density derivatives d^k/dx^k log f(x), k = 1..4
  void log_pdf_derivs(double x, double out[4]) const;
  bool interior(double x) const;

  Family family_;
  double p1_;  // lambda / b / shape / r
  double p2_;  // scale / s
  double p3_;  // scale for the beta family
};

}  // namespace hazkde
