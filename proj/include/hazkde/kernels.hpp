#pragma once

#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace hazkde {

// A symmetric, nonnegative smoothing kernel with compact support [-d, d].
// Provides the kernel itself, its antiderivative W(u) = int_{-inf}^u K,
// the first two derivatives (used by derivative-of-kernel pilot estimates)
// and the moments A(i,j) = int K^i(u) u^j du.
class Kernel {
 public:
  // Look up a built-in kernel by name: "epanechnikov", "uniform",
  // "biweight", "triweight".  Throws std::invalid_argument otherwise.
  static const Kernel& by_name(std::string_view name);
  static std::vector<std::string> builtin_names();

  const std::string& name() const { return name_; }
  double support_halfwidth() const { return halfwidth_; }

  // K(u); exactly zero outside [-d, d].
  double operator()(double u) const;

  // W(u) = int_{-inf}^u K(t) dt, clamped to [0, 1].
  double cdf(double u) const;

  // dK/du and d^2K/du^2 (zero outside the support).
  double deriv1(double u) const;
  double deriv2(double u) const;

  // A(i,j) = int K^i(u) u^j du over the support, i >= 1, j >= 0.
  // Computed by Gauss-Legendre quadrature and cached.
  double moment(int i, int j) const;

  // sup |dK/du|, for continuity bounds of kernel sums.
  double lipschitz_bound() const { return lipschitz_; }

 private:
  using Fn = double (*)(double);

  Kernel(std::string name, double halfwidth, Fn eval, Fn cdf, Fn d1, Fn d2,
         double lipschitz);

  std::string name_;
  double halfwidth_;
  Fn eval_;
  Fn cdf_;
  Fn d1_;
  Fn d2_;
  double lipschitz_;

  mutable std::mutex moment_mutex_;
  mutable std::map<std::pair<int, int>, double> moment_cache_;
};

// The three moments appearing in the asymptotic formulas.
struct KernelMoments {
  double a12;  // A(1,2)
  double a20;  // A(2,0)
  double a14;  // A(1,4)
};

// Moments of the given kernel, from quadrature.
KernelMoments kernel_moments(const Kernel& k);

// The constant pair used by the published reference tables for the
// Epanechnikov kernel: A(1,2) = 1/5 together with A(2,0) = 3/10.  Note the
// second value is half the quadrature value of the standard Epanechnikov;
// the pair is kept verbatim so the tables can be reproduced as printed.
// A(1,4) is not part of the published pair and keeps its quadrature value.
KernelMoments published_table_moments();

}  // namespace hazkde
