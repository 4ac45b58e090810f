#include "hazkde/kernels.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace hazkde {

namespace {

// --- built-in kernel shapes, all supported on [-1, 1] ---

double epan_eval(double u) { return 0.75 * (1.0 - u * u); }
double epan_cdf(double u) { return 0.75 * (u - u * u * u / 3.0) + 0.5; }
double epan_d1(double u) { return -1.5 * u; }
double epan_d2(double) { return -1.5; }

double unif_eval(double) { return 0.5; }
double unif_cdf(double u) { return 0.5 * (u + 1.0); }
double unif_d1(double) { return 0.0; }
double unif_d2(double) { return 0.0; }

double biw_eval(double u) {
  const double t = 1.0 - u * u;
  return 15.0 / 16.0 * t * t;
}
double biw_cdf(double u) {
  const double u3 = u * u * u;
  return 15.0 / 16.0 * (u - 2.0 * u3 / 3.0 + u3 * u * u / 5.0) + 0.5;
}
double biw_d1(double u) { return -15.0 / 4.0 * u * (1.0 - u * u); }
double biw_d2(double u) { return -15.0 / 4.0 * (1.0 - 3.0 * u * u); }

double triw_eval(double u) {
  const double t = 1.0 - u * u;
  return 35.0 / 32.0 * t * t * t;
}
double triw_cdf(double u) {
  const double u2 = u * u;
  const double u3 = u2 * u;
  return 35.0 / 32.0 * (u - u3 + 0.6 * u3 * u2 - u3 * u3 * u / 7.0) + 0.5;
}
double triw_d1(double u) {
  const double t = 1.0 - u * u;
  return -105.0 / 16.0 * u * t * t;
}
double triw_d2(double u) {
  const double u2 = u * u;
  return -105.0 / 16.0 * (1.0 - u2) * (1.0 - 5.0 * u2);
}

// 64-point Gauss-Legendre rule on [-1, 1]; nodes found by Newton iteration
// on the Legendre polynomial.  Exact for polynomials up to degree 127,
// which covers K^i(u) u^j for every built-in kernel and sane (i, j).
struct GaussLegendre64 {
  std::array<double, 64> node;
  std::array<double, 64> weight;

  GaussLegendre64() {
    constexpr int n = 64;
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 0; j < n; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
        }
        pp = n * (x * p0 - p1) / (x * x - 1.0);
        const double dx = p0 / pp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      node[i] = -x;
      node[n - 1 - i] = x;
      weight[i] = 2.0 / ((1.0 - x * x) * pp * pp);
      weight[n - 1 - i] = weight[i];
    }
  }
};

const GaussLegendre64& gl64() {
  static const GaussLegendre64 rule;
  return rule;
}

}  // namespace

Kernel::Kernel(std::string name, double halfwidth, Fn eval, Fn cdf, Fn d1,
               Fn d2, double lipschitz)
    : name_(std::move(name)),
      halfwidth_(halfwidth),
      eval_(eval),
      cdf_(cdf),
      d1_(d1),
      d2_(d2),
      lipschitz_(lipschitz) {}

const Kernel& Kernel::by_name(std::string_view name) {
  static const Kernel epan{"epanechnikov", 1.0, epan_eval, epan_cdf,
                           epan_d1,        epan_d2, 1.5};
  static const Kernel unif{"uniform", 1.0, unif_eval, unif_cdf,
                           unif_d1,   unif_d2, 0.0};
  static const Kernel biw{"biweight", 1.0, biw_eval, biw_cdf,
                          biw_d1,     biw_d2, 15.0 / 16.0 * 2.0};
  static const Kernel triw{"triweight", 1.0, triw_eval, triw_cdf,
                           triw_d1,     triw_d2, 105.0 / 16.0};
  if (name == "epanechnikov") return epan;
  if (name == "uniform") return unif;
  if (name == "biweight") return biw;
  if (name == "triweight") return triw;
  throw std::invalid_argument("unknown kernel: " + std::string(name));
}

std::vector<std::string> Kernel::builtin_names() {
  return {"epanechnikov", "uniform", "biweight", "triweight"};
}

double Kernel::operator()(double u) const {
  if (std::abs(u) > halfwidth_) return 0.0;
  return eval_(u);
}

double Kernel::cdf(double u) const {
  if (u <= -halfwidth_) return 0.0;
  if (u >= halfwidth_) return 1.0;
  const double w = cdf_(u);
  return w < 0.0 ? 0.0 : (w > 1.0 ? 1.0 : w);
}

double Kernel::deriv1(double u) const {
  if (std::abs(u) > halfwidth_) return 0.0;
  return d1_(u);
}

double Kernel::deriv2(double u) const {
  if (std::abs(u) > halfwidth_) return 0.0;
  return d2_(u);
}

double Kernel::moment(int i, int j) const {
  if (i < 1) throw std::invalid_argument("kernel moment: i must be >= 1");
  if (j < 0) throw std::invalid_argument("kernel moment: j must be >= 0");
  const auto key = std::make_pair(i, j);
  {
    std::lock_guard lock(moment_mutex_);
    if (auto it = moment_cache_.find(key); it != moment_cache_.end())
      return it->second;
  }
  const auto& rule = gl64();
  double sum = 0.0;
  for (int q = 0; q < 64; ++q) {
    const double u = halfwidth_ * rule.node[q];
    double v = eval_(u);
    double p = v;
    for (int t = 1; t < i; ++t) p *= v;
    for (int t = 0; t < j; ++t) p *= u;
    sum += rule.weight[q] * p;
  }
  sum *= halfwidth_;
  std::lock_guard lock(moment_mutex_);
  moment_cache_[key] = sum;  // idempotent on races
  return sum;
}

KernelMoments kernel_moments(const Kernel& k) {
  return {k.moment(1, 2), k.moment(2, 0), k.moment(1, 4)};
}

KernelMoments published_table_moments() {
  const Kernel& epan = Kernel::by_name("epanechnikov");
  return {0.2, 0.3, epan.moment(1, 4)};
}

}  // namespace hazkde
