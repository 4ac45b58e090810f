#include "hazkde/models.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "hazkde/special_functions.hpp"

namespace hazkde {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string(what) + " must be positive");
  return v;
}

// 64-bit SplitMix step; drives the portable uniform stream below.
std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Uniform draws in the open interval (0, 1) built from raw 64-bit words,
// so streams are identical across platforms and standard libraries.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : state_(seed) {}
  double next() {
    const std::uint64_t bits = splitmix64(state_) >> 11;  // 53 bits
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// Safeguarded Newton inversion of a monotone CDF on [lo, hi].
template <typename Cdf, typename Pdf>
double invert_cdf(double target, double lo, double hi, double x0,
                  const Cdf& cdf, const Pdf& pdf) {
  double x = std::min(std::max(x0, lo), hi);
  for (int it = 0; it < 200; ++it) {
    const double f = cdf(x) - target;
    if (std::abs(f) < 1e-15) return x;
    if (f > 0.0)
      hi = x;
    else
      lo = x;
    const double d = pdf(x);
    double xn = d > 0.0 ? x - f / d : 0.5 * (lo + hi);
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);  // bisect
    if (std::abs(xn - x) <= 1e-15 * (std::abs(x) + 1e-300)) return x;
    x = xn;
  }
  return x;
}

}  // namespace

ParametricModel::ParametricModel(Family f, double p1, double p2, double p3)
    : family_(f), p1_(p1), p2_(p2), p3_(p3) {}

ParametricModel ParametricModel::exponential(double lambda) {
  return {Family::exponential, require_positive(lambda, "lambda"), 0.0, 0.0};
}

ParametricModel ParametricModel::uniform(double b) {
  return {Family::uniform, require_positive(b, "b"), 0.0, 0.0};
}

ParametricModel ParametricModel::gamma(double shape, double scale) {
  return {Family::gamma, require_positive(shape, "shape"),
          require_positive(scale, "scale"), 0.0};
}

ParametricModel ParametricModel::weibull(double shape, double scale) {
  return {Family::weibull, require_positive(shape, "shape"),
          require_positive(scale, "scale"), 0.0};
}

ParametricModel ParametricModel::scaled_beta(double r, double s,
                                             double scale) {
  return {Family::scaled_beta, require_positive(r, "r"),
          require_positive(s, "s"), require_positive(scale, "scale")};
}

ParametricModel ParametricModel::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  std::string family(spec.substr(0, colon));
  std::string args(colon == std::string_view::npos ? ""
                                                   : spec.substr(colon + 1));
  double lambda = 1.0, b = 1.0, shape = 1.0, scale = 1.0, r = 1.0, s = 1.0;
  bool have_shape = false;
  std::stringstream ss(args);
  std::string kv;
  while (std::getline(ss, kv, ',')) {
    if (kv.empty()) continue;
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("model: expected key=value, got '" + kv +
                                  "'");
    const std::string key = kv.substr(0, eq);
    double val;
    try {
      std::size_t pos = 0;
      val = std::stod(kv.substr(eq + 1), &pos);
      if (pos != kv.size() - eq - 1) throw std::invalid_argument("");
    } catch (...) {
      throw std::invalid_argument("model: bad numeric value in '" + kv + "'");
    }
    if (key == "lambda" || key == "rate")
      lambda = val;
    else if (key == "b")
      b = val;
    else if (key == "shape" || key == "p" || key == "q") {
      shape = val;
      have_shape = true;
    } else if (key == "scale" || key == "sigma")
      scale = val;
    else if (key == "r")
      r = val;
    else if (key == "s")
      s = val;
    else
      throw std::invalid_argument("model: unknown parameter '" + key + "'");
  }
  if (family == "exponential" || family == "exp") return exponential(lambda);
  if (family == "uniform") return uniform(b);
  if (family == "gamma") {
    if (!have_shape) throw std::invalid_argument("gamma: shape is required");
    return gamma(shape, scale);
  }
  if (family == "weibull") {
    if (!have_shape) throw std::invalid_argument("weibull: shape is required");
    return weibull(shape, scale);
  }
  if (family == "beta" || family == "scaled-beta")
    return scaled_beta(r, s, scale);
  throw std::invalid_argument("unknown model family: " + family);
}

std::string ParametricModel::describe() const {
  std::ostringstream os;
  switch (family_) {
    case Family::exponential:
      os << "exponential(lambda=" << p1_ << ")";
      break;
    case Family::uniform:
      os << "uniform(b=" << p1_ << ")";
      break;
    case Family::gamma:
      os << "gamma(shape=" << p1_ << ",scale=" << p2_ << ")";
      break;
    case Family::weibull:
      os << "weibull(shape=" << p1_ << ",scale=" << p2_ << ")";
      break;
    case Family::scaled_beta:
      os << "beta(r=" << p1_ << ",s=" << p2_ << ",scale=" << p3_ << ")";
      break;
  }
  return os.str();
}

std::pair<double, double> ParametricModel::support() const {
  switch (family_) {
    case Family::uniform:
      return {0.0, p1_};
    case Family::scaled_beta:
      return {0.0, p3_};
    default:
      return {0.0, kInf};
  }
}

bool ParametricModel::interior(double x) const {
  const auto [lo, hi] = support();
  return x > lo && x < hi;
}

double ParametricModel::pdf(double x) const {
  switch (family_) {
    case Family::exponential:
      return x < 0.0 ? 0.0 : p1_ * std::exp(-p1_ * x);
    case Family::uniform:
      return (x < 0.0 || x > p1_) ? 0.0 : 1.0 / p1_;
    case Family::gamma: {
      if (x <= 0.0) return 0.0;
      const double lf = (p1_ - 1.0) * std::log(x) - x / p2_ -
                        std::lgamma(p1_) - p1_ * std::log(p2_);
      return std::exp(lf);
    }
    case Family::weibull: {
      if (x <= 0.0) return 0.0;
      const double z = x / p2_;
      return (p1_ / p2_) * std::pow(z, p1_ - 1.0) * std::exp(-std::pow(z, p1_));
    }
    case Family::scaled_beta: {
      if (x <= 0.0 || x >= p3_) return 0.0;
      const double z = x / p3_;
      const double lf = (p1_ - 1.0) * std::log(z) +
                        (p2_ - 1.0) * std::log1p(-z) - log_beta(p1_, p2_) -
                        std::log(p3_);
      return std::exp(lf);
    }
  }
  return 0.0;
}

double ParametricModel::cdf(double x) const {
  switch (family_) {
    case Family::exponential:
      return x <= 0.0 ? 0.0 : -std::expm1(-p1_ * x);
    case Family::uniform:
      return x <= 0.0 ? 0.0 : (x >= p1_ ? 1.0 : x / p1_);
    case Family::gamma:
      return x <= 0.0 ? 0.0 : gamma_p(p1_, x / p2_);
    case Family::weibull:
      return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x / p2_, p1_));
    case Family::scaled_beta:
      return x <= 0.0 ? 0.0
                      : (x >= p3_ ? 1.0 : beta_inc(p1_, p2_, x / p3_));
  }
  return 0.0;
}

double ParametricModel::survival(double x) const {
  switch (family_) {
    case Family::exponential:
      return x <= 0.0 ? 1.0 : std::exp(-p1_ * x);
    case Family::uniform:
      return x <= 0.0 ? 1.0 : (x >= p1_ ? 0.0 : 1.0 - x / p1_);
    case Family::gamma:
      return x <= 0.0 ? 1.0 : gamma_q(p1_, x / p2_);
    case Family::weibull:
      return x <= 0.0 ? 1.0 : std::exp(-std::pow(x / p2_, p1_));
    case Family::scaled_beta:
      return x <= 0.0 ? 1.0
                      : (x >= p3_ ? 0.0 : beta_inc(p2_, p1_, 1.0 - x / p3_));
  }
  return 0.0;
}

void ParametricModel::log_pdf_derivs(double x, double out[4]) const {
  switch (family_) {
    case Family::exponential:
      out[0] = -p1_;
      out[1] = out[2] = out[3] = 0.0;
      return;
    case Family::uniform:
      out[0] = out[1] = out[2] = out[3] = 0.0;
      return;
    case Family::gamma: {
      const double a = p1_ - 1.0;
      out[0] = a / x - 1.0 / p2_;
      out[1] = -a / (x * x);
      out[2] = 2.0 * a / (x * x * x);
      out[3] = -6.0 * a / (x * x * x * x);
      return;
    }
    case Family::weibull: {
      const double q = p1_, s = p2_;
      const double a = q - 1.0;
      const double z = x / s;
      out[0] = a / x - (q / s) * std::pow(z, q - 1.0);
      out[1] = -a / (x * x) - (q * (q - 1.0) / (s * s)) * std::pow(z, q - 2.0);
      out[2] = 2.0 * a / (x * x * x) -
               (q * (q - 1.0) * (q - 2.0) / (s * s * s)) * std::pow(z, q - 3.0);
      out[3] = -6.0 * a / (x * x * x * x) -
               (q * (q - 1.0) * (q - 2.0) * (q - 3.0) / (s * s * s * s)) *
                   std::pow(z, q - 4.0);
      return;
    }
    case Family::scaled_beta: {
      const double z = x / p3_;
      const double w = 1.0 - z;
      const double a = p1_ - 1.0, b = p2_ - 1.0;
      const double s = p3_;
      out[0] = (a / z - b / w) / s;
      out[1] = (-a / (z * z) - b / (w * w)) / (s * s);
      out[2] = (2.0 * a / (z * z * z) - 2.0 * b / (w * w * w)) / (s * s * s);
      out[3] = (-6.0 * a / (z * z * z * z) - 6.0 * b / (w * w * w * w)) /
               (s * s * s * s);
      return;
    }
  }
}

double ParametricModel::pdf_deriv(double x, int order) const {
  if (order < 0 || order > 4)
    throw std::invalid_argument("pdf_deriv: order must be in 0..4");
  if (!interior(x))
    throw std::domain_error("pdf_deriv: x outside the support interior");
  const double f = pdf(x);
  if (order == 0) return f;
  double l[4];
  log_pdf_derivs(x, l);
  const double d1 = l[0], d2 = l[1], d3 = l[2], d4 = l[3];
  switch (order) {
    case 1:
      return f * d1;
    case 2:
      return f * (d1 * d1 + d2);
    case 3:
      return f * (d1 * d1 * d1 + 3.0 * d1 * d2 + d3);
    default:
      return f * (d1 * d1 * d1 * d1 + 6.0 * d1 * d1 * d2 + 3.0 * d2 * d2 +
                  4.0 * d1 * d3 + d4);
  }
}

double ParametricModel::hazard(double x) const {
  const double m = survival(x);
  if (m <= 0.0)
    throw SurvivalUnderflowError("hazard: survival function underflowed at x=" +
                                 std::to_string(x));
  return pdf(x) / m;
}

double ParametricModel::quantile(double eps) const {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("quantile: eps must be in (0, 1)");
  switch (family_) {
    case Family::exponential:
      return -std::log1p(-eps) / p1_;
    case Family::uniform:
      return eps * p1_;
    case Family::weibull:
      return p2_ * std::pow(-std::log1p(-eps), 1.0 / p1_);
    case Family::gamma: {
      double hi = p2_ * (p1_ + 10.0 * std::sqrt(p1_) + 30.0);
      while (cdf(hi) < eps) hi *= 2.0;
      const double x0 = p2_ * p1_;  // mean as starting point
      return invert_cdf(
          eps, 0.0, hi, x0, [this](double x) { return cdf(x); },
          [this](double x) { return pdf(x); });
    }
    case Family::scaled_beta: {
      const double z0 = p1_ / (p1_ + p2_);
      const double z = invert_cdf(
          eps, 0.0, 1.0, z0,
          [this](double z) { return beta_inc(p1_, p2_, z); },
          [this](double z) {
            return std::exp((p1_ - 1.0) * std::log(z) +
                            (p2_ - 1.0) * std::log1p(-z) -
                            log_beta(p1_, p2_));
          });
      return p3_ * z;
    }
  }
  return 0.0;
}

std::vector<double> ParametricModel::sample(std::size_t n,
                                            std::uint64_t seed) const {
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  UniformStream stream(seed);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = quantile(stream.next());
  return out;
}

}  // namespace hazkde
