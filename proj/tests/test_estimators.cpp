#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "hazkde/estimators.hpp"

using namespace hazkde;

namespace {

double eta_brute(const std::vector<double>& xs, double y) {
  double s = 0.0;
  for (double x : xs)
    if (x <= y) s += y - x;
  return s / static_cast<double>(xs.size());
}

double direct_brute(const std::vector<double>& xs, const Kernel& k, double h,
                    double x0) {
  const double m0 = x0 - eta_brute(xs, x0);
  double acc = 0.0;
  for (double xj : xs) acc += k(((xj - eta_brute(xs, xj)) - m0) / h);
  return acc / (static_cast<double>(xs.size()) * h);
}

double ratio_brute(const std::vector<double>& xs, const std::vector<double>& ys,
                   const Kernel& k, double h, double x0) {
  auto ecdf = [&](double t) {
    std::size_t c = 0;
    for (double y : ys)
      if (y <= t) ++c;
    return static_cast<double>(c) / static_cast<double>(ys.size());
  };
  double acc = 0.0;
  for (double xj : xs) acc += k((ecdf(x0) - ecdf(xj)) / h);
  return acc / (static_cast<double>(xs.size()) * h);
}

double grid_value(std::mt19937_64& rng, double span) {
  std::uniform_real_distribution<double> U(0.0, span);
  return std::floor(U(rng) * 65536.0) / 65536.0;
}

}  // namespace

TEST_CASE("single observation at the evaluation point") {
  const Kernel& ep = Kernel::by_name("epanechnikov");
  SortedSample s({2.0});
  const double h = 0.4;
  CHECK(direct_hazard(s, ep, h, 2.0) == doctest::Approx(0.75 / h));
  // fhat = K(0)/h, Fhat = W(0) = 1/2
  CHECK(naive_hazard(s, ep, h, 2.0) == doctest::Approx(1.5 / h));
}

TEST_CASE("naive denominator degenerates beyond the data") {
  const Kernel& ep = Kernel::by_name("epanechnikov");
  SortedSample s({0.0, 0.1, 0.2, 0.3});
  CHECK_THROWS_AS(naive_hazard(s, ep, 0.5, 5.0), DenominatorDegenerateError);
  // the direct estimator has no denominator; its transform is constant
  // beyond the data, so the estimate plateaus at the value at the maximum
  CHECK(direct_hazard(s, ep, 0.5, 5.0) ==
        doctest::Approx(direct_hazard(s, ep, 0.5, 0.3)));
  CHECK(direct_hazard(s, ep, 0.5, 5.0) >= 0.0);
}

TEST_CASE("direct estimator equals brute force") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 10.0);
  const Kernel& ep = Kernel::by_name("epanechnikov");
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + static_cast<int>(rng() % 199);
    std::vector<double> xs(n);
    for (auto& x : xs) x = U(rng);
    SortedSample s(xs);
    const double x0 = U(rng);
    const double h = 0.05 + 0.4 * U(rng) / 10.0;
    const double fast = direct_hazard(s, ep, h, x0);
    const double slow = direct_brute(xs, ep, h, x0);
    CHECK(std::abs(fast - slow) <= 1e-12 * std::max(1.0, std::abs(slow)));
  }
}

TEST_CASE("density ratio equals brute force and handles the trivial case") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(0.0, 5.0);
  const Kernel& ep = Kernel::by_name("epanechnikov");
  SortedSample one({1.5});
  CHECK(direct_density_ratio(one, one, ep, 0.25, 1.5) ==
        doctest::Approx(0.75 / 0.25));
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + static_cast<int>(rng() % 99);
    const int m = 2 + static_cast<int>(rng() % 99);
    std::vector<double> xs(n), ys(m);
    for (auto& x : xs) x = U(rng);
    for (auto& y : ys) y = U(rng);
    SortedSample sx(xs), sy(ys);
    const double x0 = U(rng);
    const double h = 0.1 + 0.3 * U(rng) / 5.0;
    const double fast = direct_density_ratio(sx, sy, ep, h, x0);
    const double slow = ratio_brute(xs, ys, ep, h, x0);
    CHECK(std::abs(fast - slow) <= 1e-12 * std::max(1.0, std::abs(slow)));
  }
}

TEST_CASE("terrell-scott combination rule") {
  TerrellScottStats stats;
  CHECK(ts_combine(2.0, 2.0, &stats) == doctest::Approx(2.0));
  CHECK(ts_combine(0.0, 1.0, &stats) == 0.0);
  CHECK(stats.pilot_fallbacks == 0);
  CHECK(ts_combine(0.5, 0.0, &stats) == 0.5);  // degenerate pilot fallback
  CHECK(stats.pilot_fallbacks == 1);
  CHECK(ts_combine(2.0, 1.0, nullptr) ==
        doctest::Approx(std::pow(2.0, 4.0 / 3.0)));
}

TEST_CASE("terrell-scott pairs bandwidths h and 2h") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(0.0, 4.0);
  const Kernel& ep = Kernel::by_name("epanechnikov");
  std::vector<double> xs(200);
  for (auto& x : xs) x = U(rng);
  SortedSample s(xs);
  const double h = 0.3, x0 = 2.0;
  const double narrow = direct_hazard(s, ep, h, x0);
  const double wide = direct_hazard(s, ep, 2 * h, x0);
  CHECK(terrell_scott_hazard(s, ep, h, x0) ==
        doctest::Approx(std::pow(narrow, 4.0 / 3.0) *
                        std::pow(wide, -1.0 / 3.0)));
}

TEST_CASE("location invariance is exact under exact shifts") {
  std::mt19937_64 rng(10);
  const Kernel& ep = Kernel::by_name("epanechnikov");
  for (int t = 0; t < 50; ++t) {
    const int n = 3 + static_cast<int>(rng() % 60);
    std::vector<double> xs(n), ys(n);
    const double shift = 37.0;
    for (int i = 0; i < n; ++i) {
      xs[i] = grid_value(rng, 8.0);
      ys[i] = xs[i] + shift;
    }
    SortedSample s1(xs), s2(ys);
    const double x0 = grid_value(rng, 8.0);
    const double h = 0.5;
    CHECK(direct_hazard(s1, ep, h, x0) == direct_hazard(s2, ep, h, x0 + shift));
    bool d1 = false, d2 = false;
    double n1 = 0, n2 = 0;
    try {
      n1 = naive_hazard(s1, ep, h, x0);
    } catch (const DenominatorDegenerateError&) {
      d1 = true;
    }
    try {
      n2 = naive_hazard(s2, ep, h, x0 + shift);
    } catch (const DenominatorDegenerateError&) {
      d2 = true;
    }
    CHECK(d1 == d2);
    if (!d1) CHECK(n1 == n2);
  }
}

TEST_CASE("scale equivariance") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 6.0);
  const Kernel& ep = Kernel::by_name("epanechnikov");
  for (int t = 0; t < 50; ++t) {
    const int n = 3 + static_cast<int>(rng() % 60);
    const double c = 0.2 + U(rng);
    std::vector<double> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
      xs[i] = U(rng);
      ys[i] = c * xs[i];
    }
    SortedSample s1(xs), s2(ys);
    const double x0 = U(rng), h = 0.4;
    const double a = direct_hazard(s1, ep, h, x0);
    const double b = c * direct_hazard(s2, ep, c * h, c * x0);
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("nonnegativity under fuzzing") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> U(-3.0, 9.0);
  for (int t = 0; t < 200; ++t) {
    const auto& k = Kernel::by_name(
        Kernel::builtin_names()[rng() % 4]);
    const int n = 1 + static_cast<int>(rng() % 40);
    std::vector<double> xs(n);
    for (auto& x : xs) x = U(rng);
    SortedSample s(xs);
    const double x0 = U(rng);
    const double h = 0.01 + 2.0 * (rng() % 1000) / 1000.0;
    CHECK(direct_hazard(s, k, h, x0) >= 0.0);
    CHECK(terrell_scott_hazard(s, k, h, x0) >= 0.0);
  }
}

TEST_CASE("direct estimate is continuous in the evaluation point") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(0.0, 4.0);
  const Kernel& ep = Kernel::by_name("epanechnikov");
  std::vector<double> xs(300);
  for (auto& x : xs) x = U(rng);
  SortedSample s(xs);
  const double h = 0.25;
  const double step = 1e-4;
  // Lipschitz bound: |dH/dx0| <= sup|K'| / h^2 (the transform has slope <= 1)
  const double bound = ep.lipschitz_bound() / (h * h) * step * 1.0001 + 1e-12;
  double prev = direct_hazard(s, ep, h, 0.0);
  for (double x = step; x <= 4.0; x += step) {
    const double cur = direct_hazard(s, ep, h, x);
    CHECK(std::abs(cur - prev) <= bound);
    prev = cur;
  }
}

TEST_CASE("plug-in bandwidth rule") {
  std::mt19937_64 rng(14);
  std::exponential_distribution<double> E(1.0);
  std::vector<double> xs(400);
  for (auto& x : xs) x = E(rng);
  SortedSample s(xs);
  const Kernel& ep = Kernel::by_name("epanechnikov");
  const double x0 = 0.7;
  const auto direct = plugin_bandwidth(s, ep, EstimatorKind::direct, x0);
  CHECK(direct.h > 0.0);
  CHECK(direct.pilot ==
        doctest::Approx(1.06 * s.sd() * std::pow(400.0, -0.2)));
  // deterministic
  CHECK(plugin_bandwidth(s, ep, EstimatorKind::direct, x0).h == direct.h);
  // the bias-reduced rule is the direct rule to the power 5/9
  const auto naive = plugin_bandwidth(s, ep, EstimatorKind::naive, x0);
  CHECK(naive.h > 0.0);
  const auto ts = plugin_bandwidth(s, ep, EstimatorKind::terrell_scott, x0);
  if (!direct.degenerate_fallback)
    CHECK(ts.h == doctest::Approx(std::pow(direct.h, 5.0 / 9.0)));
  // constant data has no spread for the pilot rule
  SortedSample flat({1.0, 1.0, 1.0});
  CHECK_THROWS_AS(plugin_bandwidth(flat, ep, EstimatorKind::direct, 1.0),
                  std::invalid_argument);
}

TEST_CASE("estimator kind names and spec validation") {
  CHECK(estimator_kind_from_name("naive") == EstimatorKind::naive);
  CHECK(estimator_kind_from_name("direct") == EstimatorKind::direct);
  CHECK(estimator_kind_from_name("terrell-scott") ==
        EstimatorKind::terrell_scott);
  CHECK(to_string(EstimatorKind::terrell_scott) == "terrell-scott");
  CHECK_THROWS_AS(estimator_kind_from_name("bogus"), std::invalid_argument);

  EstimatorSpec spec;
  spec.bandwidth = -1.0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.bandwidth = 0.5;
  spec.kernel = "nope";
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.kernel = "biweight";
  CHECK_NOTHROW(spec.validate());
}

TEST_CASE("bandwidth must be positive") {
  SortedSample s({1.0, 2.0});
  const Kernel& ep = Kernel::by_name("epanechnikov");
  CHECK_THROWS_AS(direct_hazard(s, ep, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(naive_hazard(s, ep, -1.0, 1.0), std::invalid_argument);
}
