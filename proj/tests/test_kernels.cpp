#include <cmath>
#include <thread>
#include <vector>

#include "doctest.h"
#include "hazkde/kernels.hpp"

using namespace hazkde;

TEST_CASE("epanechnikov point values") {
  const Kernel& ep = Kernel::by_name("epanechnikov");
  CHECK(ep(0.0) == doctest::Approx(0.75));
  CHECK(ep(2.0) == 0.0);
  CHECK(ep(-2.0) == 0.0);
  CHECK(ep(0.5) == doctest::Approx(0.5625));
  CHECK(ep.cdf(0.0) == doctest::Approx(0.5));
  CHECK(ep.cdf(1.0) == 1.0);
  CHECK(ep.cdf(-1.0) == 0.0);
  CHECK(ep.cdf(0.5) == doctest::Approx(0.84375));
}

TEST_CASE("kernel axioms for every built-in") {
  for (const auto& name : Kernel::builtin_names()) {
    CAPTURE(name);
    const Kernel& k = Kernel::by_name(name);
    const double d = k.support_halfwidth();
    // unit mass, symmetry, nonnegativity, vanishing odd moments
    CHECK(k.moment(1, 0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(k.moment(1, 1)) < 1e-10);
    CHECK(std::abs(k.moment(1, 3)) < 1e-10);
    for (double u = -d; u <= d; u += d / 16) {
      CHECK(k(u) == k(-u));
      CHECK(k(u) >= 0.0);
    }
    CHECK(k(d * 1.0001) == 0.0);
    // W nondecreasing with the right limits
    CHECK(k.cdf(-d) == 0.0);
    CHECK(k.cdf(d) == 1.0);
    double prev = -1.0;
    for (double u = -d - 0.5; u <= d + 0.5; u += d / 32) {
      CHECK(k.cdf(u) >= prev);
      prev = k.cdf(u);
    }
  }
}

TEST_CASE("dW/du recovers K away from support edges") {
  const double delta = 1e-6;
  for (const auto& name : Kernel::builtin_names()) {
    const Kernel& k = Kernel::by_name(name);
    const double d = k.support_halfwidth();
    for (double u = -0.9 * d; u <= 0.9 * d; u += d / 8) {
      const double fd = (k.cdf(u + delta) - k.cdf(u - delta)) / (2 * delta);
      if (k(u) > 1e-3)
        CHECK(fd == doctest::Approx(k(u)).epsilon(1e-6));
    }
  }
}

TEST_CASE("quadrature moments match closed forms") {
  struct Expect {
    const char* name;
    double a12, a20, a14;
  };
  const Expect table[] = {
      {"epanechnikov", 1.0 / 5.0, 3.0 / 5.0, 3.0 / 35.0},
      {"uniform", 1.0 / 3.0, 1.0 / 2.0, 1.0 / 5.0},
      {"biweight", 1.0 / 7.0, 5.0 / 7.0, 1.0 / 21.0},
      {"triweight", 1.0 / 9.0, 350.0 / 429.0, 1.0 / 33.0},
  };
  for (const auto& e : table) {
    CAPTURE(e.name);
    const auto mom = kernel_moments(Kernel::by_name(e.name));
    CHECK(mom.a12 == doctest::Approx(e.a12).epsilon(1e-10));
    CHECK(mom.a20 == doctest::Approx(e.a20).epsilon(1e-10));
    CHECK(mom.a14 == doctest::Approx(e.a14).epsilon(1e-10));
  }
}

TEST_CASE("published table constants") {
  const auto mom = published_table_moments();
  CHECK(mom.a12 == 0.2);
  CHECK(mom.a20 == 0.3);  // the literal pair, not the quadrature 3/5
}

TEST_CASE("moment cache is race free") {
  const Kernel& k = Kernel::by_name("triweight");
  std::vector<double> results(8);
  std::vector<std::thread> pool;
  for (int t = 0; t < 8; ++t)
    pool.emplace_back([&, t] { results[t] = k.moment(2, 2 + t % 3); });
  for (auto& th : pool) th.join();
  for (int t = 0; t < 8; ++t)
    CHECK(results[t] == k.moment(2, 2 + t % 3));
}

TEST_CASE("unknown kernel name") {
  CHECK_THROWS_AS(Kernel::by_name("gaussian"), std::invalid_argument);
  CHECK_THROWS_AS(Kernel::by_name(""), std::invalid_argument);
}
