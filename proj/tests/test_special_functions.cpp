#include <cmath>
#include <initializer_list>
#include <stdexcept>

#include "doctest.h"
#include "hazkde/special_functions.hpp"

using namespace hazkde;

TEST_CASE("incomplete gamma against erf and complements") {
  // P(1/2, x) = erf(sqrt(x))
  for (double x : {0.01, 0.1, 0.5, 1.0, 3.0, 10.0}) {
    CHECK(gamma_p(0.5, x) ==
          doctest::Approx(std::erf(std::sqrt(x))).epsilon(1e-13));
    CHECK(gamma_p(2.5, x) + gamma_q(2.5, x) == doctest::Approx(1.0));
  }
  // P(1, x) = 1 - e^-x
  CHECK(gamma_p(1.0, 0.7) == doctest::Approx(1.0 - std::exp(-0.7)).epsilon(1e-14));
  CHECK(gamma_q(10.0, 0.0) == 1.0);
  CHECK(gamma_p(10.0, 0.0) == 0.0);
  CHECK_THROWS_AS(gamma_p(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gamma_p(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("incomplete beta basics") {
  // symmetry and the arcsine median
  CHECK(beta_inc(0.5, 0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-13));
  for (double x : {0.1, 0.3, 0.6, 0.9}) {
    CHECK(beta_inc(2.0, 5.0, x) + beta_inc(5.0, 2.0, 1.0 - x) ==
          doctest::Approx(1.0).epsilon(1e-13));
    // closed-form polynomial CDF of Beta(2,5)
    const double z = x;
    const double poly = 15 * z * z - 40 * z * z * z + 45 * std::pow(z, 4) -
                        24 * std::pow(z, 5) + 5 * std::pow(z, 6);
    CHECK(beta_inc(2.0, 5.0, x) == doctest::Approx(poly).epsilon(1e-12));
  }
  CHECK(beta_inc(3.0, 4.0, 0.0) == 0.0);
  CHECK(beta_inc(3.0, 4.0, 1.0) == 1.0);
  CHECK_THROWS_AS(beta_inc(0.0, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(beta_inc(1.0, 1.0, 1.5), std::invalid_argument);
}

TEST_CASE("kolmogorov tail") {
  CHECK(kolmogorov_tail(0.5) == doctest::Approx(0.9639).epsilon(1e-3));
  CHECK(kolmogorov_tail(2.0) < 1e-3);
  CHECK(kolmogorov_tail(0.0) == 1.0);
  // p-value decreases with the statistic
  CHECK(ks_pvalue(0.01, 1000) > ks_pvalue(0.05, 1000));
  CHECK(ks_pvalue(0.05, 1000) > ks_pvalue(0.10, 1000));
}
