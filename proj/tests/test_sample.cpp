#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "hazkde/sample.hpp"

using namespace hazkde;

TEST_CASE("integrated ecdf on a tiny sample") {
  SortedSample s({3.0, 1.0, 2.0});  // sorts on construction
  CHECK(s.integrated_ecdf(0.0) == 0.0);
  CHECK(s.integrated_ecdf(2.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(s.integrated_ecdf(10.0) == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(s.expected_min(0.0) == 0.0);
  CHECK(s.expected_min(2.0) == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
  CHECK(s.ecdf(2.0) == doctest::Approx(2.0 / 3.0));
  CHECK(s.ecdf(0.5) == 0.0);
}

TEST_CASE("expected_min is nondecreasing") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-5.0, 5.0);
  std::vector<double> xs(257);
  for (auto& x : xs) x = U(rng);
  SortedSample s(xs);
  double prev = s.expected_min(-10.0);
  for (double y = -10.0; y <= 10.0; y += 0.05) {
    const double cur = s.expected_min(y);
    // beyond the data the transform is flat at the mean; allow rounding
    const double slack = 8 * std::numeric_limits<double>::epsilon() *
                         std::max(1.0, std::abs(prev));
    CHECK(cur >= prev - slack);
    prev = cur;
  }
  // transform values at the data points agree with pointwise evaluation
  const auto& em = s.expected_min_at_data();
  for (std::size_t i = 0; i < s.size(); i += 16)
    CHECK(em[i] == s.expected_min(s.values()[i]));
}

TEST_CASE("ties use count-le semantics") {
  SortedSample s({1.0, 1.0, 2.0});
  CHECK(s.count_le(1.0) == 2);
  CHECK(s.integrated_ecdf(1.0) == doctest::Approx(0.0));
  CHECK(s.integrated_ecdf(2.0) == doctest::Approx(2.0 / 3.0));
  const auto& em = s.expected_min_at_data();
  CHECK(em[0] == em[1]);  // duplicates share the transform value
}

TEST_CASE("prefix sums are consistent") {
  SortedSample s({0.5, 0.25, 4.0, 2.0});
  const auto& v = s.values();
  double run = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) run += v[i];
  CHECK(s.mean() == doctest::Approx(run / 4.0));
}

TEST_CASE("constructor rejects bad input") {
  CHECK_THROWS_AS(SortedSample({}), std::invalid_argument);
  CHECK_THROWS_AS(SortedSample({1.0, std::nan("")}), std::invalid_argument);
  CHECK_THROWS_AS(SortedSample({1.0, 1.0 / 0.0}), std::invalid_argument);
}
