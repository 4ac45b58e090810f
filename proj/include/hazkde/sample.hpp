#pragma once

#include <cstddef>
#include <vector>

namespace hazkde {

// An immutable sorted sample with prefix sums.  Supports O(log n)
// evaluation of the integrated empirical CDF
//
//   eta(y) = int_{-inf}^y F_n(u) du = n^-1 sum 1{X_i <= y} (y - X_i)
//
// and of the increasing transform expected_min(y) = y - eta(y), which is
// the sample mean of min(X_i, y).  Duplicate observations are allowed;
// counting uses "X_i <= y" semantics so eta is well defined with ties.
class SortedSample {
 public:
  // Sorts a copy of the observations; throws std::invalid_argument when
  // empty or when any value is not finite.
  explicit SortedSample(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  double min() const { return values_.front(); }
  double max() const { return values_.back(); }
  double mean() const { return mean_; }
  double sd() const { return sd_; }

  // number of observations <= y
  std::size_t count_le(double y) const;

  // F_n(y)
  double ecdf(double y) const;

  // eta(y), the integral of the empirical CDF up to y
  double integrated_ecdf(double y) const;

  // y - eta(y); nondecreasing in y with slope 1 - F_n >= 0
  double expected_min(double y) const;

  // expected_min evaluated at each sorted observation (nondecreasing)
  const std::vector<double>& expected_min_at_data() const { return emin_; }

  // eta evaluated at each sorted observation
  const std::vector<double>& integrated_ecdf_at_data() const { return eta_; }

 private:
  std::vector<double> values_;
  std::vector<double> prefix_;  // prefix_[c] = sum of first c values
  std::vector<double> eta_;
  std::vector<double> emin_;
  double mean_ = 0.0;
  double sd_ = 0.0;
};

}  // namespace hazkde
