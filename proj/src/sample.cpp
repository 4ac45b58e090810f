#include "hazkde/sample.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hazkde {

SortedSample::SortedSample(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty())
    throw std::invalid_argument("SortedSample: no observations");
  for (double v : values_)
    if (!std::isfinite(v))
      throw std::invalid_argument("SortedSample: non-finite observation");
  std::sort(values_.begin(), values_.end());

  const std::size_t n = values_.size();
  prefix_.resize(n + 1);
  prefix_[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) prefix_[i + 1] = prefix_[i] + values_[i];
  mean_ = prefix_[n] / static_cast<double>(n);

  double ss = 0.0;
  for (double v : values_) {
    const double d = v - mean_;
    ss += d * d;
  }
  sd_ = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;

  eta_.resize(n);
  emin_.resize(n);
  for (std::size_t i = 0; i < n;) {
    // count of X_j <= X_i includes the whole tie block
    std::size_t c = i + 1;
    while (c < n && values_[c] == values_[i]) ++c;
    const double e =
        (static_cast<double>(c) * values_[i] - prefix_[c]) / static_cast<double>(n);
    for (std::size_t k = i; k < c; ++k) {
      eta_[k] = e;
      emin_[k] = values_[i] - e;
    }
    i = c;
  }
}

std::size_t SortedSample::count_le(double y) const {
  return static_cast<std::size_t>(
      std::upper_bound(values_.begin(), values_.end(), y) - values_.begin());
}

double SortedSample::ecdf(double y) const {
  return static_cast<double>(count_le(y)) / static_cast<double>(size());
}

double SortedSample::integrated_ecdf(double y) const {
  const std::size_t c = count_le(y);
  if (c == 0) return 0.0;
  return (static_cast<double>(c) * y - prefix_[c]) / static_cast<double>(size());
}

double SortedSample::expected_min(double y) const {
  return y - integrated_ecdf(y);
}

}  // namespace hazkde
