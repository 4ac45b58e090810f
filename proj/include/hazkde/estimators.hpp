#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "hazkde/kernels.hpp"
#include "hazkde/sample.hpp"

namespace hazkde {

enum class EstimatorKind { naive, direct, terrell_scott };

EstimatorKind estimator_kind_from_name(std::string_view name);
std::string to_string(EstimatorKind kind);

// Thrown by the ratio-form estimator when 1 - Fhat(x0) falls below the
// configured tolerance, i.e. the evaluation point sits beyond the data.
class DenominatorDegenerateError : public std::runtime_error {
 public:
  explicit DenominatorDegenerateError(const std::string& what)
      : std::runtime_error(what) {}
};

struct NaiveOptions {
  double denom_tol = 1e-12;
};

// Ratio estimator fhat(x0) / (1 - Fhat(x0)), both smoothed with the same
// bandwidth.  Throws DenominatorDegenerateError when the denominator is
// below options.denom_tol.
double naive_hazard(const SortedSample& s, const Kernel& k, double h,
                    double x0, const NaiveOptions& options = {});

// Single kernel sum over the transformed axis:
//   (n h)^-1 sum_j K((expected_min(X_j) - expected_min(x0)) / h).
// Nonnegative for nonnegative kernels; no denominator.
double direct_hazard(const SortedSample& s, const Kernel& k, double h,
                     double x0);

struct TerrellScottStats {
  std::uint64_t pilot_fallbacks = 0;
};

// Combination rule value_h^(4/3) * value_2h^(-1/3) with the degenerate
// fallback: a vanishing wide-bandwidth pilot returns the narrow estimate
// unchanged (counted in stats).
double ts_combine(double at_h, double at_2h, TerrellScottStats* stats = nullptr);

// Bias-reduced estimator: direct estimates at h and 2h combined with
// ts_combine.  The bandwidth pairing is fixed at ratio 2.
double terrell_scott_hazard(const SortedSample& s, const Kernel& k, double h,
                            double x0, TerrellScottStats* stats = nullptr);

// Density-ratio estimator smoothing on the ECDF scale of the denominator
// sample:  (n_x h)^-1 sum_j K((G_n(x0) - G_n(X_j)) / h)  with G_n the
// ECDF of `den` and X_j running over `num`.
double direct_density_ratio(const SortedSample& num, const SortedSample& den,
                            const Kernel& k, double h, double x0);

// Dispatch by estimator kind (terrell_scott pairs h with 2h internally).
double evaluate_hazard(EstimatorKind kind, const SortedSample& s,
                       const Kernel& k, double h, double x0,
                       TerrellScottStats* stats = nullptr,
                       const NaiveOptions& options = {});

struct PluginBandwidth {
  double h;
  double pilot;              // normal-reference pilot bandwidth used
  bool degenerate_fallback;  // true when the plugged bias term vanished
};

// Data-driven bandwidth: the closed-form optimal bandwidth with the
// unknown f, f', f'', F replaced by pilot kernel estimates.  The pilot
// uses the normal-reference rule 1.06 * sd * n^(-1/5); density derivatives
// come from derivative-of-kernel estimators.  When the plugged bias
// functional vanishes the pilot bandwidth itself is returned and flagged.
// For the terrell_scott kind the direct rule is raised to the power 5/9.
PluginBandwidth plugin_bandwidth(const SortedSample& s, const Kernel& k,
                                 EstimatorKind kind, double x0);

// Estimator selection as configured on the command line.
struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::direct;
  std::string kernel = "epanechnikov";
  std::optional<double> bandwidth;  // empty selects the plug-in rule

  void validate() const;  // fixed bandwidths must be positive
};

}  // namespace hazkde
