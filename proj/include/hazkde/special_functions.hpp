#pragma once

#include <cstddef>

namespace hazkde {

// Regularized lower incomplete gamma P(a, x) and its complement Q(a, x),
// a > 0, x >= 0.  Series expansion for x < a + 1, continued fraction
// otherwise; relative accuracy around 1e-14.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// log Beta(a, b)
double log_beta(double a, double b);

// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
double beta_inc(double a, double b, double x);

// Kolmogorov distribution tail Q_KS(lambda) = 2 sum_{j>=1} (-1)^{j-1}
// exp(-2 j^2 lambda^2); limits the distribution of sqrt(n) * D_n.
double kolmogorov_tail(double lambda);

// Two-sided Kolmogorov-Smirnov p-value for statistic d computed from n
// points, using the Stephens small-sample adjustment.
double ks_pvalue(double d, std::size_t n);

}  // namespace hazkde
