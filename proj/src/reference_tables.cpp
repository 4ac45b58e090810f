#include "hazkde/reference_tables.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hazkde/asymptotics.hpp"
#include "hazkde/montecarlo.hpp"

namespace hazkde::tables {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::array<double, 8> kEpsilons{0.05, 0.1, 0.25, 0.5,
                                      0.75, 0.9, 0.95, 0.975};

struct Triplet {
  double bias_sq, variance, amse;
};

// ---- published values -------------------------------------------------

// table 1, indexed [shape: 1/2, 10][estimator: direct, naive][epsilon]
const Triplet kTable1Ref[2][2][8] = {
    {{{7.22e-2, 4.01e-2, 0.112},
      {8.24e-5, 2.11e-2, 2.11e-2},
      {1.33e-8, 9.52e-3, 9.52e-3},
      {2.36e-11, 5.65e-3, 5.65e-3},
      {5.35e-13, 4.29e-3, 4.29e-3},
      {1.69e-15, 3.76e-3, 3.76e-3},
      {1.01e-12, 3.58e-3, 3.58e-3},
      {1.47e-11, 3.46e-3, 3.46e-3}},
     {{6.53e-2, 4.22e-2, 0.107},
      {6.72e-5, 2.33e-2, 2.34e-2},
      {7.74e-9, 1.27e-2, 1.27e-2},
      {6.83e-12, 1.13e-2, 1.13e-2},
      {6.00e-14, 1.72e-2, 1.72e-2},
      {2.93e-15, 3.76e-2, 3.76e-2},
      {6.93e-16, 7.16e-2, 7.16e-2},
      {2.33e-16, 0.139, 0.139}}},
    {{{2.49e-18, 1.56e-4, 1.56e-4},
      {2.16e-18, 2.55e-4, 2.55e-4},
      {2.61e-18, 4.77e-4, 4.77e-4},
      {1.37e-17, 7.72e-4, 7.72e-4},
      {2.84e-16, 1.07e-3, 1.07e-3},
      {1.19e-14, 1.32e-3, 1.32e-3},
      {1.84e-13, 1.45e-3, 1.45e-3},
      {2.75e-12, 1.56e-3, 1.56e-3}},
     {{7.16e-19, 1.64e-4, 1.64e-4},
      {1.73e-21, 2.83e-4, 2.83e-4},
      {2.40e-18, 6.36e-4, 6.36e-4},
      {7.91e-18, 1.54e-3, 1.54e-3},
      {1.05e-17, 4.28e-3, 4.28e-3},
      {9.83e-18, 1.32e-2, 1.32e-2},
      {8.70e-18, 2.90e-2, 2.90e-2},
      {7.58e-18, 6.24e-2, 6.24e-2}}}};

// tables 2-4, indexed [row][estimator][epsilon]
const double kTable2Ref[2][2][8] = {
    {{7.44e-2, 1.14e-2, 1.06e-3, 1.97e-4, 7.40e-5, 2.11e-5, 7.26e-5, 1.21e-4},
     {7.60e-2, 1.19e-2, 1.20e-3, 2.67e-4, 1.45e-4, 1.48e-4, 1.86e-4, 2.54e-4}},
    {{4.48e-7, 6.45e-7, 1.11e-6, 2.26e-6, 5.39e-6, 1.34e-5, 2.51e-5, 4.57e-5},
     {3.64e-7, 1.68e-7, 1.37e-6, 3.53e-6, 8.46e-6, 2.05e-5, 3.76e-5, 6.75e-5}}};

const double kTable3Ref[2][2][8] = {
    {{4.11e-2, 5.68e-3, 3.85e-4, 4.25e-5, 9.22e-6, 3.31e-6, 3.59e-7, 2.67e-6},
     {4.20e-2, 5.93e-3, 4.30e-4, 5.50e-5, 1.53e-5, 8.61e-6, 7.68e-6, 7.90e-6}},
    {{1.20e-4, 2.65e-4, 9.00e-4, 3.40e-3, 1.38e-2, 5.49e-2, 0.135, 0.309},
     {1.11e-4, 2.23e-4, 4.79e-4, 2.34e-3, 1.33e-2, 5.96e-2, 0.153, 0.360}}};

const double kTable4Ref[3][2][8] = {
    {{7.61e-3, 1.20e-3, 1.42e-4, 1.46e-4, 2.35e-3, 0.167, 4.57, 127.0},
     {7.77e-3, 1.25e-3, 1.54e-4, 1.11e-4, 1.61e-3, 0.116, 3.17, 87.9}},
    {{1.55e-4, 2.70e-4, 5.35e-4, 1.15e-3, 3.09e-3, 1.01e-2, 2.41e-2, 5.70e-2},
     {1.83e-4, 2.18e-4, 2.91e-4, 5.67e-4, 1.84e-3, 7.22e-3, 1.88e-2, 4.72e-2}},
    {{7.18e-5, 1.38e-4, 4.20e-4, 1.72e-3, 9.66e-3, 6.68e-2, 0.261, 0.981},
     {6.57e-5, 1.16e-4, 2.84e-4, 6.73e-4, 4.23e-3, 4.01e-2, 0.171, 0.676}}};

const std::array<double, 5> kSigmas{0.25, 1.0, 4.0, 16.0, 64.0};
struct Shape5 {
  double r, s;
  bool sign_only;  // near-flat rows checked for a positive rate only
};
const std::array<Shape5, 5> kTable5Shapes{{{0.5, 0.5, true},
                                           {1.0, 1.0, true},
                                           {3.0, 3.0, false},
                                           {2.0, 5.0, false},
                                           {5.0, 2.0, false}}};
const double kTable5Ref[5][5] = {{0.301, 1.25, 1.52, 1.64, 1.78},
                                 {0.593, 1.05, 1.24, 1.38, 1.30},
                                 {6.74, 8.35, 8.27, 8.28, 8.35},
                                 {12.9, 13.9, 15.0, 14.8, 15.0},
                                 {3.96, 5.10, 5.11, 5.05, 5.05}};

// ---- generation --------------------------------------------------------

// least AMSE in the tabulated normalization (the n^(-4/5) factor dropped,
// i.e. evaluated with the unit-n optimal bandwidth)
double least_amse_normalized(EstimatorKind kind, const ParametricModel& model,
                             double x0, const KernelMoments& mom,
                             bool* degenerate) {
  const double b = kind == EstimatorKind::naive
                       ? naive_bias_coeff(model, x0, mom)
                       : direct_bias_coeff(model, x0, mom);
  const double v = kind == EstimatorKind::naive
                       ? naive_variance_coeff(model, x0, mom)
                       : direct_variance_coeff(model, x0, mom);
  const double b2 = b * b;
  if (b2 < 1e-300) {
    *degenerate = true;
    return kNaN;
  }
  *degenerate = false;
  const double h = std::pow(v / (4.0 * b2), 0.2);
  return h * h * h * h * b2 + v / h;
}

std::vector<LeastAmseRow> least_amse_table(
    const std::string& family,
    const std::vector<std::pair<double, double>>& shapes,
    const std::vector<ParametricModel>& models) {
  const KernelMoments mom = published_table_moments();
  std::vector<LeastAmseRow> rows;
  for (std::size_t s = 0; s < models.size(); ++s) {
    for (const char* est : {"direct", "naive"}) {
      const EstimatorKind kind = estimator_kind_from_name(est);
      for (double eps : kEpsilons) {
        const double x0 = models[s].quantile(eps);
        LeastAmseRow row;
        row.family = family;
        row.shape1 = shapes[s].first;
        row.shape2 = shapes[s].second;
        row.epsilon = eps;
        row.estimator = est;
        row.amse =
            least_amse_normalized(kind, models[s], x0, mom, &row.degenerate);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::string fmt_shape(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void check_entry(ComparisonReport& rep, const std::string& table,
                 const std::string& label, double computed, double reference,
                 double tol) {
  ++rep.checked;
  const double rel = std::abs(computed - reference) / std::abs(reference);
  if (std::isfinite(rel) && rel <= tol) {
    ++rep.matched;
  } else {
    rep.discrepancies.push_back({table, label, computed, reference, rel, tol});
  }
}

}  // namespace

std::vector<Table1Row> compute_table1() {
  const KernelMoments mom = published_table_moments();
  std::vector<Table1Row> rows;
  for (double p : {0.5, 10.0}) {
    const ParametricModel model = ParametricModel::gamma(p, 100.0);
    for (const char* est : {"direct", "naive"}) {
      const bool naive = std::string(est) == "naive";
      for (double eps : kEpsilons) {
        const double x0 = model.quantile(eps);
        const double b = naive ? naive_bias_coeff(model, x0, mom)
                               : direct_bias_coeff(model, x0, mom);
        const double v = naive ? naive_variance_coeff(model, x0, mom)
                               : direct_variance_coeff(model, x0, mom);
        Table1Row row;
        row.shape = p;
        row.epsilon = eps;
        row.estimator = est;
        row.bias_sq = b * b;
        row.variance = v;
        row.amse = row.bias_sq + row.variance;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::vector<LeastAmseRow> compute_table2() {
  return least_amse_table("gamma", {{0.5, 0.0}, {10.0, 0.0}},
                          {ParametricModel::gamma(0.5, 100.0),
                           ParametricModel::gamma(10.0, 100.0)});
}

std::vector<LeastAmseRow> compute_table3() {
  return least_amse_table("weibull", {{0.5, 0.0}, {10.0, 0.0}},
                          {ParametricModel::weibull(0.5, 100.0),
                           ParametricModel::weibull(10.0, 100.0)});
}

std::vector<LeastAmseRow> compute_table4() {
  return least_amse_table("beta", {{0.5, 0.5}, {2.0, 5.0}, {5.0, 2.0}},
                          {ParametricModel::scaled_beta(0.5, 0.5, 100.0),
                           ParametricModel::scaled_beta(2.0, 5.0, 100.0),
                           ParametricModel::scaled_beta(5.0, 2.0, 100.0)});
}

Table5Row compute_table5_cell(double r, double s, double sigma,
                              std::size_t replications,
                              std::uint64_t master_seed, unsigned threads) {
  const ParametricModel model = ParametricModel::scaled_beta(r, s, sigma);
  const KernelMoments mom =
      kernel_moments(Kernel::by_name("epanechnikov"));
  const auto h_direct = mise_optimal_bandwidth(
      EstimatorKind::direct, model, 100, 0.05, 0.95, 101, mom);
  if (!h_direct)
    throw std::runtime_error("table5: MISE-optimal bandwidth degenerate");
  const double h_reduced = ts_rule_bandwidth(*h_direct);

  SimulationSpec spec{model};
  spec.n = 100;
  spec.replications = replications;
  spec.estimators = {{EstimatorKind::direct, "epanechnikov", *h_direct},
                     {EstimatorKind::terrell_scott, "epanechnikov", h_reduced}};
  spec.eps_lo = 0.05;
  spec.eps_hi = 0.95;
  spec.grid = 101;
  spec.master_seed = master_seed;
  spec.threads = threads;
  const SimulationResult res = simulate_mise(spec);
  if (!res.improvement_rate)
    throw std::runtime_error("table5: improvement rate undefined");
  return {r, s, sigma, *res.improvement_rate, *h_direct, h_reduced};
}

std::vector<Table5Row> compute_table5(std::size_t replications,
                                      std::uint64_t master_seed,
                                      unsigned threads) {
  std::vector<Table5Row> rows;
  std::uint64_t cell = 0;
  for (const auto& shape : kTable5Shapes) {
    for (double sigma : kSigmas) {
      const std::uint64_t cell_seed =
          derive_replication_seed(master_seed, 0x7AB1E5ULL + cell++);
      rows.push_back(compute_table5_cell(shape.r, shape.s, sigma, replications,
                                         cell_seed, threads));
    }
  }
  return rows;
}

ComparisonReport compare_table1(const std::vector<Table1Row>& rows) {
  ComparisonReport rep;
  for (const auto& row : rows) {
    const int si = row.shape == 0.5 ? 0 : 1;
    const int ei = row.estimator == "direct" ? 0 : 1;
    int qi = -1;
    for (std::size_t i = 0; i < kEpsilons.size(); ++i)
      if (kEpsilons[i] == row.epsilon) qi = static_cast<int>(i);
    if (qi < 0) continue;
    const Triplet& ref = kTable1Ref[si][ei][qi];
    const std::string base = "gamma p=" + fmt_shape(row.shape) +
                             " eps=" + fmt_shape(row.epsilon) + " " +
                             row.estimator;
    check_entry(rep, "table1", base + " Bias2", row.bias_sq, ref.bias_sq, 0.01);
    check_entry(rep, "table1", base + " Var", row.variance, ref.variance, 0.01);
    check_entry(rep, "table1", base + " AMSE", row.amse, ref.amse, 0.01);
  }
  return rep;
}

ComparisonReport compare_least_amse(const std::string& table,
                                    const std::vector<LeastAmseRow>& rows) {
  ComparisonReport rep;
  for (const auto& row : rows) {
    if (row.degenerate) continue;  // excluded by construction
    int si = -1;
    const double (*ref)[2][8] = nullptr;
    if (table == "table2") {
      ref = kTable2Ref;
      si = row.shape1 == 0.5 ? 0 : 1;
    } else if (table == "table3") {
      ref = kTable3Ref;
      si = row.shape1 == 0.5 ? 0 : 1;
    } else if (table == "table4") {
      ref = kTable4Ref;
      if (row.shape1 == 0.5)
        si = 0;
      else if (row.shape1 == 2.0)
        si = 1;
      else
        si = 2;
    } else {
      throw std::invalid_argument("compare_least_amse: unknown table " + table);
    }
    const int ei = row.estimator == "direct" ? 0 : 1;
    int qi = -1;
    for (std::size_t i = 0; i < kEpsilons.size(); ++i)
      if (kEpsilons[i] == row.epsilon) qi = static_cast<int>(i);
    if (qi < 0) continue;
    std::string label = row.family + " ";
    label += row.family == "beta"
                 ? "r=" + fmt_shape(row.shape1) + ",s=" + fmt_shape(row.shape2)
                 : "shape=" + fmt_shape(row.shape1);
    label += " eps=" + fmt_shape(row.epsilon) + " " + row.estimator + " AMSE";
    check_entry(rep, table, label, row.amse, ref[si][ei][qi], 0.02);
  }
  return rep;
}

ComparisonReport compare_table5(const std::vector<Table5Row>& rows) {
  ComparisonReport rep;
  for (const auto& row : rows) {
    int si = -1;
    bool sign_only = false;
    for (std::size_t i = 0; i < kTable5Shapes.size(); ++i)
      if (kTable5Shapes[i].r == row.r && kTable5Shapes[i].s == row.s) {
        si = static_cast<int>(i);
        sign_only = kTable5Shapes[i].sign_only;
      }
    int ci = -1;
    for (std::size_t i = 0; i < kSigmas.size(); ++i)
      if (kSigmas[i] == row.sigma) ci = static_cast<int>(i);
    if (si < 0 || ci < 0) continue;
    const double ref = kTable5Ref[si][ci];
    const std::string label = "beta r=" + fmt_shape(row.r) +
                              ",s=" + fmt_shape(row.s) +
                              " sigma=" + fmt_shape(row.sigma) + " rate";
    ++rep.checked;
    const bool ok = sign_only ? row.rate_pct > 0.0
                              : std::abs(row.rate_pct - ref) <= 5.0;
    if (ok) {
      ++rep.matched;
    } else {
      rep.discrepancies.push_back({"table5", label, row.rate_pct, ref,
                                   std::abs(row.rate_pct - ref) /
                                       std::abs(ref),
                                   5.0});
    }
  }
  return rep;
}

double table5_reference(double r, double s, double sigma) {
  for (std::size_t i = 0; i < kTable5Shapes.size(); ++i)
    if (kTable5Shapes[i].r == r && kTable5Shapes[i].s == s)
      for (std::size_t j = 0; j < kSigmas.size(); ++j)
        if (kSigmas[j] == sigma) return kTable5Ref[i][j];
  throw std::invalid_argument("table5_reference: unknown cell");
}

}  // namespace hazkde::tables
