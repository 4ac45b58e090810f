#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hazkde/asymptotics.hpp"
#include "hazkde/estimators.hpp"
#include "hazkde/kernels.hpp"
#include "hazkde/models.hpp"
#include "hazkde/montecarlo.hpp"
#include "hazkde/observations.hpp"
#include "hazkde/reference_tables.hpp"

namespace {

using nlohmann::json;
using namespace hazkde;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;

bool g_paper_format = false;

// shortest round-trip decimal; --paper-format switches to 3 significant
// figures (and the JSON stream carries the identically rounded value)
std::string fmt_double(double v) {
  char buf[40];
  if (g_paper_format) {
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
  }
  const auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

double render_value(double v) {
  if (!g_paper_format) return v;
  return std::strtod(fmt_double(v).c_str(), nullptr);
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw ParseError("cannot open output '" + path + "'", 0);
  return file;
}

struct CommonOpts {
  std::string model_spec;
  std::string kernel = "epanechnikov";
  std::string method = "direct";
  std::string format = "json";
  std::string output;
  bool paper_constants = false;
};

KernelMoments resolve_moments(const CommonOpts& c) {
  if (c.paper_constants) return published_table_moments();
  return kernel_moments(Kernel::by_name(c.kernel));
}

json point_record(const AmseReport& r) {
  json j;
  j["estimator"] = to_string(r.kind);
  j["x0"] = render_value(r.x0);
  j["n"] = r.n;
  j["h"] = render_value(r.h);
  j["bias_sq"] = render_value(r.bias_sq);
  j["variance"] = render_value(r.variance);
  j["amse"] = render_value(r.amse);
  if (r.optimal_h)
    j["optimal_h"] = render_value(*r.optimal_h);
  else
    j["optimal_h"] = "unbounded";
  return j;
}

void emit_record_csv(std::ostream& os, const json& j) {
  os << "estimator,x0,n,h,bias_sq,variance,amse,optimal_h\n";
  os << j["estimator"].get<std::string>() << ','
     << fmt_double(j["x0"].get<double>()) << ',' << j["n"].get<std::uint64_t>()
     << ',' << (j["h"].is_string() ? j["h"].get<std::string>()
                                   : fmt_double(j["h"].get<double>()))
     << ',' << fmt_double(j["bias_sq"].get<double>()) << ','
     << fmt_double(j["variance"].get<double>()) << ','
     << fmt_double(j["amse"].get<double>()) << ','
     << (j["optimal_h"].is_string() ? j["optimal_h"].get<std::string>()
                                    : fmt_double(j["optimal_h"].get<double>()))
     << '\n';
}

double resolve_x0(const ParametricModel& model, std::optional<double> x0,
                  std::optional<double> quantile) {
  if (x0) return *x0;
  if (quantile) return model.quantile(*quantile);
  throw CLI::ValidationError("either --x0 or --quantile is required");
}

// ---------------------------------------------------------------- estimate

int cmd_estimate(const CommonOpts& common, const std::string& data_path,
                 const std::optional<std::string>& column,
                 const std::string& bandwidth, std::size_t grid) {
  const auto values = read_observations(data_path, column);
  if (values.empty()) {
    std::cerr << "no observations\n";
    return kExitInput;
  }
  SortedSample sample(values);
  const Kernel& kernel = Kernel::by_name(common.kernel);
  const EstimatorKind kind = estimator_kind_from_name(common.method);

  double h = 0.0;
  json meta;
  if (bandwidth == "plugin") {
    // plug-in rule anchored at the sample median
    const auto pb =
        plugin_bandwidth(sample, kernel, kind,
                         sample.values()[sample.size() / 2]);
    h = pb.h;
    meta["bandwidth_rule"] = "plugin";
    meta["pilot_bandwidth"] = render_value(pb.pilot);
    if (pb.degenerate_fallback) meta["plugin_fallback"] = true;
  } else {
    std::size_t pos = 0;
    h = std::stod(bandwidth, &pos);
    if (pos != bandwidth.size() || !(h > 0.0))
      throw ParseError("--bandwidth must be a positive number or 'plugin'", 0);
    meta["bandwidth_rule"] = "fixed";
  }
  meta["bandwidth"] = render_value(h);
  meta["method"] = to_string(kind);
  meta["kernel"] = kernel.name();
  meta["n"] = sample.size();

  const double lo = sample.min() + h;
  const double hi = sample.max() - h;
  if (!(lo < hi)) {
    std::cerr << "estimation degenerate: grid [min+h, max-h] is empty\n";
    return kExitDegenerate;
  }
  std::vector<std::pair<double, double>> points;
  std::size_t degenerate = 0;
  for (std::size_t g = 0; g < grid; ++g) {
    const double x = lo + (hi - lo) * static_cast<double>(g) /
                              static_cast<double>(grid - 1);
    try {
      points.emplace_back(x, evaluate_hazard(kind, sample, kernel, h, x));
    } catch (const DenominatorDegenerateError&) {
      ++degenerate;
    }
  }
  meta["grid"] = grid;
  meta["degenerate_points"] = degenerate;

  std::ofstream file;
  std::ostream& os = open_output(file, common.output);
  if (common.format == "csv") {
    for (auto it = meta.begin(); it != meta.end(); ++it)
      os << "# " << it.key() << "=" << it.value().dump() << '\n';
    os << "x,hazard\n";
    for (const auto& [x, hz] : points)
      os << fmt_double(render_value(x)) << ',' << fmt_double(render_value(hz))
         << '\n';
  } else {
    json out;
    out["metadata"] = meta;
    json pts = json::array();
    for (const auto& [x, hz] : points)
      pts.push_back({{"x", render_value(x)}, {"hazard", render_value(hz)}});
    out["points"] = pts;
    os << out.dump(2) << '\n';
  }
  if (degenerate * 2 > grid) {
    std::cerr << "estimation degenerate over more than 50% of the grid\n";
    return kExitDegenerate;
  }
  return kExitOk;
}

// ------------------------------------------------------------ amse / bandwidth

int cmd_amse(const CommonOpts& common, std::optional<double> x0_opt,
             std::optional<double> quantile, std::uint64_t n,
             std::optional<double> h_opt, bool at_optimum) {
  const ParametricModel model = ParametricModel::parse(common.model_spec);
  const KernelMoments mom = resolve_moments(common);
  const EstimatorKind kind = estimator_kind_from_name(common.method);
  const double x0 = resolve_x0(model, x0_opt, quantile);

  json rec;
  if (at_optimum) {
    const auto opt = optimal_bandwidth(kind, model, x0, n, mom);
    if (!opt) {
      rec["estimator"] = to_string(kind);
      rec["x0"] = render_value(x0);
      rec["n"] = n;
      rec["h"] = "unbounded";
      rec["bias_sq"] = 0.0;
      rec["variance"] = nullptr;
      rec["amse"] = nullptr;
      rec["optimal_h"] = "unbounded";
      std::ofstream file;
      std::ostream& os = open_output(file, common.output);
      if (common.format == "csv") {
        os << "estimator,x0,n,h,bias_sq,variance,amse,optimal_h\n"
           << to_string(kind) << ',' << fmt_double(x0) << ',' << n
           << ",unbounded,0,,,unbounded\n";
      } else {
        os << rec.dump(2) << '\n';
      }
      return kExitOk;
    }
    rec = point_record(amse(kind, model, x0, n, *opt, mom));
  } else {
    const double h = h_opt ? *h_opt
                           : std::pow(static_cast<double>(n), -0.2);
    rec = point_record(amse(kind, model, x0, n, h, mom));
  }
  std::ofstream file;
  std::ostream& os = open_output(file, common.output);
  if (common.format == "csv")
    emit_record_csv(os, rec);
  else
    os << rec.dump(2) << '\n';
  return kExitOk;
}

// ------------------------------------------------------------------ simulate

// key=value config for the simulate subcommand; explicit flags win
void apply_simulate_config(
    const std::string& path, CLI::App* sim,
    const std::map<std::string, std::function<void(const std::string&)>>&
        setters) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config '" + path + "'", 0);
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ParseError("config: expected key=value", lineno);
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end())
      throw ParseError("config: unknown key '" + key + "'", lineno);
    if (sim->count("--" + key) > 0) continue;  // command line overrides
    try {
      it->second(value);
    } catch (const ParseError&) {
      throw;
    } catch (...) {
      throw ParseError("config: bad value for '" + key + "'", lineno);
    }
  }
}

double resolve_sim_bandwidth(const std::string& spec_str, EstimatorKind kind,
                             const ParametricModel& model, std::uint64_t n,
                             double eps_lo, double eps_hi, std::size_t grid,
                             const KernelMoments& mom) {
  if (spec_str == "mise") {
    const auto hd = mise_optimal_bandwidth(EstimatorKind::direct, model, n,
                                           eps_lo, eps_hi, grid, mom);
    if (!hd)
      throw std::runtime_error("--bandwidth mise: bias-degenerate model");
    if (kind == EstimatorKind::terrell_scott) return ts_rule_bandwidth(*hd);
    if (kind == EstimatorKind::direct) return *hd;
    const auto hn = mise_optimal_bandwidth(EstimatorKind::naive, model, n,
                                           eps_lo, eps_hi, grid, mom);
    if (!hn)
      throw std::runtime_error("--bandwidth mise: bias-degenerate model");
    return *hn;
  }
  std::size_t pos = 0;
  const double h = std::stod(spec_str, &pos);
  if (pos != spec_str.size() || !(h > 0.0))
    throw ParseError("--bandwidth must be a positive number or 'mise'", 0);
  return h;
}

int cmd_simulate(const CommonOpts& common, std::uint64_t n,
                 std::uint64_t replications, std::uint64_t seed,
                 std::size_t grid, std::pair<double, double> qrange,
                 const std::string& bandwidth,
                 const std::optional<std::string>& method2,
                 const std::string& bandwidth2, std::optional<double> x0,
                 const std::string& csv_path, unsigned threads) {
  const ParametricModel model = ParametricModel::parse(common.model_spec);
  const KernelMoments mom = resolve_moments(common);

  SimulationSpec spec{model};
  spec.n = n;
  spec.replications = replications;
  spec.master_seed = seed;
  spec.grid = grid;
  spec.eps_lo = qrange.first;
  spec.eps_hi = qrange.second;
  spec.threads = threads;

  const EstimatorKind kind1 = estimator_kind_from_name(common.method);
  spec.estimators.push_back(
      {kind1, common.kernel,
       resolve_sim_bandwidth(bandwidth, kind1, model, n, spec.eps_lo,
                             spec.eps_hi, grid, mom)});
  if (method2) {
    const EstimatorKind kind2 = estimator_kind_from_name(*method2);
    spec.estimators.push_back(
        {kind2, common.kernel,
         resolve_sim_bandwidth(bandwidth2, kind2, model, n, spec.eps_lo,
                               spec.eps_hi, grid, mom)});
  }

  json out;
  out["model"] = model.describe();
  out["n"] = n;
  out["replications"] = replications;
  out["seed"] = seed;

  if (x0) {
    const auto pts = simulate_mse(spec, *x0);
    json es = json::array();
    for (const auto& p : pts) {
      es.push_back({{"method", to_string(p.estimator.kind)},
                    {"kernel", p.estimator.kernel},
                    {"bandwidth", render_value(p.estimator.bandwidth)},
                    {"x", render_value(p.stats.x)},
                    {"bias", render_value(p.stats.bias)},
                    {"variance", render_value(p.stats.variance)},
                    {"mse", render_value(p.stats.mse)},
                    {"skipped", p.stats.skipped},
                    {"ts_fallbacks", p.ts_fallbacks}});
    }
    out["point"] = es;
    std::ofstream file;
    std::ostream& os = open_output(file, common.output);
    os << out.dump(2) << '\n';
    return kExitOk;
  }

  const SimulationResult res = simulate_mise(spec);
  json es = json::array();
  for (const auto& e : res.estimators) {
    json je;
    je["method"] = to_string(e.estimator.kind);
    je["kernel"] = e.estimator.kernel;
    je["bandwidth"] = render_value(e.estimator.bandwidth);
    je["mise"] = render_value(e.mise);
    je["skipped"] = e.skipped;
    je["ts_fallbacks"] = e.ts_fallbacks;
    je["valid"] = e.valid;
    json pts = json::array();
    for (const auto& p : e.points)
      pts.push_back({{"x", render_value(p.x)},
                     {"bias", render_value(p.bias)},
                     {"variance", render_value(p.variance)},
                     {"mse", render_value(p.mse)}});
    je["points"] = pts;
    es.push_back(je);
  }
  out["estimators"] = es;
  if (res.improvement_rate)
    out["improvement_rate"] = render_value(*res.improvement_rate);
  out["valid"] = res.valid;

  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) throw ParseError("cannot open '" + csv_path + "'", 0);
    const bool multi = res.estimators.size() > 1;
    csv << (multi ? "estimator,x,bias,variance,mse\n" : "x,bias,variance,mse\n");
    for (const auto& e : res.estimators)
      for (const auto& p : e.points) {
        if (multi) csv << to_string(e.estimator.kind) << ',';
        csv << fmt_double(render_value(p.x)) << ','
            << fmt_double(render_value(p.bias)) << ','
            << fmt_double(render_value(p.variance)) << ','
            << fmt_double(render_value(p.mse)) << '\n';
      }
  }
  std::ofstream file;
  std::ostream& os = open_output(file, common.output);
  os << out.dump(2) << '\n';
  return kExitOk;
}

// -------------------------------------------------------------------- tables

void write_csv_file(const std::filesystem::path& path,
                    const std::string& header,
                    const std::vector<std::string>& rows) {
  std::ofstream os(path);
  if (!os) throw ParseError("cannot open '" + path.string() + "'", 0);
  os << header << '\n';
  for (const auto& r : rows) os << r << '\n';
}

int cmd_tables(const std::string& out_dir, std::size_t replications,
               std::uint64_t seed, const std::vector<int>& which,
               unsigned threads) {
  namespace fs = std::filesystem;
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  auto wanted = [&](int t) {
    return which.empty() ||
           std::find(which.begin(), which.end(), t) != which.end();
  };

  std::vector<tables::Discrepancy> discrepancies;
  auto note = [&](const std::string& name, const tables::ComparisonReport& rep) {
    std::cout << name << ": " << rep.matched << "/" << rep.checked
              << " entries within tolerance\n";
    discrepancies.insert(discrepancies.end(), rep.discrepancies.begin(),
                         rep.discrepancies.end());
  };

  if (wanted(1)) {
    const auto rows = tables::compute_table1();
    std::vector<std::string> lines;
    for (const auto& r : rows)
      lines.push_back("gamma," + fmt_double(r.shape) + ',' +
                      fmt_double(r.epsilon) + ',' + r.estimator + ',' +
                      fmt_double(render_value(r.bias_sq)) + ',' +
                      fmt_double(render_value(r.variance)) + ',' +
                      fmt_double(render_value(r.amse)));
    write_csv_file(dir / "table1.csv",
                   "family,shape,epsilon,estimator,bias_sq,variance,amse",
                   lines);
    note("table1", tables::compare_table1(rows));
  }
  const auto least_amse_lines = [&](const std::vector<tables::LeastAmseRow>& rows) {
    std::vector<std::string> lines;
    for (const auto& r : rows) {
      std::string amse = r.degenerate ? "unbounded"
                                      : fmt_double(render_value(r.amse));
      if (r.family == "beta")
        lines.push_back(r.family + ',' + fmt_double(r.shape1) + ',' +
                        fmt_double(r.shape2) + ',' + fmt_double(r.epsilon) +
                        ',' + r.estimator + ',' + amse);
      else
        lines.push_back(r.family + ',' + fmt_double(r.shape1) + ',' +
                        fmt_double(r.epsilon) + ',' + r.estimator + ',' + amse);
    }
    return lines;
  };
  if (wanted(2)) {
    const auto rows = tables::compute_table2();
    write_csv_file(dir / "table2.csv", "family,shape,epsilon,estimator,amse",
                   least_amse_lines(rows));
    note("table2", tables::compare_least_amse("table2", rows));
  }
  if (wanted(3)) {
    const auto rows = tables::compute_table3();
    write_csv_file(dir / "table3.csv", "family,shape,epsilon,estimator,amse",
                   least_amse_lines(rows));
    note("table3", tables::compare_least_amse("table3", rows));
  }
  if (wanted(4)) {
    const auto rows = tables::compute_table4();
    write_csv_file(dir / "table4.csv", "family,r,s,epsilon,estimator,amse",
                   least_amse_lines(rows));
    note("table4", tables::compare_least_amse("table4", rows));
  }
  if (wanted(5)) {
    const auto rows = tables::compute_table5(replications, seed, threads);
    std::vector<std::string> lines;
    for (const auto& r : rows)
      lines.push_back("beta," + fmt_double(r.r) + ',' + fmt_double(r.s) + ',' +
                      fmt_double(r.sigma) + ',' +
                      fmt_double(render_value(r.rate_pct)) + ',' +
                      fmt_double(render_value(r.h_direct)) + ',' +
                      fmt_double(render_value(r.h_reduced)));
    write_csv_file(dir / "table5.csv",
                   "family,r,s,sigma,improvement_rate_pct,h_direct,h_reduced",
                   lines);
    note("table5", tables::compare_table5(rows));
  }

  std::vector<std::string> lines;
  for (const auto& d : discrepancies)
    lines.push_back(d.table + ",\"" + d.label + "\"," +
                    fmt_double(d.computed) + ',' + fmt_double(d.reference) +
                    ',' + fmt_double(d.rel_err) + ',' + fmt_double(d.tolerance));
  write_csv_file(dir / "discrepancy_report.csv",
                 "table,label,computed,reference,rel_err,tolerance", lines);
  std::cout << "discrepancy report: " << discrepancies.size() << " entries ("
            << (dir / "discrepancy_report.csv").string() << ")\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kernel hazard estimation: estimators, asymptotics, simulation"};
  app.require_subcommand(1);

  CommonOpts common;
  std::optional<double> x0, quantile, h_opt;
  std::uint64_t n = 100, replications = 10000, seed = 20240101;
  std::size_t grid = 101;
  std::pair<double, double> qrange{0.05, 0.95};
  std::string bandwidth = "plugin", bandwidth2 = "mise", csv_path, data_path;
  std::optional<std::string> column, method2;
  std::string tables_dir = ".";
  std::vector<int> which_tables;
  unsigned threads = 0;

  auto add_common = [&](CLI::App* cmd, bool with_model,
                        bool model_required = true) {
    if (with_model) {
      auto* opt = cmd->add_option("--model", common.model_spec,
                                  "model spec, e.g. gamma:shape=0.5,scale=100");
      if (model_required) opt->required();
    }
    cmd->add_option("--kernel", common.kernel, "kernel name")
        ->default_val("epanechnikov");
    cmd->add_option("--method", common.method,
                    "estimator: naive | direct | terrell-scott")
        ->default_val("direct");
    cmd->add_option("--format", common.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->default_val("json");
    cmd->add_option("--output", common.output, "output path (default stdout)");
    cmd->add_flag("--paper-constants", common.paper_constants,
                  "use the published table constants A12=1/5, A20=3/10");
    cmd->add_flag("--paper-format", g_paper_format,
                  "render numbers with 3 significant figures");
  };

  CLI::App* est = app.add_subcommand("estimate", "estimate a hazard curve from data");
  est->add_option("data", data_path, "observations file")->required();
  est->add_option("--column", column, "CSV column name");
  est->add_option("--bandwidth", bandwidth, "positive number or 'plugin'")
      ->default_val("plugin");
  est->add_option("--grid", grid, "number of grid points")->default_val(101);
  add_common(est, false);

  CLI::App* am = app.add_subcommand("amse", "asymptotic MSE report at a point");
  am->add_option("--x0", x0, "evaluation point");
  am->add_option("--quantile", quantile, "evaluation quantile in (0,1)");
  am->add_option("--n", n, "sample size")->required();
  am->add_option("--bandwidth", h_opt, "bandwidth (default n^-1/5)");
  add_common(am, true);

  CLI::App* bw = app.add_subcommand("bandwidth", "optimal bandwidth report");
  bw->add_option("--x0", x0, "evaluation point");
  bw->add_option("--quantile", quantile, "evaluation quantile in (0,1)");
  bw->add_option("--n", n, "sample size")->required();
  add_common(bw, true);

  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo MSE / MISE study");
  std::string config_path;
  sim->add_option("--config", config_path, "key=value config file");
  sim->add_option("--n", n, "sample size")->default_val(100);
  sim->add_option("--replications", replications, "replications")
      ->default_val(10000);
  sim->add_option("--seed", seed, "master seed")->default_val(20240101);
  sim->add_option("--grid", grid, "grid points")->default_val(101);
  sim->add_option("--quantile-range", qrange, "lo,hi quantile range")
      ->delimiter(',');
  sim->add_option("--bandwidth", bandwidth, "positive number or 'mise'")
      ->default_val("mise");
  sim->add_option("--method2", method2, "second estimator for comparison");
  sim->add_option("--bandwidth2", bandwidth2,
                  "bandwidth for the second estimator")
      ->default_val("mise");
  sim->add_option("--x0", x0, "single-point mode at x0");
  sim->add_option("--csv", csv_path, "per-grid-point CSV output path");
  sim->add_option("--threads", threads, "worker threads (0 = auto)")
      ->default_val(0);
  add_common(sim, true, /*model_required=*/false);

  CLI::App* tab = app.add_subcommand("tables", "reproduce the reference tables");
  tab->add_option("--output", tables_dir, "output directory")->default_val(".");
  tab->add_option("--replications", replications, "table-5 replications")
      ->default_val(10000);
  tab->add_option("--seed", seed, "table-5 master seed")->default_val(20240101);
  tab->add_option("--tables", which_tables, "subset, e.g. 1,2,3")
      ->delimiter(',');
  tab->add_option("--threads", threads, "worker threads (0 = auto)")
      ->default_val(0);
  tab->add_flag("--paper-format", g_paper_format,
                "render numbers with 3 significant figures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (est->parsed())
      return cmd_estimate(common, data_path, column, bandwidth, grid);
    if (am->parsed())
      return cmd_amse(common, x0, quantile, n, h_opt, false);
    if (bw->parsed())
      return cmd_amse(common, x0, quantile, n, std::nullopt, true);
    if (sim->parsed()) {
      if (!config_path.empty()) {
        const std::map<std::string, std::function<void(const std::string&)>>
            setters = {
                {"model", [&](const std::string& v) { common.model_spec = v; }},
                {"kernel", [&](const std::string& v) { common.kernel = v; }},
                {"method", [&](const std::string& v) { common.method = v; }},
                {"method2", [&](const std::string& v) { method2 = v; }},
                {"bandwidth", [&](const std::string& v) { bandwidth = v; }},
                {"bandwidth2", [&](const std::string& v) { bandwidth2 = v; }},
                {"format", [&](const std::string& v) { common.format = v; }},
                {"output", [&](const std::string& v) { common.output = v; }},
                {"csv", [&](const std::string& v) { csv_path = v; }},
                {"n", [&](const std::string& v) { n = std::stoull(v); }},
                {"replications",
                 [&](const std::string& v) { replications = std::stoull(v); }},
                {"seed", [&](const std::string& v) { seed = std::stoull(v); }},
                {"grid", [&](const std::string& v) { grid = std::stoull(v); }},
                {"threads",
                 [&](const std::string& v) { threads = std::stoul(v); }},
                {"x0", [&](const std::string& v) { x0 = std::stod(v); }},
                {"quantile-range",
                 [&](const std::string& v) {
                   const auto comma = v.find(',');
                   if (comma == std::string::npos)
                     throw ParseError("quantile-range needs lo,hi", 0);
                   qrange.first = std::stod(v.substr(0, comma));
                   qrange.second = std::stod(v.substr(comma + 1));
                 }},
                {"paper-constants",
                 [&](const std::string& v) {
                   common.paper_constants = v == "true" || v == "1";
                 }},
            };
        apply_simulate_config(config_path, sim, setters);
      }
      if (common.model_spec.empty())
        throw ParseError("--model is required (flag or config file)", 0);
      return cmd_simulate(common, n, replications, seed, grid, qrange,
                          bandwidth, method2, bandwidth2, x0, csv_path,
                          threads);
    }
    if (tab->parsed())
      return cmd_tables(tables_dir, replications, seed, which_tables, threads);
  } catch (const ParseError& e) {
    if (e.line() > 0)
      std::cerr << "line " << e.line() << ": " << e.what() << '\n';
    else
      std::cerr << e.what() << '\n';
    return kExitInput;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << '\n';
    return kExitInput;
  } catch (const DenominatorDegenerateError& e) {
    std::cerr << e.what() << '\n';
    return kExitDegenerate;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}
