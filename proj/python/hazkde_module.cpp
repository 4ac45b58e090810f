#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hazkde/asymptotics.hpp"
#include "hazkde/estimators.hpp"
#include "hazkde/kernels.hpp"
#include "hazkde/models.hpp"
#include "hazkde/montecarlo.hpp"

namespace py = pybind11;
using namespace hazkde;

namespace {

py::dict report_to_dict(const AmseReport& r) {
  py::dict d;
  d["estimator"] = to_string(r.kind);
  d["x0"] = r.x0;
  d["n"] = r.n;
  d["h"] = r.h;
  d["bias_sq"] = r.bias_sq;
  d["variance"] = r.variance;
  d["amse"] = r.amse;
  d["optimal_h"] = r.optimal_h ? py::cast(*r.optimal_h) : py::none();
  return d;
}

py::dict result_to_dict(const SimulationResult& res) {
  py::dict d;
  d["model"] = res.model;
  d["n"] = res.n;
  d["replications"] = res.replications;
  d["grid_x"] = res.grid_x;
  py::list ests;
  for (const auto& e : res.estimators) {
    py::dict je;
    je["method"] = to_string(e.estimator.kind);
    je["kernel"] = e.estimator.kernel;
    je["bandwidth"] = e.estimator.bandwidth;
    je["mise"] = e.mise;
    je["skipped"] = e.skipped;
    je["ts_fallbacks"] = e.ts_fallbacks;
    je["valid"] = e.valid;
    py::list pts;
    for (const auto& p : e.points) {
      py::dict jp;
      jp["x"] = p.x;
      jp["bias"] = p.bias;
      jp["variance"] = p.variance;
      jp["mse"] = p.mse;
      pts.append(jp);
    }
    je["points"] = pts;
    ests.append(je);
  }
  d["estimators"] = ests;
  d["improvement_rate"] =
      res.improvement_rate ? py::cast(*res.improvement_rate) : py::none();
  d["valid"] = res.valid;
  return d;
}

}  // namespace

PYBIND11_MODULE(_hazkde, m) {
  m.doc() = "kernel hazard estimators, their asymptotics and simulation";

  py::register_exception<DenominatorDegenerateError>(m, "DenominatorDegenerateError");
  py::register_exception<SurvivalUnderflowError>(m, "SurvivalUnderflowError");

  py::class_<Kernel>(m, "Kernel")
      .def_static("by_name", &Kernel::by_name, py::return_value_policy::reference)
      .def_static("names", &Kernel::builtin_names)
      .def_property_readonly("name", &Kernel::name)
      .def_property_readonly("support_halfwidth", &Kernel::support_halfwidth)
      .def("__call__", &Kernel::operator())
      .def("cdf", &Kernel::cdf)
      .def("moment", &Kernel::moment);

  py::class_<ParametricModel>(m, "ParametricModel")
      .def_static("parse", &ParametricModel::parse)
      .def_static("exponential", &ParametricModel::exponential)
      .def_static("uniform", &ParametricModel::uniform)
      .def_static("gamma", &ParametricModel::gamma)
      .def_static("weibull", &ParametricModel::weibull)
      .def_static("scaled_beta", &ParametricModel::scaled_beta)
      .def("describe", &ParametricModel::describe)
      .def("pdf", &ParametricModel::pdf)
      .def("pdf_deriv", &ParametricModel::pdf_deriv)
      .def("cdf", &ParametricModel::cdf)
      .def("survival", &ParametricModel::survival)
      .def("hazard", &ParametricModel::hazard)
      .def("quantile", &ParametricModel::quantile)
      .def("sample", &ParametricModel::sample);

  py::class_<SortedSample>(m, "SortedSample")
      .def(py::init<std::vector<double>>())
      .def("__len__", &SortedSample::size)
      .def_property_readonly("values", &SortedSample::values)
      .def("ecdf", &SortedSample::ecdf)
      .def("integrated_ecdf", &SortedSample::integrated_ecdf)
      .def("expected_min", &SortedSample::expected_min);

  m.def(
      "naive_hazard",
      [](const SortedSample& s, const std::string& kernel, double h, double x0) {
        return naive_hazard(s, Kernel::by_name(kernel), h, x0);
      },
      py::arg("sample"), py::arg("kernel"), py::arg("h"), py::arg("x0"));
  m.def(
      "direct_hazard",
      [](const SortedSample& s, const std::string& kernel, double h, double x0) {
        return direct_hazard(s, Kernel::by_name(kernel), h, x0);
      },
      py::arg("sample"), py::arg("kernel"), py::arg("h"), py::arg("x0"));
  m.def(
      "terrell_scott_hazard",
      [](const SortedSample& s, const std::string& kernel, double h, double x0) {
        return terrell_scott_hazard(s, Kernel::by_name(kernel), h, x0);
      },
      py::arg("sample"), py::arg("kernel"), py::arg("h"), py::arg("x0"));
  m.def(
      "direct_density_ratio",
      [](const SortedSample& num, const SortedSample& den,
         const std::string& kernel, double h, double x0) {
        return direct_density_ratio(num, den, Kernel::by_name(kernel), h, x0);
      },
      py::arg("numerator"), py::arg("denominator"), py::arg("kernel"),
      py::arg("h"), py::arg("x0"));
  m.def(
      "plugin_bandwidth",
      [](const SortedSample& s, const std::string& kernel,
         const std::string& method, double x0) {
        const auto pb = plugin_bandwidth(s, Kernel::by_name(kernel),
                                         estimator_kind_from_name(method), x0);
        py::dict d;
        d["h"] = pb.h;
        d["pilot"] = pb.pilot;
        d["degenerate_fallback"] = pb.degenerate_fallback;
        return d;
      },
      py::arg("sample"), py::arg("kernel"), py::arg("method"), py::arg("x0"));

  m.def(
      "amse",
      [](const std::string& method, const ParametricModel& model, double x0,
         std::uint64_t n, double h, const std::string& kernel,
         bool paper_constants) {
        const KernelMoments mom = paper_constants
                                      ? published_table_moments()
                                      : kernel_moments(Kernel::by_name(kernel));
        return report_to_dict(
            amse(estimator_kind_from_name(method), model, x0, n, h, mom));
      },
      py::arg("method"), py::arg("model"), py::arg("x0"), py::arg("n"),
      py::arg("h"), py::arg("kernel") = "epanechnikov",
      py::arg("paper_constants") = false);
  m.def(
      "optimal_bandwidth",
      [](const std::string& method, const ParametricModel& model, double x0,
         std::uint64_t n, const std::string& kernel) -> py::object {
        const auto h = optimal_bandwidth(estimator_kind_from_name(method),
                                         model, x0, n,
                                         kernel_moments(Kernel::by_name(kernel)));
        return h ? py::cast(*h) : py::none();
      },
      py::arg("method"), py::arg("model"), py::arg("x0"), py::arg("n"),
      py::arg("kernel") = "epanechnikov");

  m.def(
      "simulate_mise",
      [](const ParametricModel& model, std::size_t n, std::size_t replications,
         const std::vector<std::tuple<std::string, std::string, double>>& ests,
         double eps_lo, double eps_hi, std::size_t grid, std::uint64_t seed,
         unsigned threads) {
        SimulationSpec spec{model};
        spec.n = n;
        spec.replications = replications;
        for (const auto& [method, kernel, h] : ests)
          spec.estimators.push_back(
              {estimator_kind_from_name(method), kernel, h});
        spec.eps_lo = eps_lo;
        spec.eps_hi = eps_hi;
        spec.grid = grid;
        spec.master_seed = seed;
        spec.threads = threads;
        return result_to_dict(simulate_mise(spec));
      },
      py::arg("model"), py::arg("n"), py::arg("replications"),
      py::arg("estimators"), py::arg("eps_lo") = 0.05,
      py::arg("eps_hi") = 0.95, py::arg("grid") = 101, py::arg("seed") = 0,
      py::arg("threads") = 0);
}
