#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <string>

#include "poolmarket/common.hpp"
#include "poolmarket/equilibrium.hpp"
#include "poolmarket/fixtures.hpp"
#include "poolmarket/io.hpp"
#include "poolmarket/multipop.hpp"
#include "poolmarket/oracle.hpp"

namespace py = pybind11;
using namespace poolmarket;
using io::Json;

namespace {

Instance single_market(const std::string& text) {
  const Json doc = io::parse_json(text);
  if (io::has_populations(doc)) throw Error(ErrorCode::SchemaError, "/populations: use multipop for this instance");
  return io::instance_from_json(doc);
}

std::string solve_json(const std::string& text, std::optional<double> eps, bool tolls, bool vcg, std::uint64_t seed) {
  const Instance inst = single_market(text);
  SolveOptions opts;
  opts.epsilon = eps;
  const Outcome outcome = solve(inst, opts);
  VerifyOptions vo;
  vo.seed = seed;
  const auto rep = verify_equilibrium(inst, outcome.routes, outcome.trips, outcome.prices, outcome.epsilon, vo);
  // Minimal tolls are those supporting the VCG utilities.
  std::optional<VcgOutcome> vc;
  if (vcg || tolls) vc = vcg_outcome(inst, opts);
  std::optional<EdgeTolls> et;
  if (tolls)
    et = edge_tolls(inst, outcome.routes, vc->utility, outcome.trips,
                    outcome.epsilon * static_cast<double>(inst.agents.size()) + 1e-6);
  if (!vcg) vc.reset();
  io::SolveReport r{&inst, &outcome, &rep, et ? &*et : nullptr, vc ? &*vc : nullptr, std::nullopt};
  return io::solve_report_json(r).dump();
}

std::string verify_json(const std::string& instance_text, const std::string& report_text, std::optional<double> eps) {
  const Instance inst = single_market(instance_text);
  const auto loaded = io::outcome_from_json(inst, io::parse_json(report_text, "<report>"));
  const auto rep = verify_equilibrium(inst, loaded.routes, loaded.trips, loaded.prices, eps ? *eps : loaded.epsilon);
  return io::verification_json(rep).dump();
}

py::dict oracle_summary(const std::string& text) {
  const Instance inst = single_market(text);
  const auto p = oracle::Problem::from_instance(inst);
  const auto ip = oracle::ip_optimum(p);
  const auto lp = oracle::lp_optimum(p);
  py::dict d;
  d["ip_welfare"] = ip.welfare;
  d["lp_welfare"] = lp.welfare;
  d["fractional"] = lp.fractional;
  d["equilibrium_exists"] = lp.welfare - ip.welfare <= 1e-6;
  return d;
}

std::string multipop_json(const std::string& text) {
  const MultiInstance inst = io::multi_from_json(io::parse_json(text));
  const auto res = branch_and_price(inst);
  io::MultipopReport r{&inst, &res, std::nullopt};
  return io::multipop_report_json(r).dump();
}

py::dict gs_check_table(int n, const std::map<std::uint32_t, double>& table) {
  const auto rep = oracle::gs_check(oracle::ValueOracle::from_table(n, table));
  py::dict d;
  d["pass"] = rep.pass();
  d["condition1"] = rep.condition1 ? py::object(py::str(rep.condition1->to_string())) : py::object(py::none());
  d["condition2"] = rep.condition2 ? py::object(py::str(rep.condition2->to_string())) : py::object(py::none());
  return d;
}

std::string fixture_json(const std::string& name) {
  if (name == "example1") return io::instance_to_json(fixtures::example1()).dump();
  if (name == "example2") return io::instance_to_json(fixtures::example2()).dump();
  if (name == "bay-mini") return io::multi_to_json(fixtures::bay_mini()).dump();
  if (name == "prop4-disjoint") return io::multi_to_json(fixtures::prop4_disjoint()).dump();
  if (name == "prop4-shared") return io::multi_to_json(fixtures::prop4_shared()).dump();
  throw Error(ErrorCode::SchemaError, "unknown fixture '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Carpool market solvers";
  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
      exc.attr("code") = to_string(e.code());
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  m.def("solve", &solve_json, py::arg("instance"), py::arg("eps") = py::none(), py::arg("edge_tolls") = false,
        py::arg("vcg") = false, py::arg("seed") = 1, "Route-price equilibrium; returns the report as JSON text");
  m.def("verify", &verify_json, py::arg("instance"), py::arg("report"), py::arg("eps") = py::none(),
        "Equilibrium conditions of a solve report; returns JSON text");
  m.def("oracle", &oracle_summary, py::arg("instance"), "Exact IP and LP optima");
  m.def("multipop", &multipop_json, py::arg("instance"), "Branch-and-price; returns the report as JSON text");
  m.def("gs_check", &gs_check_table, py::arg("ground_size"), py::arg("table"),
        "Gross-substitutes check of a value table keyed by bit mask");
  m.def("footnote_table", [] { return fixtures::footnote_table(); });
  m.def("fixture", &fixture_json, py::arg("name"), "Bundled instance as JSON text");
}
