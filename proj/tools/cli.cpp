#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "poolmarket/equilibrium.hpp"
#include "poolmarket/fixtures.hpp"
#include "poolmarket/io.hpp"
#include "poolmarket/multipop.hpp"
#include "poolmarket/oracle.hpp"

namespace poolmarket::cli {

namespace {

using io::Json;

struct InputFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AssertionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string report = "json";
  std::uint64_t seed = 1;
  std::optional<double> eps;
  std::optional<std::size_t> max_enum;
  std::string output;
};

template <typename F>
auto load(F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw InputFailure(e.what());
  }
}

std::size_t enum_cap(const Globals& g, std::size_t fallback) { return g.max_enum ? *g.max_enum : enumeration_cap(fallback); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void emit(const Globals& g, std::ostream& out, const Json& j, const std::string& csv) {
  std::string body;
  if (g.report == "csv") {
    if (csv.empty()) throw InputFailure("this command has no CSV report");
    body = csv;
  } else {
    body = j.dump(2) + "\n";
  }
  if (g.output.empty()) {
    out << body;
  } else {
    io::write_text_file(g.output, body);
  }
}

void expect(bool ok, const std::string& what, std::ostream& out) {
  out << (ok ? "ok    " : "FAIL  ") << what << "\n";
  if (!ok) throw AssertionFailure("demo expectation failed: " + what);
}

Json trips_json(const Instance& inst, std::span<const Route> routes, std::span<const Trip> trips) {
  Json arr = Json::array();
  for (const auto& t : trips) {
    Json g = Json::array();
    for (int m : t.group) g.push_back(inst.agents[m].id);
    arr.push_back({{"departure", t.departure},
                   {"route", route_label(inst.network, routes[t.route])},
                   {"group", g},
                   {"value", io::money(t.value)}});
  }
  return arr;
}

SolveOptions solve_options(const Globals& g) {
  SolveOptions o;
  o.epsilon = g.eps;
  return o;
}

// ---- solve ---------------------------------------------------------------

int cmd_solve(const Globals& g, const std::string& path, bool tolls, bool vcg, std::ostream& out) {
  const Json doc = load([&] { return io::read_json_file(path); });
  if (io::has_populations(doc)) throw InputFailure(path + ": has populations; use the multipop command");
  const Instance inst = load([&] { return io::instance_from_json(doc); });

  const auto t0 = std::chrono::steady_clock::now();
  const SolveOptions opts = solve_options(g);
  const Outcome outcome = solve(inst, opts);
  VerifyOptions vo;
  vo.enumeration_cap = enum_cap(g, vo.enumeration_cap);
  vo.seed = g.seed;
  const auto rep = verify_equilibrium(inst, outcome.routes, outcome.trips, outcome.prices, outcome.epsilon, vo);
  // Minimal tolls are those supporting the VCG utilities.
  std::optional<VcgOutcome> vc;
  if (vcg || tolls) vc = vcg_outcome(inst, opts);
  std::optional<EdgeTolls> et;
  if (tolls)
    et = edge_tolls(inst, outcome.routes, vc->utility, outcome.trips,
                    outcome.epsilon * static_cast<double>(inst.agents.size()) + 1e-6);
  if (!vcg) vc.reset();

  io::SolveReport r{&inst, &outcome, &rep, et ? &*et : nullptr, vc ? &*vc : nullptr, seconds_since(t0)};
  emit(g, out, io::solve_report_json(r), io::solve_report_csv(r));
  return kOk;
}

// ---- verify --------------------------------------------------------------

int cmd_verify(const Globals& g, const std::string& instance_path, const std::string& outcome_path,
               std::ostream& out) {
  const Instance inst = load([&] { return io::load_instance(instance_path); });
  const auto loaded = load([&] { return io::outcome_from_json(inst, io::read_json_file(outcome_path)); });
  VerifyOptions vo;
  vo.enumeration_cap = enum_cap(g, vo.enumeration_cap);
  vo.seed = g.seed;
  const double eps = g.eps ? *g.eps : loaded.epsilon;
  const auto rep = verify_equilibrium(inst, loaded.routes, loaded.trips, loaded.prices, eps, vo);
  Json j{{"command", "verify"}, {"welfare", io::money(rep.welfare)}};
  j["verification"] = io::verification_json(rep);
  emit(g, out, j, "");
  return rep.pass() ? kOk : kAssertionFailed;
}

// ---- oracle --------------------------------------------------------------

Json oracle_json(const Globals& g, const Instance& inst) {
  const auto p = oracle::Problem::from_instance(inst);
  oracle::Limits lim;
  lim.max_columns = enum_cap(g, lim.max_columns);
  const auto ip = oracle::ip_optimum(p, lim);
  const auto lp = oracle::lp_optimum(p, lim);
  Json support = Json::array();
  for (const auto& [t, x] : lp.support()) {
    Json g2 = Json::array();
    for (int m : t.group) g2.push_back(inst.agents[m].id);
    support.push_back({{"departure", t.departure},
                       {"route", route_label(inst.network, p.routes[t.route])},
                       {"group", g2},
                       {"x", x}});
  }
  const double gap = lp.welfare - ip.welfare;
  return Json{{"command", "oracle"},
              {"ip_welfare", io::money(ip.welfare)},
              {"lp_welfare", io::money(lp.welfare)},
              {"gap", io::money(gap)},
              {"fractional", lp.fractional},
              {"equilibrium_exists", gap <= 1e-6},
              {"ip_trips", trips_json(inst, p.routes, ip.trips)},
              {"lp_support", support}};
}

int cmd_oracle(const Globals& g, const std::string& path, std::ostream& out) {
  const Instance inst = load([&] { return io::load_instance(path); });
  emit(g, out, oracle_json(g, inst), "");
  return kOk;
}

// ---- gs-check ------------------------------------------------------------

Json violation_json(const oracle::GsViolation& v) {
  Json j{{"condition", v.condition},
         {"base", oracle::mask_to_string(v.base)},
         {"i", v.i + 1},
         {"lhs", v.lhs},
         {"rhs", v.rhs1},
         {"text", v.to_string()}};
  if (v.condition == 1) {
    j["larger"] = oracle::mask_to_string(v.larger);
  } else {
    j["j"] = v.j + 1;
    j["k"] = v.k + 1;
    j["rhs"] = Json::array({v.rhs1, v.rhs2});
  }
  return j;
}

Json gs_json(const std::string& label, const oracle::GsReport& rep) {
  Json j{{"label", label}, {"pass", rep.pass()}};
  j["condition1"] = rep.condition1 ? violation_json(*rep.condition1) : Json();
  j["condition2"] = rep.condition2 ? violation_json(*rep.condition2) : Json();
  return j;
}

oracle::ValueOracle table_oracle(const Json& doc) {
  const int n = doc.at("ground_size").get<int>();
  if (n < 1 || n > 10) throw Error(ErrorCode::SchemaError, "/ground_size: must be between 1 and 10");
  std::map<std::uint32_t, double> table;
  for (const auto& e : doc.at("values")) {
    std::uint32_t mask = 0;
    for (const auto& k : e.at("set")) {
      const int i = k.get<int>();
      if (i < 1 || i > n) throw Error(ErrorCode::SchemaError, "/values: element out of range");
      mask |= 1u << (i - 1);
    }
    table[mask] = e.at("value").get<double>();
  }
  return oracle::ValueOracle::from_table(n, std::move(table));
}

int cmd_gs_check(const Globals& g, const std::string& source, std::ostream& out) {
  Json checks = Json::array();
  if (source == "footnote") {
    checks.push_back(gs_json("footnote", oracle::gs_check(oracle::ValueOracle::from_table(3, fixtures::footnote_table()))));
  } else {
    const Json doc = load([&] { return io::read_json_file(source); });
    if (doc.contains("network")) {
      const Instance inst = load([&] { return io::instance_from_json(doc); });
      if (inst.agents.size() > 10) throw Error(ErrorCode::TooLarge, "gs-check supports at most 10 agents");
      const auto routes = enumerate_routes(inst.network);
      std::vector<int> members(inst.agents.size());
      for (std::size_t m = 0; m < members.size(); ++m) members[m] = static_cast<int>(m);
      const int T = inst.network.horizon();
      for (const auto& route : routes)
        for (int z = 1; z <= T; ++z) {
          if (!arrives_within(z, route.total_time, T)) continue;
          const auto f = oracle::augmented_oracle(inst.agents, members, z, route, inst.costs);
          checks.push_back(
              gs_json(route_label(inst.network, route) + " at z=" + std::to_string(z), oracle::gs_check(f)));
        }
    } else {
      const auto f = load([&] { return table_oracle(doc); });
      checks.push_back(gs_json(source, oracle::gs_check(f)));
    }
  }
  emit(g, out, Json{{"command", "gs-check"}, {"checks", checks}}, "");
  return kOk;
}

// ---- multipop ------------------------------------------------------------

int cmd_multipop(const Globals& g, const std::string& path, std::ostream& out) {
  const MultiInstance inst = load([&] { return io::load_multi_instance(path); });
  const auto t0 = std::chrono::steady_clock::now();
  BranchOptions bo;
  bo.solve = solve_options(g);
  const auto res = branch_and_price(inst, bo);
  io::MultipopReport r{&inst, &res, seconds_since(t0)};
  emit(g, out, io::multipop_report_json(r), io::multipop_report_csv(r));
  return kOk;
}

// ---- demo ----------------------------------------------------------------

double median_size(const Outcome& o) {
  std::vector<std::size_t> s;
  for (const auto& t : o.trips) s.push_back(t.group.size());
  if (s.empty()) return 0.0;
  std::sort(s.begin(), s.end());
  const std::size_t n = s.size();
  return n % 2 ? static_cast<double>(s[n / 2]) : 0.5 * static_cast<double>(s[n / 2 - 1] + s[n / 2]);
}

void demo_example1(const Globals& g, std::ostream& out) {
  const Instance inst = fixtures::example1();
  const Json j = oracle_json(g, inst);
  const double lp = j["lp_welfare"].get<double>();
  const double ip = j["ip_welfare"].get<double>();
  out << "LP optimum " << io::money_text(lp) << ", IP optimum " << io::money_text(ip) << "\n";
  for (const auto& s : j["lp_support"]) out << "  x = " << s["x"].get<double>() << " on " << s.dump() << "\n";
  expect(std::fabs(lp - 9.8) <= 1e-6, "LP optimum is 9.8", out);
  expect(j["fractional"].get<bool>(), "LP optimum is fractional", out);
  bool halves = j["lp_support"].size() == 3;
  for (const auto& s : j["lp_support"])
    halves = halves && std::fabs(s["x"].get<double>() - 0.5) <= 1e-6 && s["group"].size() == 2;
  expect(halves, "x = 0.5 on three pair trips", out);
  expect(ip < lp - 1e-6, "IP optimum is strictly smaller", out);
  const auto ex = check_existence(inst);
  expect(!ex.exists(), "no market equilibrium", out);
  out << "no market equilibrium\n";
}

void demo_example2(const Globals& g, std::ostream& out) {
  const Instance inst = fixtures::example2();
  const Json j = oracle_json(g, inst);
  const double lp = j["lp_welfare"].get<double>();
  const double ip = j["ip_welfare"].get<double>();
  out << "LP optimum " << io::money_text(lp) << ", IP optimum " << io::money_text(ip) << "\n";
  out << "printed values (reference only): LP " << io::money_text(fixtures::kExample2Printed.lp) << ", IP "
      << io::money_text(fixtures::kExample2Printed.ip) << "\n";
  expect(lp > ip + 1e-6, "LP optimum strictly exceeds IP optimum", out);
  expect(j["fractional"].get<bool>(), "LP optimum is fractional", out);
  out << "no market equilibrium\n";
}

void demo_footnote(std::ostream& out) {
  const auto rep = oracle::gs_check(oracle::ValueOracle::from_table(3, fixtures::footnote_table()));
  expect(rep.condition2.has_value(), "condition (ii) is violated", out);
  const auto& v = *rep.condition2;
  out << v.lhs << " > max(" << v.rhs1 << ", " << v.rhs2 << ")\n";
  out << "certificate: " << v.to_string() << "\n";
  expect(v.lhs == 150.0 && v.rhs1 == 110.0 && v.rhs2 == 110.0, "sums are 150 vs 110 and 110", out);
  if (rep.condition1) out << "also: " << rep.condition1->to_string() << "\n";
}

void demo_bay_mini(const Globals& g, std::ostream& out) {
  const auto inst = fixtures::bay_mini();
  BranchOptions bo;
  bo.solve = solve_options(g);
  const auto res = branch_and_price(inst, bo);
  out << "welfare " << io::money_text(res.value) << " (root bound " << io::money_text(res.root_bound) << ", "
      << res.nodes << " nodes)\n";
  const char* names[] = {"L", "M", "H"};
  std::vector<double> med;
  bool verified = true;
  for (std::size_t i = 0; i < res.submarkets.size(); ++i) {
    const auto& o = res.submarkets[i].outcome;
    med.push_back(median_size(o));
    verified = verified && res.submarkets[i].report.pass();
    out << "  " << names[i] << ": " << o.trips.size() << " trips, median group size " << med.back() << "\n";
  }
  expect(verified, "every submarket passes the equilibrium check", out);
  expect(med.size() == 3 && med[0] >= med[1] && med[1] >= med[2], "median group size ordered L >= M >= H", out);
}

int cmd_demo(const Globals& g, const std::string& name, const std::string& dump, std::ostream& out) {
  if (!dump.empty()) {
    Json doc;
    if (name == "example1") doc = io::instance_to_json(fixtures::example1());
    else if (name == "example2") doc = io::instance_to_json(fixtures::example2());
    else if (name == "bay-mini") doc = io::multi_to_json(fixtures::bay_mini());
    else if (name == "gs-footnote") {
      doc = Json{{"ground_size", 3}, {"values", Json::array()}};
      for (const auto& [mask, v] : fixtures::footnote_table()) {
        Json set = Json::array();
        for (int i = 0; i < 3; ++i)
          if (mask & (1u << i)) set.push_back(i + 1);
        doc["values"].push_back({{"set", set}, {"value", v}});
      }
    }
    io::write_text_file(dump, doc.dump(2) + "\n");
  }
  if (name == "example1") demo_example1(g, out);
  else if (name == "example2") demo_example2(g, out);
  else if (name == "gs-footnote") demo_footnote(out);
  else if (name == "bay-mini") demo_bay_mini(g, out);
  else throw InputFailure("unknown fixture " + name);
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Carpool trip markets: equilibrium trips, prices and payments", "poolmarket"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--report", g.report, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", g.seed, "Seed for sampled stability checks");
  app.add_option("--eps", g.eps, "Auction increment epsilon")->check(CLI::PositiveNumber);
  app.add_option("--max-enum", g.max_enum, "Enumeration cap (overrides POOLMARKET_MAX_ENUM)");
  app.add_option("-o,--output", g.output, "Write the report to a file");

  std::string a, b, dump;
  bool tolls = false, vcg = false;
  auto* solve_cmd = app.add_subcommand("solve", "Route-price equilibrium of a single-market instance");
  solve_cmd->add_option("instance", a)->required();
  solve_cmd->add_flag("--edge-tolls", tolls, "Also recover minimal edge tolls");
  solve_cmd->add_flag("--vcg", vcg, "Also compute VCG utilities and payments");
  auto* verify_cmd = app.add_subcommand("verify", "Check the equilibrium conditions of a solve report");
  verify_cmd->add_option("instance", a)->required();
  verify_cmd->add_option("outcome", b)->required();
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact IP and LP optima by enumeration");
  oracle_cmd->add_option("instance", a)->required();
  auto* gs_cmd = app.add_subcommand("gs-check", "Gross-substitutes check of a value table or instance");
  gs_cmd->add_option("source", a, "Table file, instance file, or 'footnote'")->required();
  auto* multi_cmd = app.add_subcommand("multipop", "Branch-and-price over several populations");
  multi_cmd->add_option("instance", a)->required();
  auto* demo_cmd = app.add_subcommand("demo", "Run a bundled fixture and check its verdicts");
  demo_cmd->add_option("fixture", a)->required()->check(CLI::IsMember({"example1", "example2", "gs-footnote", "bay-mini"}));
  demo_cmd->add_option("--dump", dump, "Also write the fixture to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(g, a, tolls, vcg, out);
    if (verify_cmd->parsed()) return cmd_verify(g, a, b, out);
    if (oracle_cmd->parsed()) return cmd_oracle(g, a, out);
    if (gs_cmd->parsed()) return cmd_gs_check(g, a, out);
    if (multi_cmd->parsed()) return cmd_multipop(g, a, out);
    if (demo_cmd->parsed()) return cmd_demo(g, a, dump, out);
  } catch (const InputFailure& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const AssertionFailure& e) {
    err << "error: " << e.what() << "\n";
    return kAssertionFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kSolverError;
  }
  return kInputError;
}

}  // namespace poolmarket::cli
