#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "poolmarket/common.hpp"
#include "poolmarket/equilibrium.hpp"
#include "poolmarket/fixtures.hpp"
#include "poolmarket/io.hpp"

using namespace poolmarket;
using io::Json;

namespace {

ErrorCode code_of(const std::function<void()>& fn, std::string* message = nullptr) {
  try {
    fn();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  FAIL("no error");
  return ErrorCode::IoError;
}

std::string fixture(const char* name) { return std::string(POOLMARKET_FIXTURE_DIR) + "/" + name; }

}  // namespace

TEST_CASE("infeasible entries") {
  CHECK_FALSE(io::value_from_json(Json("inf"), "/x").feasible());
  CHECK_FALSE(io::value_from_json(Json(nullptr), "/x").feasible());
  CHECK(io::value_from_json(Json(2.5), "/x").amount() == 2.5);
  CHECK(io::value_to_json(Value::infeasible()) == Json("inf"));
  CHECK(code_of([] { io::value_from_json(Json("lots"), "/x"); }) == ErrorCode::SchemaError);
}

TEST_CASE("instances round-trip") {
  for (const Instance& inst : {fixtures::example1(), fixtures::example2()}) {
    const Json a = io::instance_to_json(inst);
    const Instance back = io::instance_from_json(a);
    CHECK(io::instance_to_json(back) == a);
    CHECK(back.agents.size() == inst.agents.size());
    for (std::size_t m = 0; m < inst.agents.size(); ++m) {
      CHECK(back.agents[m].delay == inst.agents[m].delay);
      for (int n = 1; n <= inst.costs.vehicle_capacity; ++n) CHECK(back.agents[m].pi_at(n) == inst.agents[m].pi_at(n));
    }
  }
  Instance soft = fixtures::example1();
  soft.agents[0].delay = DelayFn::piecewise({{0, 0}, {1, 2}, {3, 10}});
  soft.agents[1].delay = DelayFn::linear(1.5);
  soft.epsilon = 0.01;
  const Json j = io::instance_to_json(soft);
  const Instance back = io::instance_from_json(j);
  CHECK(back.agents[0].delay == soft.agents[0].delay);
  CHECK(back.agents[1].delay == soft.agents[1].delay);
  CHECK(back.epsilon == soft.epsilon);
}

TEST_CASE("multi-population instances round-trip") {
  const auto mi = fixtures::bay_mini();
  const Json a = io::multi_to_json(mi);
  CHECK(io::has_populations(a));
  CHECK_FALSE(io::has_populations(io::instance_to_json(fixtures::example1())));
  const auto back = io::multi_from_json(a);
  CHECK(io::multi_to_json(back) == a);
  CHECK(back.populations().size() == 3);
}

TEST_CASE("bundled fixture files load") {
  const Instance e1 = io::load_instance(fixture("example1.json"));
  CHECK(io::instance_to_json(e1) == io::instance_to_json(fixtures::example1()));
  const auto bay = io::load_multi_instance(fixture("bay-mini.json"));
  CHECK(io::multi_to_json(bay) == io::multi_to_json(fixtures::bay_mini()));
}

TEST_CASE("schema errors name the offending value") {
  Json doc = io::instance_to_json(fixtures::example1());
  std::string msg;

  SUBCASE("non-convex pooling table") {
    doc["market"]["vehicle_capacity"] = 3;
    for (auto& a : doc["agents"]) {
      a["pi"] = Json::array({0.0, 0.0, 0.0});
      a["gamma"] = Json::array({0.0, 0.0, 0.0});
    }
    doc["agents"][1]["pi"] = Json::array({0.0, 2.0, 2.5});
    CHECK(code_of([&] { io::instance_from_json(doc); }, &msg) == ErrorCode::SchemaError);
    CHECK(msg.find("agent 2") != std::string::npos);
    CHECK(msg.find("/agents") != std::string::npos);
  }
  SUBCASE("missing field") {
    doc["agents"][2].erase("alpha");
    CHECK(code_of([&] { io::instance_from_json(doc); }, &msg) == ErrorCode::SchemaError);
    CHECK(msg.find("/agents/2") != std::string::npos);
    CHECK(msg.find("alpha") != std::string::npos);
  }
  SUBCASE("wrong type") {
    doc["network"]["edges"][0]["capacity"] = "wide";
    CHECK(code_of([&] { io::instance_from_json(doc); }, &msg) == ErrorCode::SchemaError);
    CHECK(msg.find("/network/edges/0/capacity") != std::string::npos);
  }
  SUBCASE("duplicate agent id") {
    doc["agents"][1]["id"] = 1;
    CHECK(code_of([&] { io::instance_from_json(doc); }) == ErrorCode::SchemaError);
  }
  SUBCASE("unknown delay type") {
    doc["agents"][0]["delay"] = Json{{"type", "soonish"}};
    CHECK(code_of([&] { io::instance_from_json(doc); }, &msg) == ErrorCode::SchemaError);
    CHECK(msg.find("soonish") != std::string::npos);
  }
  SUBCASE("structural network problems keep their own code") {
    doc["network"]["edges"][0]["capacity"] = 0;
    CHECK(code_of([&] { io::instance_from_json(doc); }) == ErrorCode::NonPositiveCapacity);
  }
}

TEST_CASE("syntax errors report line and column") {
  std::string msg;
  CHECK(code_of([] { io::parse_json("{\n  \"a\": ,\n}", "bad.json"); }, &msg) == ErrorCode::SchemaError);
  CHECK(msg.find("bad.json:2:") != std::string::npos);
  CHECK(code_of([] { io::read_json_file("/nonexistent/instance.json"); }) == ErrorCode::IoError);
}

TEST_CASE("money formatting") {
  CHECK(io::money(1.23456789) == doctest::Approx(1.234568));
  CHECK(io::money_text(2.0) == "2.000000");
  CHECK(io::money_text(-0.0000001) == "0.000000");
}

TEST_CASE("solve reports") {
  Instance inst = fixtures::example1();
  inst.agents.pop_back();  // two agents: an equilibrium exists
  const auto o = solve(inst);
  const auto rep = verify_equilibrium(inst, o.routes, o.trips, o.prices, o.epsilon);
  io::SolveReport r{&inst, &o, &rep, nullptr, nullptr, std::nullopt};
  const Json j = io::solve_report_json(r);
  CHECK(j["welfare"].get<double>() == doctest::Approx(7.6));
  CHECK(j["series_parallel"] == false);
  CHECK(j["trips"].size() == 1);
  CHECK(j["verification"]["pass"] == true);
  CHECK_FALSE(j.contains("timing"));

  const std::string csv = io::solve_report_csv(r);
  CHECK(csv.rfind(std::string(io::kCsvHeader) + "\n", 0) == 0);
  CHECK(csv.find("payment,agent 1,,") != std::string::npos);

  const auto loaded = io::outcome_from_json(inst, j);
  CHECK(loaded.trips == o.trips);
  const auto again = verify_equilibrium(inst, loaded.routes, loaded.trips, loaded.prices, loaded.epsilon);
  CHECK(again.pass());
}
