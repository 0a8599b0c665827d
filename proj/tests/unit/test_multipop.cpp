#include <doctest.h>

#include <bit>

#include "poolmarket/common.hpp"
#include "poolmarket/equilibrium.hpp"
#include "poolmarket/fixtures.hpp"
#include "poolmarket/lp.hpp"
#include "poolmarket/multipop.hpp"
#include "support/random_instances.hpp"

using namespace poolmarket;

namespace {

MultiInstance single_population(const Instance& inst) {
  std::vector<int> ids;
  for (const auto& a : inst.agents) ids.push_back(a.id);
  const auto spec = inst.network.to_spec();
  return MultiInstance::build(spec, inst.agents, inst.costs, {{1, ids, spec.origin, spec.destination}});
}

// Relaxation with every trip written out and the capacity variables
// eliminated: trips entering an edge at a tick share its capacity.
double full_lp(const MultiInstance& mi) {
  lp::LinearProgram prog;
  std::map<int, std::vector<std::pair<int, double>>> agent_rows;
  std::map<std::pair<int, int>, std::vector<std::pair<int, double>>> edge_rows;
  const int A = mi.costs().vehicle_capacity;
  for (const auto& pop : mi.populations()) {
    const int n = static_cast<int>(pop.members.size());
    for (const auto& route : pop.routes)
      for (int z = 1; z <= mi.horizon(); ++z) {
        if (!arrives_within(z, route.total_time, mi.horizon())) continue;
        for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
          if (std::popcount(mask) > A) continue;
          std::vector<int> group;
          for (int k = 0; k < n; ++k)
            if (mask >> k & 1) group.push_back(pop.members[k]);
          const Value v = trip_value(mi.agents(), group, z, route, mi.costs());
          if (!v.feasible()) continue;
          const int x = prog.add_variable(v.amount());
          for (int m : group) agent_rows[m].emplace_back(x, 1.0);
          for (std::size_t pos = 0; pos < route.edges.size(); ++pos) {
            const int e = pop.edge_map[route.edges[pos]];
            edge_rows[{e, entry_tick(z + route.prefix_at(pos))}].emplace_back(x, 1.0);
          }
        }
      }
  }
  for (auto& [m, terms] : agent_rows) prog.add_row(terms, lp::Relation::LessEqual, 1.0);
  for (auto& [key, terms] : edge_rows)
    prog.add_row(terms, lp::Relation::LessEqual, static_cast<double>(mi.edges()[key.first].capacity));
  const auto s = lp::solve(prog);
  REQUIRE(s.optimal());
  return s.value;
}

double surplus_total(const BranchResult& r) {
  double s = 0.0;
  for (const auto& sub : r.submarkets) s += sub.outcome.welfare;
  return s;
}

}  // namespace

TEST_CASE("one population reduces to the single-market pipeline") {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 40 && checked < 12; ++seed) {
    const Instance inst = testing::random_sp_instance(seed);
    if (!inst.network.integral_times()) continue;
    bool homogeneous = true;
    for (const auto& a : inst.agents)
      homogeneous = homogeneous && same_disutility(a, inst.agents[0], inst.costs.vehicle_capacity);
    if (!homogeneous) continue;
    const auto mi = single_population(inst);
    const auto base = solve(inst);
    const auto master = solve_master(mi);
    CAPTURE(seed);
    CHECK(master.value == doctest::Approx(base.welfare).epsilon(1e-7));
    const auto bp = branch_and_price(mi);
    CHECK(bp.value == doctest::Approx(base.welfare).epsilon(1e-7));
    CHECK(bp.nodes == 1);
    CHECK(bp.submarkets[0].report.pass());
    BranchOptions plain;
    plain.seed_incumbent = false;
    CHECK(branch_and_price(mi, plain).value == doctest::Approx(base.welfare).epsilon(1e-7));
    ++checked;
  }
  CHECK(checked >= 5);
}

TEST_CASE("zero capacity bounds give zero value") {
  const auto mi = testing::random_two_population(3);
  QBounds bounds;
  for (std::size_t i = 0; i < mi.populations().size(); ++i)
    for (std::size_t r = 0; r < mi.populations()[i].routes.size(); ++r)
      for (int z = 1; z <= mi.horizon(); ++z) bounds.upper[{static_cast<int>(i), static_cast<int>(r), z}] = 0;
  const auto m = solve_master(mi, bounds);
  CHECK(m.value == doctest::Approx(0.0));

  QBounds bad;
  bad.lower[{0, 0, 1}] = 2;
  bad.upper[{0, 0, 1}] = 1;
  CHECK_FALSE(bad.consistent());
  CHECK_THROWS_AS(solve_master(mi, bad), Error);
}

TEST_CASE("column generation matches the full relaxation") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto mi = testing::random_two_population(seed);
    const auto m = solve_master(mi);
    CAPTURE(seed);
    CHECK(m.value == doctest::Approx(full_lp(mi)).epsilon(1e-7));
    CHECK(m.max_reduced_cost <= 1e-7);
  }
}

TEST_CASE("bounds only lower the relaxation") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto mi = testing::random_two_population(seed);
    const auto root = solve_master(mi);
    QBounds b;
    b.upper[{0, 0, 1}] = 0;
    CAPTURE(seed);
    CHECK(solve_master(mi, b).value <= root.value + 1e-9);
    const auto bp = branch_and_price(mi);
    CHECK(bp.value <= bp.root_bound + 1e-7);
    CHECK(bp.value == doctest::Approx(surplus_total(bp)));
    CHECK(allocation_fits(mi, bp.q));
  }
}

TEST_CASE("disjoint paths decide the two-population optimum") {
  const auto disjoint = branch_and_price(fixtures::prop4_disjoint());
  CHECK(disjoint.value == doctest::Approx(2.0));
  const auto shared = branch_and_price(fixtures::prop4_shared());
  CHECK(shared.value == doctest::Approx(1.0));
}

TEST_CASE("column pool deduplicates") {
  const auto mi = fixtures::prop4_disjoint();
  ColumnPool pool(mi);
  MultiTrip t{0, 0, 1, {0}, 1.0};
  CHECK(pool.add(t));
  CHECK_FALSE(pool.add(t));
  CHECK(pool.size() == 1);
}

TEST_CASE("allocation capacity check") {
  const auto mi = fixtures::prop4_shared();
  // Both populations leave at tick 1 and meet on the shared unit edge at tick 2.
  std::vector<std::vector<std::vector<int>>> q(2);
  for (std::size_t i = 0; i < 2; ++i)
    q[i].assign(mi.populations()[i].routes.size(), std::vector<int>(mi.horizon(), 0));
  q[0][0][0] = 1;
  CHECK(allocation_fits(mi, q));
  q[1][0][0] = 1;
  CHECK_FALSE(allocation_fits(mi, q));
}

TEST_CASE("instance validation") {
  const auto base = fixtures::prop4_disjoint();
  auto build = [&](NetworkSpec net, std::vector<Agent> agents, std::vector<PopulationSpec> pops) {
    try {
      MultiInstance::build(std::move(net), std::move(agents), base.costs(), std::move(pops));
    } catch (const Error& e) {
      return e.code();
    }
    FAIL("no error");
    return ErrorCode::IoError;
  };
  auto net = base.network();
  net.edges[0].travel_time = 1.5;
  CHECK(build(net, base.agents(), base.population_specs()) == ErrorCode::NonIntegralTravelTime);

  auto dup = base.agents();
  dup[1].id = dup[0].id;
  CHECK(build(base.network(), dup, base.population_specs()) == ErrorCode::DuplicateId);

  auto twice = base.population_specs();
  twice[1].members.push_back(twice[0].members[0]);
  CHECK(build(base.network(), base.agents(), twice) == ErrorCode::InvalidPreferences);

  auto nowhere = base.population_specs();
  nowhere[0].origin = "zz";
  CHECK(build(base.network(), base.agents(), nowhere) == ErrorCode::UnknownNode);
}
