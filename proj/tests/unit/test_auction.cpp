#include <doctest.h>

#include <bit>
#include <numeric>

#include "poolmarket/auction.hpp"
#include "poolmarket/common.hpp"
#include "support/random_instances.hpp"

using namespace poolmarket;

namespace {

Network line(int capacity, int horizon) {
  return Network::validate(NetworkSpec{{"o", "d"}, {{"e1", "o", "d", capacity, 1.0}}, "o", "d", horizon});
}

Agent simple_agent(int id, double alpha, int A) {
  Agent a;
  a.id = id;
  a.alpha = alpha;
  a.theta = 10.0;
  a.pi.assign(A, 0.0);
  a.gamma.assign(A, 0.0);
  for (int n = 2; n <= A; ++n) a.pi[n - 1] = 0.5 * (n - 1);
  return a;
}

struct Fixture {
  std::vector<Agent> agents;
  Network net;
  std::vector<Route> routes;
  SlotMarket market;

  Fixture(std::vector<Agent> a, int A, int capacity, int horizon)
      : agents(std::move(a)),
        net(line(capacity, horizon)),
        routes(enumerate_routes(net)),
        market(agents, routes, temporally_repeated(greedy_route_capacity(net, routes), horizon),
               MarketCosts{0.0, 0.0, A}) {}
};

// Best assignment of disjoint groups to the slots, by enumerating every
// labelling of agents with a slot or nobody.
double partition_optimum(const SlotMarket& market) {
  const int M = static_cast<int>(market.num_agents());
  const int L = static_cast<int>(market.num_slots());
  std::vector<int> label(M, 0);
  double best = 0.0;
  while (true) {
    double total = 0.0;
    for (int l = 0; l < L; ++l) {
      std::vector<int> bundle;
      for (int m = 0; m < M; ++m)
        if (label[m] == l + 1) bundle.push_back(m);
      total += market.augmented(l, bundle).value;
    }
    best = std::max(best, total);
    int i = 0;
    while (i < M && ++label[i] > L) label[i++] = 0;
    if (i == M) break;
  }
  return best;
}

// Largest surplus slot l can reach by adding outside agents at u + epsilon.
double best_addition(const SlotMarket& market, std::size_t l, const SlotState& st, std::span<const double> u,
                     double epsilon) {
  std::vector<int> outside;
  for (int m = 0; m < static_cast<int>(market.num_agents()); ++m)
    if (std::find(st.bundle.begin(), st.bundle.end(), m) == st.bundle.end()) outside.push_back(m);
  double best = st.surplus();
  for (std::uint32_t mask = 1; mask < (1u << outside.size()); ++mask) {
    std::vector<int> bundle = st.bundle;
    double paid = st.paid;
    for (std::size_t i = 0; i < outside.size(); ++i)
      if (mask >> i & 1) {
        bundle.push_back(outside[i]);
        paid += u[outside[i]] + epsilon;
      }
    std::sort(bundle.begin(), bundle.end());
    best = std::max(best, market.augmented(l, bundle).value - paid);
  }
  return best;
}

}  // namespace

TEST_CASE("single agent on a single slot") {
  Fixture f({simple_agent(1, 5.0, 1)}, 1, 1, 2);
  REQUIRE(f.market.num_slots() == 1);
  const double eps = 0.01;
  const auto a = allocate(f.market, eps);
  CHECK(a.slots[0].bundle == std::vector<int>{0});
  CHECK(a.slots[0].representative == std::vector<int>{0});
  CHECK(a.ticks == std::vector<long long>{1});
  CHECK(a.utility()[0] == doctest::Approx(eps));
  CHECK(a.holder == std::vector<int>{0});
  CHECK(a.welfare() == doctest::Approx(5.0));  // beta = 0, so eta = alpha
}

TEST_CASE("no agents") {
  Fixture f({}, 1, 1, 2);
  const auto a = allocate(f.market, 0.01);
  CHECK(a.utility().empty());
  CHECK(a.slots[0].bundle.empty());
  CHECK(a.welfare() == 0.0);
}

TEST_CASE("epsilon must be positive") {
  Fixture f({simple_agent(1, 5.0, 1)}, 1, 1, 2);
  CHECK_THROWS_AS(allocate(f.market, 0.0), Error);
  CHECK(default_epsilon(10) == doctest::Approx(1e-3));
  CHECK(default_epsilon(100) == doctest::Approx(1e-3));
  CHECK(default_epsilon(1000) == doctest::Approx(1.0 / 4000));
}

TEST_CASE("two slots and three agents reach the partition optimum") {
  Fixture f({simple_agent(1, 6.0, 2), simple_agent(2, 5.0, 2), simple_agent(3, 4.5, 2)}, 2, 1, 3);
  REQUIRE(f.market.num_slots() == 2);
  CHECK(f.market.slot(0).departure == 1);
  CHECK(f.market.slot(1).departure == 2);
  AllocateOptions opts;
  opts.debug_check = true;
  const auto a = allocate(f.market, 0.01, opts);
  CHECK(a.welfare() == doctest::Approx(partition_optimum(f.market)).epsilon(1e-9));
}

TEST_CASE("random slot markets reach the partition optimum") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    testing::Rng rng(seed);
    const int A = rng.uniform(1, 3);
    const int horizon = rng.uniform(2, 3);
    auto agents = testing::random_agents(rng, rng.uniform(1, 5), A, horizon);
    for (auto& a : agents) {
      a.pi = agents[0].pi;
      a.gamma = agents[0].gamma;
    }
    Fixture f(agents, A, rng.uniform(1, 2), horizon);
    if (f.market.num_slots() > 4) continue;
    const double eps = 1.0 / (4.0 * static_cast<double>(agents.size()));
    AllocateOptions opts;
    opts.debug_check = true;
    const auto a = allocate(f.market, eps, opts);
    CAPTURE(seed);
    CHECK(a.welfare() == doctest::Approx(partition_optimum(f.market)).epsilon(1e-9));
    CHECK(verify_walrasian(f.market, a.slots, a.utility(), eps).ok());
  }
}

TEST_CASE("demand of a slot") {
  SUBCASE("no profitable addition") {
    Fixture f({simple_agent(1, 5.0, 2), simple_agent(2, 4.0, 2)}, 2, 1, 2);
    const std::vector<double> u{5.0, 4.0};
    const auto st = slot_state(f.market, 0, {}, u);
    const auto j = compute_Jl(f.market, 0, st, u, 0.01);
    CHECK(j.added.empty());
    CHECK(j.tentative.bundle.empty());
  }
  SUBCASE("displacement of the lowest member") {
    // A = 1, the slot holds agent 0 (eta 4); agent 1 (eta 7) is cheap.
    Fixture f({simple_agent(1, 4.0, 1), simple_agent(2, 7.0, 1)}, 1, 1, 2);
    const std::vector<double> u{1.0, 0.0};
    const auto st = slot_state(f.market, 0, {0}, u);
    CHECK(st.representative == std::vector<int>{0});
    CHECK(st.lambda == doctest::Approx(4.0));
    const auto j = compute_Jl(f.market, 0, st, u, 0.01);
    CHECK(j.added == std::vector<int>{1});
    CHECK(j.tentative.representative == std::vector<int>{1});
    CHECK(j.tentative.bundle == std::vector<int>{0, 1});
    const auto fresh = slot_state(f.market, 0, j.tentative.bundle, std::vector<double>{1.0, 0.01});
    CHECK(j.tentative.value == doctest::Approx(fresh.value));
    CHECK(j.tentative.value == doctest::Approx(7.0));
    CHECK(j.tentative.lambda == doctest::Approx(7.0));
  }
}

TEST_CASE("slot demand agrees with exhaustive search") {
  int grew = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    testing::Rng rng(seed);
    const int A = rng.uniform(1, 3);
    auto agents = testing::random_agents(rng, rng.uniform(1, 6), A, 3);
    for (auto& a : agents) {
      a.pi = agents[0].pi;
      a.gamma = agents[0].gamma;
    }
    Fixture f(agents, A, 1, 3);
    const int M = static_cast<int>(agents.size());
    std::vector<double> u(M);
    for (auto& x : u) x = rng.uniform(0, 12) * 0.5;
    std::vector<int> bundle;
    for (int m = 0; m < M; ++m)
      if (rng.uniform(0, 2) == 0) bundle.push_back(m);
    const auto st = slot_state(f.market, 0, bundle, u);
    const auto j = compute_Jl(f.market, 0, st, u, 0.01);
    CAPTURE(seed);
    CHECK(j.tentative.surplus() == doctest::Approx(best_addition(f.market, 0, st, u, 0.01)).epsilon(1e-9));
    grew += !j.added.empty();
  }
  CHECK(grew > 30);
}

TEST_CASE("walrasian check detects planted defects") {
  Fixture f({simple_agent(1, 6.0, 2), simple_agent(2, 5.0, 2), simple_agent(3, 1.5, 2)}, 2, 1, 2);
  const double eps = 0.01;
  const auto a = allocate(f.market, eps);
  REQUIRE(verify_walrasian(f.market, a.slots, a.utility(), eps).ok());

  SUBCASE("dominated bundle") {
    auto slots = a.slots;
    std::vector<double> u(3, 0.0);
    slots[0] = slot_state(f.market, 0, {2}, u);
    const auto rep = verify_walrasian(f.market, slots, u, eps);
    CHECK_FALSE(rep.demand_ok);
    CHECK_FALSE(rep.violations.empty());
  }
  SUBCASE("unassigned agent with positive utility") {
    auto u = a.utility();
    int outside = -1;
    for (int m = 0; m < 3; ++m)
      if (a.holder[m] < 0) outside = m;
    REQUIRE(outside >= 0);
    u[outside] += 1.0;
    const auto rep = verify_walrasian(f.market, a.slots, u, eps);
    CHECK_FALSE(rep.unassigned_zero);
  }
}
