#include "poolmarket/fixtures.hpp"

#include <cmath>
#include <random>

namespace poolmarket::fixtures {

namespace {

Agent make_agent(int id, double alpha, double beta, double theta, DelayFn delay, SizeTable pi, SizeTable gamma) {
  Agent a;
  a.id = id;
  a.alpha = alpha;
  a.beta = beta;
  a.theta = theta;
  a.delay = std::move(delay);
  a.pi = std::move(pi);
  a.gamma = std::move(gamma);
  return a;
}

SizeTable zeros(int n) { return SizeTable(n, Value(0.0)); }

// Portable uniform draw on [lo, hi], rounded to cents.
double draw(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return std::round((lo + (hi - lo) * u) * 100.0) / 100.0;
}

MultiInstance prop4(bool shared) {
  NetworkSpec net;
  net.nodes = {"s1", "s2", "m", "t"};
  if (shared) {
    net.edges = {{"p1", "s1", "m", 1, 1.0}, {"p2", "m", "t", 1, 1.0}, {"p3", "s2", "m", 1, 1.0}};
  } else {
    net.edges = {{"p1", "s1", "m", 1, 1.0}, {"p2", "m", "t", 1, 1.0}, {"p3", "s2", "t", 1, 1.0}};
  }
  net.origin = "s1";
  net.destination = "t";
  net.horizon = 3;
  std::vector<Agent> agents;
  for (int id : {1, 2}) agents.push_back(make_agent(id, 1.0, 0.0, 3.0, DelayFn::hard_deadline(), zeros(1), zeros(1)));
  MarketCosts costs{0.0, 0.0, 1};
  return MultiInstance::build(net, agents, costs, {{1, {1}, "s1", "t"}, {2, {2}, "s2", "t"}});
}

}  // namespace

NetworkSpec wheatstone() {
  NetworkSpec net;
  net.nodes = {"o", "a", "b", "d"};
  net.edges = {{"e1", "o", "a", 1, 1.0},
               {"e2", "a", "d", 1, 2.0},
               {"e3", "o", "b", 1, 2.0},
               {"e4", "b", "d", 1, 1.0},
               {"e5", "a", "b", 4, 0.2}};
  net.origin = "o";
  net.destination = "d";
  net.horizon = 4;
  return net;
}

Instance example1() {
  Instance inst;
  inst.network = Network::validate(wheatstone());
  inst.costs = MarketCosts{0.0, 0.0, 2};
  for (int id = 1; id <= 3; ++id)
    inst.agents.push_back(make_agent(id, 6.0, 1.0, 4.0, DelayFn::hard_deadline(), zeros(2), zeros(2)));
  return inst;
}

Instance example2() {
  NetworkSpec net;
  net.nodes = {"o", "d"};
  net.edges = {{"e1", "o", "d", 1, 1.0}, {"e2", "o", "d", 1, 1.0}};
  net.origin = "o";
  net.destination = "d";
  net.horizon = 2;
  Instance inst;
  inst.network = Network::validate(net);
  inst.costs = MarketCosts{0.0, 0.0, 6};
  SizeTable low, high;
  for (int n = 1; n <= 6; ++n) {
    low.push_back(n <= 5 ? 0.25 * (n - 1) : 0.5 * (n - 1));
    high.push_back(n <= 4 ? Value(2.0 * (n - 1)) : Value::infeasible());
  }
  for (int id = 1; id <= 6; ++id)
    inst.agents.push_back(make_agent(id, 50.0, 1.0 / 6.0, 3.0, DelayFn::hard_deadline(), low, zeros(6)));
  for (int id = 7; id <= 12; ++id)
    inst.agents.push_back(make_agent(id, 100.0, 0.5, 3.0, DelayFn::hard_deadline(), high, zeros(6)));
  return inst;
}

std::map<std::uint32_t, double> footnote_table() {
  return {{0b001, 40.0}, {0b010, 40.0}, {0b100, 70.0}, {0b011, 80.0},
          {0b101, 70.0}, {0b110, 70.0}, {0b111, 80.0}};
}

MultiInstance prop4_disjoint() { return prop4(false); }
MultiInstance prop4_shared() { return prop4(true); }

MultiInstance bay_mini(std::uint64_t seed) {
  NetworkSpec net;
  net.nodes = {"oakland", "hayward", "san_mateo", "hub", "san_francisco"};
  net.edges = {{"a1", "oakland", "hub", 2, 1.0},       {"a2", "hayward", "hub", 2, 1.0},
               {"a3", "san_mateo", "hub", 1, 1.0},     {"a4", "san_mateo", "san_francisco", 1, 2.0},
               {"b1", "hub", "san_francisco", 2, 1.0}, {"b2", "hub", "san_francisco", 2, 2.0}};
  net.origin = "oakland";
  net.destination = "san_francisco";
  net.horizon = 6;

  constexpr int kCapacity = 6;
  constexpr double kTick = 10.0;  // minutes
  SizeTable pi_l, pi_m, pi_h;
  for (int n = 1; n <= kCapacity; ++n) {
    pi_l.push_back(n <= 5 ? 0.25 * (n - 1) : 0.5 * (n - 1));
    pi_m.push_back(n <= 3 ? Value(2.0 * (n - 1)) : n == 4 ? Value(4.0 * (n - 1)) : Value::infeasible());
    pi_h.push_back(n <= 2 ? Value(4.0 * (n - 1)) : n == 3 ? Value(8.0 * (n - 1)) : Value::infeasible());
  }
  struct Class {
    int population;
    const char* origin;
    int count;
    double alpha_lo, alpha_hi, beta_per_minute;
    const SizeTable* pi;
  };
  const Class classes[] = {{1, "oakland", 12, 30.0, 70.0, 10.0 / 60.0, &pi_l},
                           {2, "hayward", 9, 80.0, 120.0, 30.0 / 60.0, &pi_m},
                           {3, "san_mateo", 9, 180.0, 220.0, 90.0 / 60.0, &pi_h}};

  std::mt19937_64 rng(seed);
  std::vector<Agent> agents;
  std::vector<PopulationSpec> pops;
  int id = 1;
  for (const auto& c : classes) {
    PopulationSpec ps{c.population, {}, c.origin, "san_francisco"};
    for (int k = 0; k < c.count; ++k, ++id) {
      const double alpha = draw(rng, c.alpha_lo, c.alpha_hi);
      const double theta = draw(rng, 40.0, 60.0) / kTick;
      agents.push_back(make_agent(id, alpha, c.beta_per_minute * kTick, theta, DelayFn::linear(kTick), *c.pi,
                                  zeros(kCapacity)));
      ps.members.push_back(id);
    }
    pops.push_back(std::move(ps));
  }
  return MultiInstance::build(net, std::move(agents), MarketCosts{0.0, 0.0, kCapacity}, std::move(pops));
}

bool is_fixture_name(const std::string& name) {
  return name == "example1" || name == "example2" || name == "gs-footnote" || name == "bay-mini";
}

}  // namespace poolmarket::fixtures
