#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "poolmarket/instance.hpp"
#include "poolmarket/multipop.hpp"
#include "poolmarket/network.hpp"

namespace poolmarket::testing {

struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine); }
  bool coin() { return uniform(0, 1) == 1; }
};

/// Random two-terminal series-parallel network with `edges` edges, integer
/// travel times in [1, max_time] and capacities in [1, max_cap].
inline NetworkSpec random_sp_network(Rng& rng, int edges, int horizon, int max_time = 2, int max_cap = 2) {
  NetworkSpec net;
  net.nodes = {"s", "t"};
  net.origin = "s";
  net.destination = "t";
  net.horizon = horizon;
  int next_edge = 1;
  auto build = [&](auto&& self, const std::string& tail, const std::string& head, int k) -> void {
    if (k == 1) {
      net.edges.push_back({"e" + std::to_string(next_edge++), tail, head, rng.uniform(1, max_cap),
                           static_cast<double>(rng.uniform(1, max_time))});
      return;
    }
    const int left = rng.uniform(1, k - 1);
    if (rng.coin()) {
      const std::string mid = "v" + std::to_string(net.nodes.size());
      net.nodes.push_back(mid);
      self(self, tail, mid, left);
      self(self, mid, head, k - left);
    } else {
      self(self, tail, head, left);
      self(self, tail, head, k - left);
    }
  };
  build(build, "s", "t", edges);
  return net;
}

/// Convex nonnegative table with entry 0 equal to 0; optionally Infeasible
/// from some size on.
inline SizeTable random_convex_table(Rng& rng, int capacity, int max_step, bool allow_cutoff) {
  SizeTable t{Value(0.0)};
  int step = rng.uniform(0, max_step);
  double v = 0.0;
  const int cutoff = allow_cutoff && rng.uniform(0, 3) == 0 ? rng.uniform(2, capacity + 1) : capacity + 1;
  for (int n = 2; n <= capacity; ++n) {
    if (n >= cutoff) {
      t.push_back(Value::infeasible());
      continue;
    }
    v += step;
    t.push_back(Value(v));
    step += rng.uniform(0, 1);
  }
  return t;
}

/// Homogeneous agents with integer parameters.
inline std::vector<Agent> random_agents(Rng& rng, int count, int capacity, int horizon, int first_id = 1) {
  const SizeTable pi = random_convex_table(rng, capacity, 1, true);
  const SizeTable gamma = rng.uniform(0, 2) == 0 ? random_convex_table(rng, capacity, 1, false) : SizeTable(capacity, 0.0);
  std::vector<Agent> agents;
  for (int k = 0; k < count; ++k) {
    Agent a;
    a.id = first_id + k;
    a.alpha = rng.uniform(3, 14);
    a.beta = rng.uniform(0, 1);
    a.theta = rng.uniform(std::min(2, horizon), horizon);
    a.delay = rng.uniform(0, 3) == 0 ? DelayFn::hard_deadline() : DelayFn::linear(rng.uniform(0, 2));
    a.pi = pi;
    a.gamma = gamma;
    agents.push_back(std::move(a));
  }
  return agents;
}

/// Single-market SP instance at oracle scale: at most 5 edges, 6 agents,
/// horizon 5.
inline Instance random_sp_instance(std::uint64_t seed) {
  Rng rng(seed);
  const int horizon = rng.uniform(2, 5);
  Instance inst;
  inst.network = Network::validate(random_sp_network(rng, rng.uniform(1, 5), horizon, 2, rng.uniform(1, 2)));
  inst.costs.vehicle_capacity = rng.uniform(1, 3);
  inst.costs.sigma = rng.uniform(0, 1);
  inst.costs.delta = rng.uniform(0, 1);
  inst.agents = random_agents(rng, rng.uniform(2, 6), inst.costs.vehicle_capacity, horizon);
  return inst;
}

/// Two populations with different origin-destination pairs on a random
/// acyclic graph with at most 3 edges over nodes a < b < c < d.
inline MultiInstance random_two_population(std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<std::string> names{"a", "b", "c", "d"};
  for (;;) {
    NetworkSpec net;
    net.nodes = names;
    net.horizon = rng.uniform(2, 4);
    const int m = rng.uniform(2, 3);
    for (int k = 0; k < m; ++k) {
      const int u = rng.uniform(0, 2);
      const int v = rng.uniform(u + 1, 3);
      net.edges.push_back({"e" + std::to_string(k + 1), names[u], names[v], rng.uniform(0, 3) == 0 ? 2 : 1,
                           static_cast<double>(rng.uniform(1, 2))});
    }
    net.origin = net.edges.front().tail;
    net.destination = net.edges.front().head;
    // Origin-destination pairs joined by at least one path.
    std::vector<std::pair<int, int>> pairs;
    for (int o = 0; o < 4; ++o)
      for (int d = o + 1; d < 4; ++d) {
        std::vector<bool> seen(4, false);
        seen[o] = true;
        for (int pass = 0; pass < 4; ++pass)
          for (const auto& e : net.edges) {
            const int u = e.tail[0] - 'a', v = e.head[0] - 'a';
            if (seen[u]) seen[v] = true;
          }
        if (seen[d]) pairs.emplace_back(o, d);
      }
    if (pairs.size() < 2) continue;
    const int p1 = rng.uniform(0, static_cast<int>(pairs.size()) - 1);
    int p2 = rng.uniform(0, static_cast<int>(pairs.size()) - 2);
    if (p2 >= p1) ++p2;
    const int capacity = rng.uniform(1, 3);
    const int n1 = rng.uniform(2, 3), n2 = rng.uniform(2, 3);
    auto agents = random_agents(rng, n1, capacity, net.horizon, 1);
    for (auto& a : random_agents(rng, n2, capacity, net.horizon, 1 + n1)) agents.push_back(std::move(a));
    std::vector<int> m1, m2;
    for (int k = 1; k <= n1; ++k) m1.push_back(k);
    for (int k = n1 + 1; k <= n1 + n2; ++k) m2.push_back(k);
    MarketCosts costs{static_cast<double>(rng.uniform(0, 1)), 0.0, capacity};
    try {
      return MultiInstance::build(net, std::move(agents), costs,
                                  {{1, m1, names[pairs[p1].first], names[pairs[p1].second]},
                                   {2, m2, names[pairs[p2].first], names[pairs[p2].second]}});
    } catch (const Error&) {
      continue;
    }
  }
}

}  // namespace poolmarket::testing
