#include "poolmarket/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <sstream>

#include "poolmarket/common.hpp"
#include "poolmarket/lp.hpp"

namespace poolmarket::oracle {

Problem Problem::from_instance(const Instance& inst) {
  Problem p;
  p.agents = inst.agents;
  p.routes = enumerate_routes(inst.network);
  p.costs = inst.costs;
  p.horizon = inst.network.horizon();
  p.resources = ResourceModel::edge_ticks(inst.network, p.routes, p.horizon);
  return p;
}

Problem Problem::with_route_counts(const Instance& inst, std::span<const Route> routes,
                                   const std::vector<std::vector<int>>& counts) {
  Problem p;
  p.agents = inst.agents;
  p.routes.assign(routes.begin(), routes.end());
  p.costs = inst.costs;
  p.horizon = inst.network.horizon();
  p.resources = ResourceModel::route_slots(p.routes, counts, p.horizon);
  return p;
}

namespace {

void check_limits(const Problem& p, const Limits& limits) {
  if (p.agents.size() > limits.max_agents || p.routes.size() > limits.max_routes || p.horizon > limits.max_horizon) {
    std::ostringstream os;
    os << p.agents.size() << " agents, " << p.routes.size() << " routes, horizon " << p.horizon
       << " exceeds oracle limits (" << limits.max_agents << ", " << limits.max_routes << ", " << limits.max_horizon
       << ")";
    throw Error(ErrorCode::InstanceTooLarge, os.str());
  }
}

bool resources_open(const Problem& p, const Trip& t) {
  for (int res : p.resources.uses(t.route, t.departure))
    if (p.resources.capacity(res) <= 0) return false;
  return !p.resources.uses(t.route, t.departure).empty();
}

}  // namespace

std::vector<Trip> feasible_trips(const Problem& p, std::size_t cap) {
  const std::size_t bound =
      count_trip_candidates(p.agents.size(), p.routes.size(), p.horizon, p.costs.vehicle_capacity);
  if (bound > cap)
    throw Error(ErrorCode::InstanceTooLarge,
                std::to_string(bound) + " trip candidates exceed the cap of " + std::to_string(cap));
  const auto groups = subsets_up_to(static_cast<int>(p.agents.size()), p.costs.vehicle_capacity);
  std::vector<Trip> out;
  for (std::size_t r = 0; r < p.routes.size(); ++r) {
    for (int z = 1; z <= p.horizon; ++z) {
      if (!arrives_within(z, p.routes[r].total_time, p.horizon)) continue;
      for (const auto& g : groups) {
        const Value v = trip_value(p.agents, g, z, p.routes[r], p.costs);
        if (!v.feasible()) continue;
        out.push_back({z, static_cast<int>(r), g, v.amount()});
      }
    }
  }
  return out;
}

IpResult ip_optimum(const Problem& p, const Limits& limits) {
  check_limits(p, limits);
  const int M = static_cast<int>(p.agents.size());
  std::vector<Trip> trips;
  for (auto& t : feasible_trips(p, limits.max_columns))
    if (t.value > kMoneyTol && resources_open(p, t)) trips.push_back(std::move(t));

  std::vector<std::vector<int>> by_leader(M);
  std::vector<double> best_share(M, 0.0);
  for (std::size_t k = 0; k < trips.size(); ++k) {
    const Trip& t = trips[k];
    by_leader[t.group.front()].push_back(static_cast<int>(k));
    const int n = static_cast<int>(t.group.size());
    const double seat = trip_cost(p.routes[t.route], 1, p.costs);
    for (int m : t.group) {
      const Value v = agent_trip_value(p.agents[m], t.departure, p.routes[t.route], n, p.costs);
      best_share[m] = std::max(best_share[m], v.amount() - seat);
    }
  }

  IpResult res;
  std::vector<char> assigned(M, 0);
  std::vector<long long> used(p.resources.size(), 0);
  std::vector<int> chosen;
  double value = 0.0;

  std::function<void(int)> dfs = [&](int i) {
    ++res.nodes;
    while (i < M && assigned[i]) ++i;
    if (i == M) {
      if (value > res.welfare + kMoneyTol) {
        res.welfare = value;
        res.trips.clear();
        for (int k : chosen) res.trips.push_back(trips[k]);
      }
      return;
    }
    double bound = value;
    for (int m = i; m < M; ++m)
      if (!assigned[m]) bound += best_share[m];
    if (bound <= res.welfare + kMoneyTol) return;

    for (int k : by_leader[i]) {
      const Trip& t = trips[k];
      if (std::any_of(t.group.begin(), t.group.end(), [&](int m) { return assigned[m]; })) continue;
      const auto& uses = p.resources.uses(t.route, t.departure);
      if (std::any_of(uses.begin(), uses.end(), [&](int r) { return used[r] >= p.resources.capacity(r); })) continue;
      for (int m : t.group) assigned[m] = 1;
      for (int r : uses) ++used[r];
      chosen.push_back(k);
      value += t.value;
      dfs(i + 1);
      value -= t.value;
      chosen.pop_back();
      for (int r : uses) --used[r];
      for (int m : t.group) assigned[m] = 0;
    }
    assigned[i] = 1;  // i stays home
    dfs(i + 1);
    assigned[i] = 0;
  };
  dfs(0);
  return res;
}

std::vector<std::pair<Trip, double>> LpResult::support(double tol) const {
  std::vector<std::pair<Trip, double>> out;
  for (std::size_t k = 0; k < columns.size(); ++k)
    if (x[k] > tol) out.emplace_back(columns[k], x[k]);
  return out;
}

LpResult lp_optimum(const Problem& p, const Limits& limits) {
  check_limits(p, limits);
  LpResult res;
  for (auto& t : feasible_trips(p, limits.max_columns))
    if (t.value > kMoneyTol && resources_open(p, t)) res.columns.push_back(std::move(t));

  lp::LinearProgram prog(lp::Sense::Maximize);
  for (const auto& t : res.columns) prog.add_variable(t.value);
  const std::size_t M = p.agents.size();
  std::vector<std::vector<std::pair<int, double>>> agent_terms(M), res_terms(p.resources.size());
  for (std::size_t k = 0; k < res.columns.size(); ++k) {
    const Trip& t = res.columns[k];
    for (int m : t.group) agent_terms[m].emplace_back(static_cast<int>(k), 1.0);
    for (int r : p.resources.uses(t.route, t.departure)) res_terms[r].emplace_back(static_cast<int>(k), 1.0);
  }
  for (std::size_t m = 0; m < M; ++m) prog.add_row(agent_terms[m], lp::Relation::LessEqual, 1.0);
  for (std::size_t r = 0; r < p.resources.size(); ++r)
    prog.add_row(res_terms[r], lp::Relation::LessEqual, static_cast<double>(p.resources.capacity(r)));

  const auto sol = lp::solve(prog);
  if (!sol.optimal()) throw Error(ErrorCode::NumericalBreakdown, "trip LP did not solve to optimality");
  res.welfare = sol.value;
  res.x = sol.primal;
  for (double v : res.x)
    if (std::fabs(v - std::round(v)) > 1e-6) res.fractional = true;
  res.agent_dual.assign(sol.dual.begin(), sol.dual.begin() + static_cast<long>(M));
  res.resource_dual.assign(sol.dual.begin() + static_cast<long>(M), sol.dual.end());
  return res;
}

std::vector<DualPoint> dual_vertex_sample(const Problem& p, int count, std::uint64_t seed, const Limits& limits) {
  check_limits(p, limits);
  std::vector<Trip> trips;
  for (auto& t : feasible_trips(p, limits.max_columns))
    if (t.value > kMoneyTol && resources_open(p, t)) trips.push_back(std::move(t));

  const int M = static_cast<int>(p.agents.size());
  const int R = static_cast<int>(p.resources.size());
  double vmax = 1.0;
  for (const auto& t : trips) vmax = std::max(vmax, t.value);

  lp::LinearProgram base(lp::Sense::Minimize);
  for (int m = 0; m < M; ++m) base.add_variable(1.0, 0.0, vmax + 1.0);
  for (int r = 0; r < R; ++r) base.add_variable(static_cast<double>(p.resources.capacity(r)), 0.0, vmax + 1.0);
  for (const auto& t : trips) {
    std::vector<std::pair<int, double>> terms;
    for (int m : t.group) terms.emplace_back(m, 1.0);
    for (int r : p.resources.uses(t.route, t.departure)) terms.emplace_back(M + r, 1.0);
    base.add_row(std::move(terms), lp::Relation::GreaterEqual, t.value);
  }
  const auto first = lp::solve(base);
  if (!first.optimal()) throw Error(ErrorCode::NumericalBreakdown, "dual program did not solve");
  const double dstar = first.value;

  std::vector<std::pair<int, double>> objective_row;
  for (int v = 0; v < M + R; ++v) objective_row.emplace_back(v, base.costs()[v]);
  base.add_row(objective_row, lp::Relation::LessEqual, dstar + 1e-7);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(-1.0, 1.0);
  std::vector<DualPoint> out;
  for (int s = 0; s < count; ++s) {
    lp::LinearProgram prog = base;
    for (int v = 0; v < M + R; ++v) prog.set_cost(v, weight(rng));
    const auto sol = lp::solve(prog);
    if (!sol.optimal()) throw Error(ErrorCode::NumericalBreakdown, "dual sample did not solve");
    DualPoint d;
    d.utility.assign(sol.primal.begin(), sol.primal.begin() + M);
    d.price.assign(sol.primal.begin() + M, sol.primal.end());
    for (double u : d.utility) d.objective += u;
    for (int r = 0; r < R; ++r) d.objective += static_cast<double>(p.resources.capacity(r)) * d.price[r];
    out.push_back(std::move(d));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Set-function audits

ValueOracle ValueOracle::from_table(int n, std::map<std::uint32_t, double> table) {
  ValueOracle f;
  f.n_ = n;
  table.emplace(0u, 0.0);
  f.table_ = std::move(table);
  return f;
}

ValueOracle ValueOracle::from_function(int n, std::function<double(std::uint32_t)> fn) {
  ValueOracle f;
  f.n_ = n;
  f.fn_ = std::move(fn);
  return f;
}

double ValueOracle::operator()(std::uint32_t mask) const {
  if (table_) {
    auto it = table_->find(mask);
    if (it == table_->end())
      throw Error(ErrorCode::OracleIncomplete, "value table has no entry for " + mask_to_string(mask));
    return it->second;
  }
  return mask == 0 ? 0.0 : fn_(mask);
}

ValueOracle augmented_oracle(std::span<const Agent> agents, std::vector<int> members, int z, const Route& route,
                             const MarketCosts& costs) {
  std::vector<Agent> pool(agents.begin(), agents.end());
  const int n = static_cast<int>(members.size());
  return ValueOracle::from_function(n, [pool, members, z, route, costs](std::uint32_t mask) {
    double best = 0.0;
    // Enumerate submasks of `mask` with at most A bits.
    for (std::uint32_t sub = mask; sub; sub = (sub - 1) & mask) {
      if (std::popcount(sub) > costs.vehicle_capacity) continue;
      std::vector<int> group;
      for (int i = 0; i < static_cast<int>(members.size()); ++i)
        if (sub >> i & 1u) group.push_back(members[i]);
      const Value v = trip_value(pool, group, z, route, costs);
      if (v.feasible()) best = std::max(best, v.amount());
    }
    return best;
  });
}

std::string mask_to_string(std::uint32_t mask, int base_index) {
  std::string s = "{";
  bool first = true;
  for (int i = 0; i < 32; ++i) {
    if (!(mask >> i & 1u)) continue;
    if (!first) s += ",";
    s += std::to_string(i + base_index);
    first = false;
  }
  return s + "}";
}

std::string GsViolation::to_string() const {
  std::ostringstream os;
  if (condition == 1) {
    os << "condition (i): f(" << i + 1 << "|" << mask_to_string(larger) << ") = " << lhs << " > f(" << i + 1 << "|"
       << mask_to_string(base) << ") = " << rhs1;
  } else {
    os << "condition (ii) at b=" << mask_to_string(base) << ", i=" << i + 1 << ", j=" << j + 1 << ", k=" << k + 1
       << ": " << lhs << " > max(" << rhs1 << ", " << rhs2 << ")";
  }
  return os.str();
}

GsReport gs_check(const ValueOracle& f, double tol) {
  const int n = f.ground_size();
  if (n > 10) throw Error(ErrorCode::TooLarge, "gs_check supports at most 10 elements");
  const std::uint32_t full = (1u << n) - 1u;
  std::vector<double> v(full + 1);
  for (std::uint32_t s = 0; s <= full; ++s) v[s] = f(s);
  auto marg = [&](int i, std::uint32_t b) { return v[b | (1u << i)] - v[b]; };

  GsReport rep;
  for (std::uint32_t big = 0; big <= full && !rep.condition1; ++big) {
    // Submasks of `big` in increasing order.
    std::vector<std::uint32_t> subs;
    for (std::uint32_t s = big;; s = (s - 1) & big) {
      subs.push_back(s);
      if (s == 0) break;
    }
    std::reverse(subs.begin(), subs.end());
    for (std::uint32_t small : subs) {
      for (int i = 0; i < n; ++i) {
        if (big >> i & 1u) continue;
        if (marg(i, big) > marg(i, small) + tol) {
          rep.condition1 = GsViolation{1, small, big, i, -1, -1, marg(i, big), marg(i, small), 0.0};
          break;
        }
      }
      if (rep.condition1) break;
    }
  }
  for (std::uint32_t b = 0; b <= full && !rep.condition2; ++b) {
    for (int i = 0; i < n && !rep.condition2; ++i) {
      if (b >> i & 1u) continue;
      for (int j = i + 1; j < n && !rep.condition2; ++j) {
        if (b >> j & 1u) continue;
        for (int k = 0; k < n; ++k) {
          if ((b >> k & 1u) || k == i || k == j) continue;
          const std::uint32_t bi = 1u << i, bj = 1u << j, bk = 1u << k;
          const double lhs = (v[b | bi | bj] - v[b]) + marg(k, b);
          const double r1 = marg(i, b) + (v[b | bj | bk] - v[b]);
          const double r2 = marg(j, b) + (v[b | bi | bk] - v[b]);
          if (lhs > std::max(r1, r2) + tol) {
            rep.condition2 = GsViolation{2, b, 0, i, j, k, lhs, r1, r2};
            break;
          }
        }
      }
    }
  }
  return rep;
}

MonotonicityReport monotonicity_check(const ValueOracle& f, double tol) {
  const int n = f.ground_size();
  if (n > 20) throw Error(ErrorCode::TooLarge, "monotonicity_check supports at most 20 elements");
  MonotonicityReport rep;
  const std::uint32_t full = (1u << n) - 1u;
  std::vector<double> v(full + 1);
  for (std::uint32_t s = 0; s <= full; ++s) v[s] = f(s);
  for (std::uint32_t s = 0; s <= full; ++s) {
    for (int i = 0; i < n; ++i) {
      if (s >> i & 1u) continue;
      if (v[s | (1u << i)] < v[s] - tol) {
        rep = {false, s, i, v[s], v[s | (1u << i)]};
        return rep;
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Time-expanded max flow (Dinic)

namespace {

struct FlowGraph {
  struct Arc {
    int to;
    long long cap;
  };
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> adj;
  std::vector<int> level, next;

  explicit FlowGraph(int n) : adj(n), level(n), next(n) {}

  void add(int u, int v, long long cap) {
    adj[u].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({v, cap});
    adj[v].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({u, 0});
  }

  bool bfs(int s, int t) {
    std::fill(level.begin(), level.end(), -1);
    std::queue<int> q;
    level[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int a : adj[u]) {
        if (arcs[a].cap > 0 && level[arcs[a].to] < 0) {
          level[arcs[a].to] = level[u] + 1;
          q.push(arcs[a].to);
        }
      }
    }
    return level[t] >= 0;
  }

  long long dfs(int u, int t, long long pushed) {
    if (u == t) return pushed;
    for (int& i = next[u]; i < static_cast<int>(adj[u].size()); ++i) {
      const int a = adj[u][i];
      const int v = arcs[a].to;
      if (arcs[a].cap <= 0 || level[v] != level[u] + 1) continue;
      const long long got = dfs(v, t, std::min(pushed, arcs[a].cap));
      if (got > 0) {
        arcs[a].cap -= got;
        arcs[a ^ 1].cap += got;
        return got;
      }
    }
    return 0;
  }

  long long maxflow(int s, int t) {
    long long flow = 0;
    while (bfs(s, t)) {
      std::fill(next.begin(), next.end(), 0);
      while (long long f = dfs(s, t, std::numeric_limits<long long>::max())) flow += f;
    }
    return flow;
  }
};

}  // namespace

long long time_expanded_maxflow(const Network& net, int t) {
  if (t < 1) return 0;
  const long long nodes = static_cast<long long>(net.node_count()) * t + 2;
  if (nodes > 10'000) throw Error(ErrorCode::TooLarge, "time-expanded network has " + std::to_string(nodes) + " nodes");
  const int n = net.node_count();
  auto id = [&](int v, int k) { return v * t + (k - 1); };
  const int source = n * t;
  const int sink = source + 1;
  const long long inf = std::numeric_limits<long long>::max() / 4;
  FlowGraph g(static_cast<int>(nodes));
  for (const auto& e : net.edges()) {
    const int dur = static_cast<int>(std::ceil(e.travel_time - kTimeTol));
    for (int k = 1; k + dur <= t; ++k) g.add(id(e.tail, k), id(e.head, k + dur), e.capacity);
  }
  for (int v = 0; v < n; ++v)
    for (int k = 1; k < t; ++k) g.add(id(v, k), id(v, k + 1), inf);
  g.add(source, id(net.origin(), 1), inf);
  g.add(id(net.destination(), t), sink, inf);
  return g.maxflow(source, sink);
}

}  // namespace poolmarket::oracle
