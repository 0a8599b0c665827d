#include "poolmarket/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "poolmarket/lp.hpp"
#include "poolmarket/oracle.hpp"

namespace poolmarket {

namespace {

constexpr std::size_t kMaxViolations = 20;

void note(std::vector<std::string>& out, const std::string& msg) {
  if (out.size() < kMaxViolations) out.push_back(msg);
}

std::string trip_label(const Instance& inst, std::span<const Route> routes, int r, int z,
                       std::span<const int> group) {
  std::ostringstream os;
  os << "(z=" << z << ", " << route_label(inst.network, routes[r]) << ", {";
  for (std::size_t i = 0; i < group.size(); ++i) os << (i ? "," : "") << inst.agents[group[i]].id;
  os << "})";
  return os.str();
}

bool homogeneous(std::span<const Agent> agents, int capacity) {
  for (std::size_t m = 1; m < agents.size(); ++m)
    if (!same_disutility(agents[0], agents[m], capacity)) return false;
  return true;
}

// max over feasible groups of V(b) - sum u, at least 0.
double best_surplus(std::span<const Agent> agents, bool homog, int z, const Route& route, const MarketCosts& costs,
                    std::span<const double> utility) {
  if (agents.empty()) return 0.0;
  if (homog) {
    std::vector<int> all(agents.size());
    for (std::size_t m = 0; m < all.size(); ++m) all[m] = static_cast<int>(m);
    return best_response_group(agents, all, z, route, costs, utility).value;
  }
  double best = 0.0;
  for (const auto& g : subsets_up_to(static_cast<int>(agents.size()), costs.vehicle_capacity)) {
    const Value v = trip_value(agents, g, z, route, costs);
    if (!v.feasible()) continue;
    double s = v.amount();
    for (int m : g) s -= utility[m];
    best = std::max(best, s);
  }
  return best;
}

double epsilon_for(const Instance& inst, const SolveOptions& options) {
  if (options.epsilon) return *options.epsilon;
  if (inst.epsilon) return *inst.epsilon;
  return default_epsilon(inst.agents.size());
}

}  // namespace

std::vector<Trip> build_trip_vector(const SlotMarket& market, const Allocation& allocation) {
  std::vector<Trip> trips;
  std::vector<int> rides(market.num_agents(), 0);
  for (std::size_t l = 0; l < allocation.slots.size(); ++l) {
    const auto& rep = allocation.slots[l].representative;
    if (rep.empty()) continue;
    const Slot& s = market.slot(l);
    const Value v = trip_value(market.agents(), rep, s.departure, market.routes()[s.route], market.costs());
    if (!v.feasible())
      throw Error(ErrorCode::CapacityViolation, "slot " + std::to_string(l) + " carries an infeasible group");
    for (int m : rep)
      if (++rides[m] > 1)
        throw Error(ErrorCode::CapacityViolation, "agent index " + std::to_string(m) + " is placed in two trips");
    trips.push_back({s.departure, s.route, rep, v.amount()});
  }
  return trips;
}

std::vector<std::vector<double>> route_prices(const SlotMarket& market, const Allocation& allocation,
                                              std::span<const double> utility, int horizon, double* spread) {
  const auto routes = market.routes();
  std::vector<std::vector<double>> lo(routes.size(), std::vector<double>(horizon, INFINITY));
  std::vector<std::vector<double>> hi(routes.size(), std::vector<double>(horizon, -INFINITY));
  for (std::size_t l = 0; l < allocation.slots.size(); ++l) {
    const Slot& s = market.slot(l);
    const SlotState& st = allocation.slots[l];
    double surplus = st.value;
    for (int m : st.representative) surplus -= utility[m];
    surplus = std::max(0.0, surplus);
    lo[s.route][s.departure - 1] = std::min(lo[s.route][s.departure - 1], surplus);
    hi[s.route][s.departure - 1] = std::max(hi[s.route][s.departure - 1], surplus);
  }
  const bool homog = homogeneous(market.agents(), market.costs().vehicle_capacity);
  std::vector<std::vector<double>> price(routes.size(), std::vector<double>(horizon, 0.0));
  double worst = 0.0;
  for (std::size_t r = 0; r < routes.size(); ++r) {
    for (int z = 1; z <= horizon; ++z) {
      if (!arrives_within(z, routes[r].total_time, horizon)) continue;
      if (std::isfinite(hi[r][z - 1])) {
        price[r][z - 1] = hi[r][z - 1];
        worst = std::max(worst, hi[r][z - 1] - lo[r][z - 1]);
      } else {
        price[r][z - 1] = best_surplus(market.agents(), homog, z, routes[r], market.costs(), utility);
      }
    }
  }
  if (spread) *spread = worst;
  return price;
}

std::vector<double> payments(std::span<const Agent> agents, std::span<const Route> routes, std::span<const Trip> trips,
                             std::span<const double> utility, const MarketCosts& costs) {
  std::vector<double> p(agents.size(), 0.0);
  for (const auto& t : trips) {
    const int n = static_cast<int>(t.group.size());
    for (int m : t.group)
      p[m] = agent_trip_value(agents[m], t.departure, routes[t.route], n, costs).amount() - utility[m];
  }
  return p;
}

std::vector<double> utilities_from_payments(std::span<const Agent> agents, std::span<const Route> routes,
                                            std::span<const Trip> trips, std::span<const double> payment,
                                            const MarketCosts& costs) {
  std::vector<double> u(agents.size());
  for (std::size_t m = 0; m < agents.size(); ++m) u[m] = -payment[m];
  for (const auto& t : trips) {
    const int n = static_cast<int>(t.group.size());
    for (int m : t.group) u[m] += agent_trip_value(agents[m], t.departure, routes[t.route], n, costs).amount();
  }
  return u;
}

double welfare_of(std::span<const Agent> agents, std::span<const Route> routes, std::span<const Trip> trips,
                  const MarketCosts& costs) {
  double s = 0.0;
  for (const auto& t : trips) s += trip_value(agents, t.group, t.departure, routes[t.route], costs).amount();
  return s;
}

Outcome solve_on_slots(const Instance& inst, std::span<const Route> routes, const std::vector<std::vector<int>>& counts,
                       const SolveOptions& options) {
  inst.check();
  const int T = inst.network.horizon();
  Outcome out;
  out.routes.assign(routes.begin(), routes.end());
  out.epsilon = epsilon_for(inst, options);
  out.slots = slots_from_counts(routes, counts, T);
  out.prices.mode = PriceMode::Route;
  out.prices.route_capacity.assign(routes.size(), std::vector<int>(T, 0));
  for (const auto& s : out.slots.slots) ++out.prices.route_capacity[s.route][s.departure - 1];

  SlotMarket market(inst.agents, routes, out.slots, inst.costs);
  out.allocation = allocate(market, out.epsilon, options.auction);
  out.trips = build_trip_vector(market, out.allocation);
  out.welfare = welfare_of(inst.agents, routes, out.trips, inst.costs);

  // Agents that ride keep their auction utility; everyone else gets 0.
  const auto auction_u = out.allocation.utility();
  std::vector<double> u(inst.agents.size(), 0.0);
  for (const auto& t : out.trips)
    for (int m : t.group) u[m] = auction_u[m];
  out.prices.utility = u;
  out.prices.route_price = route_prices(market, out.allocation, u, T, &out.price_spread);
  out.prices.payment = payments(inst.agents, routes, out.trips, u, inst.costs);
  return out;
}

Outcome solve(const Instance& inst, const SolveOptions& options) {
  const auto routes = enumerate_routes(inst.network);
  const auto w = greedy_route_capacity(inst.network, routes);
  const int T = inst.network.horizon();
  std::vector<std::vector<int>> counts(routes.size(), std::vector<int>(T, 0));
  for (std::size_t r = 0; r < routes.size(); ++r)
    for (int z = 1; z <= T; ++z)
      if (arrives_within(z, routes[r].total_time, T)) counts[r][z - 1] = w.capacity[r];
  Outcome out = solve_on_slots(inst, routes, counts, options);
  out.capacity = w;
  out.series_parallel = is_series_parallel(inst.network).series_parallel;
  return out;
}

EquilibriumReport verify_equilibrium(const Instance& inst, std::span<const Route> routes, std::span<const Trip> trips,
                                     const PriceSystem& prices, double epsilon, const VerifyOptions& options) {
  EquilibriumReport rep;
  const auto& agents = inst.agents;
  const std::size_t M = agents.size();
  const int T = inst.network.horizon();
  const int A = inst.costs.vehicle_capacity;
  rep.tolerance = epsilon * static_cast<double>(M) + 1e-6;
  const double tol = rep.tolerance;

  const bool edge = prices.mode == PriceMode::Edge;
  ResourceModel rm;
  if (edge) rm = ResourceModel::edge_ticks(inst.network, routes, T);
  auto price_of = [&](int r, int z) {
    if (edge) {
      double s = 0.0;
      for (int res : rm.uses(r, z)) s += prices.toll[res];
      return s;
    }
    return prices.route_price[r][z - 1];
  };

  // Trip feasibility (folded into market clearing).
  std::vector<int> rides(M, 0);
  for (const auto& t : trips) {
    if (!arrives_within(t.departure, routes[t.route].total_time, T)) {
      rep.market_clearing = false;
      note(rep.violations, "trip " + trip_label(inst, routes, t.route, t.departure, t.group) + " misses the horizon");
    }
    for (int m : t.group) ++rides[m];
  }
  for (std::size_t m = 0; m < M; ++m) {
    if (rides[m] > 1) {
      rep.market_clearing = false;
      note(rep.violations, "agent " + std::to_string(agents[m].id) + " is in " + std::to_string(rides[m]) + " trips");
    }
  }
  if (edge) {
    std::vector<long long> used(rm.size(), 0);
    for (const auto& t : trips)
      for (int res : rm.uses(t.route, t.departure)) ++used[res];
    for (std::size_t res = 0; res < rm.size(); ++res) {
      const double tau = prices.toll[res];
      if (used[res] > rm.capacity(res)) {
        rep.market_clearing = false;
        note(rep.violations, "edge-tick " + rm.label(res) + " over capacity");
      }
      if (tau < -tol) {
        rep.market_clearing = false;
        note(rep.violations, "negative toll on " + rm.label(res));
      }
      if (tau > tol && used[res] < rm.capacity(res)) {
        rep.market_clearing = false;
        std::ostringstream os;
        os << "toll " << tau << " on " << rm.label(res) << " with " << used[res] << " of " << rm.capacity(res)
           << " used";
        note(rep.violations, os.str());
      }
    }
  } else {
    std::vector<std::vector<int>> used(routes.size(), std::vector<int>(T, 0));
    for (const auto& t : trips) ++used[t.route][t.departure - 1];
    for (std::size_t r = 0; r < routes.size(); ++r) {
      for (int z = 1; z <= T; ++z) {
        const double lambda = prices.route_price[r][z - 1];
        const int cap = prices.route_capacity[r][z - 1];
        const int n = used[r][z - 1];
        std::ostringstream os;
        os << route_label(inst.network, routes[r]) << " at z=" << z;
        if (n > cap) {
          rep.market_clearing = false;
          note(rep.violations, os.str() + " carries " + std::to_string(n) + " trips over capacity " +
                                   std::to_string(cap));
        }
        if (lambda < -tol) {
          rep.market_clearing = false;
          note(rep.violations, "negative route price on " + os.str());
        }
        if (lambda > tol && n < cap) {
          rep.market_clearing = false;
          os << ": price " << lambda << " with " << n << " of " << cap << " slots used";
          note(rep.violations, os.str());
        }
      }
    }
  }

  const auto u = utilities_from_payments(agents, routes, trips, prices.payment, inst.costs);
  for (std::size_t m = 0; m < M; ++m) {
    if (u[m] < -tol) {
      rep.individual_rationality = false;
      note(rep.violations, "agent " + std::to_string(agents[m].id) + " has utility " + std::to_string(u[m]));
    }
    if (rides[m] == 0 && std::fabs(prices.payment[m]) > tol) {
      rep.budget_balance = false;
      note(rep.violations, "agent " + std::to_string(agents[m].id) + " pays without riding");
    }
  }
  for (const auto& t : trips) {
    double paid = 0.0;
    for (int m : t.group) paid += prices.payment[m];
    const double due =
        price_of(t.route, t.departure) + trip_cost(routes[t.route], static_cast<int>(t.group.size()), inst.costs);
    if (std::fabs(paid - due) > tol) {
      rep.budget_balance = false;
      std::ostringstream os;
      os << "trip " << trip_label(inst, routes, t.route, t.departure, t.group) << " pays " << paid << ", owes "
         << due;
      note(rep.violations, os.str());
    }
  }
  rep.welfare = welfare_of(agents, routes, trips, inst.costs);

  // Stability over every (or a sample of) candidate trip.
  auto check = [&](int r, int z, std::span<const int> g) {
    ++rep.stability_checked;
    const Value v = trip_value(agents, g, z, routes[r], inst.costs);
    if (!v.feasible()) return;
    double lhs = price_of(r, z);
    for (int m : g) lhs += u[m];
    if (lhs < v.amount() - tol) {
      rep.stability = false;
      std::ostringstream os;
      os << "trip " << trip_label(inst, routes, r, z, g) << " has value " << v.amount() << " but utilities + price "
         << lhs;
      note(rep.violations, os.str());
    }
  };
  const std::size_t total = count_trip_candidates(M, routes.size(), T, A);
  if (M == 0) return rep;
  if (total <= options.enumeration_cap) {
    const auto groups = subsets_up_to(static_cast<int>(M), A);
    for (std::size_t r = 0; r < routes.size(); ++r)
      for (int z = 1; z <= T; ++z)
        if (arrives_within(z, routes[r].total_time, T))
          for (const auto& g : groups) check(static_cast<int>(r), z, g);
  } else {
    std::mt19937_64 rng(options.seed);
    std::vector<int> pool(M);
    for (std::size_t m = 0; m < M; ++m) pool[m] = static_cast<int>(m);
    std::uniform_int_distribution<std::size_t> pick_route(0, routes.size() - 1);
    std::uniform_int_distribution<int> pick_z(1, T);
    std::uniform_int_distribution<int> pick_n(1, std::min<int>(A, static_cast<int>(M)));
    for (std::size_t s = 0; s < options.enumeration_cap; ++s) {
      const int r = static_cast<int>(pick_route(rng));
      const int z = pick_z(rng);
      if (!arrives_within(z, routes[r].total_time, T)) continue;
      std::shuffle(pool.begin(), pool.end(), rng);
      std::vector<int> g(pool.begin(), pool.begin() + pick_n(rng));
      std::sort(g.begin(), g.end());
      check(r, z, g);
    }
    rep.stability_coverage = static_cast<double>(rep.stability_checked) / static_cast<double>(total);
  }
  return rep;
}

EdgeTolls edge_tolls(const Instance& inst, std::span<const Route> routes, std::span<const double> utility,
                     std::span<const Trip> trips, double tolerance) {
  EdgeTolls out;
  const int T = inst.network.horizon();
  out.resources = ResourceModel::edge_ticks(inst.network, routes, T);
  const auto& rm = out.resources;
  const bool homog = homogeneous(inst.agents, inst.costs.vehicle_capacity);

  // The tightest stability row of a departure is fixed by u, so compute once.
  std::vector<std::vector<double>> need(routes.size(), std::vector<double>(T, 0.0));
  for (std::size_t r = 0; r < routes.size(); ++r)
    for (int z = 1; z <= T; ++z)
      if (arrives_within(z, routes[r].total_time, T))
        need[r][z - 1] =
            std::max(0.0, best_surplus(inst.agents, homog, z, routes[r], inst.costs, utility) - tolerance);

  lp::LinearProgram prog(lp::Sense::Minimize);
  for (std::size_t res = 0; res < rm.size(); ++res) prog.add_variable(static_cast<double>(rm.capacity(res)));
  if (rm.size() == 0) return out;

  auto separate = [&](std::span<const double> tau) {
    std::vector<lp::Row> rows;
    for (std::size_t r = 0; r < routes.size(); ++r) {
      for (int z = 1; z <= T; ++z) {
        if (need[r][z - 1] <= kMoneyTol) continue;
        const auto& uses = rm.uses(static_cast<int>(r), z);
        double have = 0.0;
        for (int res : uses) have += tau[res];
        if (have < need[r][z - 1] - 1e-9) {
          lp::Row row;
          for (int res : uses) row.terms.emplace_back(res, 1.0);
          row.relation = lp::Relation::GreaterEqual;
          row.rhs = need[r][z - 1];
          rows.push_back(std::move(row));
        }
      }
    }
    return rows;
  };
  lp::CuttingPlaneResult cp;
  try {
    cp = lp::solve_with_rows(prog, separate, 10'000);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IterationCapExceeded) throw Error(ErrorCode::SeparationCapExceeded, e.what());
    throw;
  }
  if (!cp.solution.optimal()) throw Error(ErrorCode::Infeasible, "toll program has no optimal solution");
  out.toll = cp.solution.primal;
  for (auto& t : out.toll) t = std::max(0.0, t);
  out.total = cp.solution.value;
  out.rounds = cp.rounds;
  out.rows = cp.rows_added;

  double usum = 0.0;
  for (double x : utility) usum += x;
  const double welfare = welfare_of(inst.agents, routes, trips, inst.costs);
  if (usum + out.total > welfare + tolerance) {
    std::ostringstream os;
    os << "utilities " << usum << " plus tolls " << out.total << " exceed welfare " << welfare
       << "; the utility vector is not an equilibrium vector";
    throw Error(ErrorCode::Infeasible, os.str());
  }
  return out;
}

VcgOutcome vcg_outcome(const Instance& inst, const SolveOptions& options) {
  SolveOptions opts = options;
  opts.epsilon = epsilon_for(inst, options);
  VcgOutcome out;
  out.base = solve(inst, opts);
  const std::size_t M = inst.agents.size();
  out.welfare_without.assign(M, 0.0);
  out.utility.assign(M, 0.0);
  out.payment.assign(M, 0.0);
  std::vector<double> own(M, 0.0);
  for (const auto& t : out.base.trips) {
    const int n = static_cast<int>(t.group.size());
    for (int m : t.group)
      own[m] = agent_trip_value(inst.agents[m], t.departure, out.base.routes[t.route], n, inst.costs).amount();
  }
  for (std::size_t m = 0; m < M; ++m) {
    Instance without = inst;
    without.agents.erase(without.agents.begin() + static_cast<long>(m));
    out.welfare_without[m] = without.agents.empty() ? 0.0 : solve(without, opts).welfare;
    out.utility[m] = out.base.welfare - out.welfare_without[m];
    out.payment[m] = own[m] - out.utility[m];
  }
  return out;
}

ExistenceCheck check_existence(const Instance& inst) {
  const auto p = oracle::Problem::from_instance(inst);
  ExistenceCheck out;
  const auto lp = oracle::lp_optimum(p);
  out.lp_value = lp.welfare;
  out.fractional = lp.fractional;
  out.ip_value = oracle::ip_optimum(p).welfare;
  return out;
}

}  // namespace poolmarket
