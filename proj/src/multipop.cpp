#include "poolmarket/multipop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "poolmarket/lp.hpp"

namespace poolmarket {

namespace {

constexpr double kIntegralTol = 1e-6;

bool valid_departure(const Route& route, int z, int horizon) { return arrives_within(z, route.total_time, horizon); }

int route_cap(const MultiInstance& inst, const Population& pop, const Route& route) {
  long long cap = std::numeric_limits<int>::max();
  for (int e : route.edges) cap = std::min(cap, inst.edges()[pop.edge_map[e]].capacity);
  return static_cast<int>(cap);
}

}  // namespace

MultiInstance MultiInstance::build(NetworkSpec network, std::vector<Agent> agents, MarketCosts costs,
                                   std::vector<PopulationSpec> populations, std::optional<double> epsilon) {
  MultiInstance out;
  check_costs(costs);
  for (const auto& e : network.edges) {
    if (std::fabs(e.travel_time - std::round(e.travel_time)) > kTimeTol) {
      std::ostringstream os;
      os << "edge " << e.id << " has travel time " << e.travel_time;
      throw Error(ErrorCode::NonIntegralTravelTime, os.str());
    }
  }
  if (epsilon && !(*epsilon > 0.0)) throw Error(ErrorCode::NonPositiveEpsilon, "epsilon must be positive");
  std::map<int, int> by_id;
  for (std::size_t m = 0; m < agents.size(); ++m) {
    check_agent(agents[m], costs.vehicle_capacity);
    if (!by_id.emplace(agents[m].id, static_cast<int>(m)).second)
      throw Error(ErrorCode::DuplicateId, "agent id " + std::to_string(agents[m].id));
  }
  std::set<int> seen_pop;
  std::vector<int> owner(agents.size(), -1);
  for (const auto& ps : populations) {
    if (!seen_pop.insert(ps.id).second) throw Error(ErrorCode::DuplicateId, "population id " + std::to_string(ps.id));
    Population pop;
    pop.id = ps.id;
    for (int id : ps.members) {
      const auto it = by_id.find(id);
      if (it == by_id.end())
        throw Error(ErrorCode::InvalidPreferences,
                    "population " + std::to_string(ps.id) + " lists unknown agent " + std::to_string(id));
      if (owner[it->second] >= 0)
        throw Error(ErrorCode::InvalidPreferences, "agent " + std::to_string(id) + " is in two populations");
      owner[it->second] = ps.id;
      pop.members.push_back(it->second);
    }
    std::sort(pop.members.begin(), pop.members.end());
    require_homogeneous(agents, pop.members, costs.vehicle_capacity);

    NetworkSpec local = network;
    local.origin = ps.origin;
    local.destination = ps.destination;
    pop.network = Network::validate(local);
    for (const auto& e : pop.network.edges()) {
      int g = -1;
      for (std::size_t k = 0; k < network.edges.size(); ++k)
        if (network.edges[k].id == e.id) g = static_cast<int>(k);
      pop.edge_map.push_back(g);
    }
    pop.routes = enumerate_routes(pop.network);
    out.populations_.push_back(std::move(pop));
  }
  for (std::size_t m = 0; m < agents.size(); ++m)
    if (owner[m] < 0)
      throw Error(ErrorCode::InvalidPreferences, "agent " + std::to_string(agents[m].id) + " is in no population");

  out.network_ = std::move(network);
  out.agents_ = std::move(agents);
  out.costs_ = costs;
  out.specs_ = std::move(populations);
  out.epsilon_ = epsilon;
  return out;
}

Instance MultiInstance::submarket(std::size_t i) const {
  const auto& pop = populations_.at(i);
  Instance inst;
  inst.network = pop.network;
  for (int m : pop.members) inst.agents.push_back(agents_[m]);
  inst.costs = costs_;
  inst.epsilon = epsilon_;
  return inst;
}

bool QBounds::consistent() const {
  for (const auto& [k, lo] : lower) {
    const auto it = upper.find(k);
    if (it != upper.end() && lo > it->second) return false;
  }
  return true;
}

ColumnPool::ColumnPool(const MultiInstance&) {}

bool ColumnPool::add(MultiTrip column) {
  auto key = std::make_tuple(column.population, column.route, column.departure, column.group);
  if (index_.count(key)) return false;
  index_.emplace(std::move(key), columns_.size());
  columns_.push_back(std::move(column));
  return true;
}

MasterResult solve_master(const MultiInstance& inst, const QBounds& bounds, ColumnPool& pool,
                          const MasterOptions& options) {
  if (!bounds.consistent()) throw Error(ErrorCode::Infeasible, "inconsistent branching bounds");
  const int T = inst.horizon();
  const auto& pops = inst.populations();
  const std::size_t M = inst.agents().size();

  // Capacity variables and their edge-tick rows do not change between rounds.
  std::vector<QIndex> qvars;
  std::map<QIndex, int> qpos;
  for (std::size_t i = 0; i < pops.size(); ++i)
    for (std::size_t r = 0; r < pops[i].routes.size(); ++r)
      for (int z = 1; z <= T; ++z)
        if (valid_departure(pops[i].routes[r], z, T)) {
          const QIndex k{static_cast<int>(i), static_cast<int>(r), z};
          qpos[k] = static_cast<int>(qvars.size());
          qvars.push_back(k);
        }
  for (const auto& [k, lo] : bounds.lower)
    if (lo > 0 && !qpos.count(k)) throw Error(ErrorCode::Infeasible, "lower bound on a departure that cannot arrive");

  std::map<std::pair<int, int>, std::vector<int>> edge_rows;  // (edge, tick) -> q variables
  for (std::size_t v = 0; v < qvars.size(); ++v) {
    const auto& pop = pops[qvars[v].population];
    const Route& route = pop.routes[qvars[v].route];
    for (std::size_t pos = 0; pos < route.edges.size(); ++pos) {
      const int g = pop.edge_map[route.edges[pos]];
      const int tick = entry_tick(qvars[v].departure + route.prefix_at(pos));
      edge_rows[{g, tick}].push_back(static_cast<int>(v));
    }
  }

  MasterResult out;
  std::vector<double> u(M, 0.0);
  std::map<QIndex, double> tau;
  for (std::size_t round = 0;; ++round) {
    if (round >= options.max_rounds)
      throw Error(ErrorCode::IterationCapExceeded, "column generation did not converge");
    out.rounds = round + 1;

    const auto& cols = pool.columns();
    lp::LinearProgram prog(lp::Sense::Maximize);
    for (const auto& c : cols) prog.add_variable(c.value);
    const int qbase = static_cast<int>(cols.size());
    for (const auto& k : qvars) {
      const auto lo = bounds.lower.find(k);
      const auto hi = bounds.upper.find(k);
      std::optional<double> upper;
      if (hi != bounds.upper.end()) upper = hi->second;
      const double lower = lo != bounds.lower.end() ? lo->second : 0.0;
      if (lower > route_cap(inst, pops[k.population], pops[k.population].routes[k.route]))
        throw Error(ErrorCode::Infeasible, "branching bounds exceed edge capacity");
      prog.add_variable(0.0, lower, upper);
    }
    std::vector<std::vector<std::pair<int, double>>> agent_terms(M);
    std::vector<std::vector<std::pair<int, double>>> link_terms(qvars.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
      for (int m : cols[c].group) agent_terms[m].emplace_back(static_cast<int>(c), 1.0);
      const int v = qpos.at(QIndex{cols[c].population, cols[c].route, cols[c].departure});
      link_terms[v].emplace_back(static_cast<int>(c), 1.0);
    }
    std::vector<int> agent_row(M);
    for (std::size_t m = 0; m < M; ++m) agent_row[m] = prog.add_row(agent_terms[m], lp::Relation::LessEqual, 1.0);
    std::vector<int> link_row(qvars.size());
    for (std::size_t v = 0; v < qvars.size(); ++v) {
      auto terms = link_terms[v];
      terms.emplace_back(qbase + static_cast<int>(v), -1.0);
      link_row[v] = prog.add_row(std::move(terms), lp::Relation::LessEqual, 0.0);
    }
    for (const auto& [key, vars] : edge_rows) {
      std::vector<std::pair<int, double>> terms;
      for (int v : vars) terms.emplace_back(qbase + v, 1.0);
      prog.add_row(std::move(terms), lp::Relation::LessEqual, static_cast<double>(inst.edges()[key.first].capacity));
    }

    const auto sol = lp::solve(prog);
    if (sol.status == lp::Status::Infeasible) throw Error(ErrorCode::Infeasible, "master program is infeasible");
    if (sol.status != lp::Status::Optimal) throw Error(ErrorCode::NumericalBreakdown, "master program unbounded");

    for (std::size_t m = 0; m < M; ++m) u[m] = std::max(0.0, sol.dual[agent_row[m]]);
    for (std::size_t v = 0; v < qvars.size(); ++v) tau[qvars[v]] = std::max(0.0, sol.dual[link_row[v]]);

    // Pricing: best group per (population, route, departure) against u, less tau.
    std::size_t added = 0;
    double max_rc = 0.0;
    for (const auto& k : qvars) {
      const auto& pop = pops[k.population];
      const Route& route = pop.routes[k.route];
      const auto best = best_response_group(inst.agents(), pop.members, k.departure, route, inst.costs(), u);
      const double rc = best.value - tau[k];
      if (best.representative.empty()) continue;
      max_rc = std::max(max_rc, rc);
      if (rc > options.reduced_cost_tol) {
        const Value v = trip_value(inst.agents(), best.representative, k.departure, route, inst.costs());
        if (pool.add(MultiTrip{k.population, k.route, k.departure, best.representative, v.amount()})) ++added;
      }
    }
    out.columns_added += added;
    if (added == 0) {
      out.value = sol.value;
      out.max_reduced_cost = max_rc;
      out.q.assign(pops.size(), {});
      for (std::size_t i = 0; i < pops.size(); ++i)
        out.q[i].assign(pops[i].routes.size(), std::vector<double>(std::max(T, 0), 0.0));
      for (std::size_t v = 0; v < qvars.size(); ++v)
        out.q[qvars[v].population][qvars[v].route][qvars[v].departure - 1] = sol.primal[qbase + v];
      for (std::size_t c = 0; c < cols.size(); ++c)
        if (sol.primal[c] > 1e-9) {
          out.columns.push_back(cols[c]);
          out.x.push_back(sol.primal[c]);
        }
      return out;
    }
  }
}

MasterResult solve_master(const MultiInstance& inst, const QBounds& bounds) {
  ColumnPool pool(inst);
  return solve_master(inst, bounds, pool);
}

SubmarketResult submarket_equilibrium(const MultiInstance& inst, std::size_t i,
                                      const std::vector<std::vector<int>>& counts, const SolveOptions& options) {
  const Instance sub = inst.submarket(i);
  const auto& routes = inst.populations().at(i).routes;
  SubmarketResult out;
  out.counts = counts;
  out.outcome = solve_on_slots(sub, routes, counts, options);
  out.report = verify_equilibrium(sub, routes, out.outcome.trips, out.outcome.prices, out.outcome.epsilon);
  return out;
}

bool allocation_fits(const MultiInstance& inst, const std::vector<std::vector<std::vector<int>>>& q) {
  std::map<std::pair<int, int>, long long> load;
  const auto& pops = inst.populations();
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t r = 0; r < q[i].size(); ++r)
      for (std::size_t zi = 0; zi < q[i][r].size(); ++zi) {
        if (q[i][r][zi] == 0) continue;
        const Route& route = pops[i].routes[r];
        const int z = static_cast<int>(zi) + 1;
        if (q[i][r][zi] < 0 || !valid_departure(route, z, inst.horizon())) return false;
        for (std::size_t pos = 0; pos < route.edges.size(); ++pos) {
          const int g = pops[i].edge_map[route.edges[pos]];
          load[{g, entry_tick(z + route.prefix_at(pos))}] += q[i][r][zi];
        }
      }
  for (const auto& [key, l] : load)
    if (l > inst.edges()[key.first].capacity) return false;
  return true;
}

namespace {

struct Search {
  const MultiInstance& inst;
  const BranchOptions& options;
  ColumnPool pool;
  BranchResult best;
  bool have_best = false;
  std::size_t nodes = 0;

  std::optional<MasterResult> master(const QBounds& b) {
    if (!b.consistent()) return std::nullopt;
    try {
      return solve_master(inst, b, pool, options.master);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Infeasible) return std::nullopt;
      throw;
    }
  }

  void leaf(const MasterResult& node) {
    std::vector<std::vector<std::vector<int>>> q(inst.populations().size());
    for (std::size_t i = 0; i < q.size(); ++i)
      for (const auto& row : node.q[i]) {
        q[i].emplace_back();
        for (double v : row) q[i].back().push_back(static_cast<int>(std::lround(v)));
      }
    evaluate(std::move(q));
  }

  // Temporally repeated greedy capacities of every population, if they fit
  // together; for a single population this is the base pipeline's allocation.
  void seed_incumbent() {
    const auto& pops = inst.populations();
    std::vector<std::vector<std::vector<int>>> q(pops.size());
    for (std::size_t i = 0; i < pops.size(); ++i) {
      const auto slots = temporally_repeated(greedy_route_capacity(pops[i].network, pops[i].routes), inst.horizon());
      q[i].assign(pops[i].routes.size(), std::vector<int>(inst.horizon(), 0));
      for (const auto& s : slots.slots) ++q[i][s.route][s.departure - 1];
    }
    if (allocation_fits(inst, q)) evaluate(std::move(q));
  }

  void evaluate(std::vector<std::vector<std::vector<int>>> q) {
    std::vector<SubmarketResult> subs;
    double total = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      subs.push_back(submarket_equilibrium(inst, i, q[i], options.solve));
      total += subs.back().outcome.welfare;
    }
    if (!have_best || total > best.value + kMoneyTol) {
      have_best = true;
      best.value = total;
      best.q = std::move(q);
      best.submarkets = std::move(subs);
    }
  }

  void explore(const QBounds& bounds, const MasterResult& node) {
    if (++nodes > options.node_cap) throw Error(ErrorCode::NodeCapExceeded, "branch-and-price node cap reached");
    std::optional<QIndex> pick;
    double frac = 0.0;
    for (std::size_t i = 0; i < node.q.size() && !pick; ++i)
      for (std::size_t r = 0; r < node.q[i].size() && !pick; ++r)
        for (std::size_t zi = 0; zi < node.q[i][r].size(); ++zi) {
          const double v = node.q[i][r][zi];
          if (std::fabs(v - std::round(v)) >= kIntegralTol) {
            pick = QIndex{static_cast<int>(i), static_cast<int>(r), static_cast<int>(zi) + 1};
            frac = v;
            break;
          }
        }
    if (!pick) {
      leaf(node);
      return;
    }
    QBounds down = bounds;
    QBounds up = bounds;
    const int fl = static_cast<int>(std::floor(frac));
    down.upper[*pick] = bounds.upper.count(*pick) ? std::min(bounds.upper.at(*pick), fl) : fl;
    up.lower[*pick] = bounds.lower.count(*pick) ? std::max(bounds.lower.at(*pick), fl + 1) : fl + 1;

    std::vector<std::pair<QBounds, MasterResult>> children;
    for (auto* b : {&down, &up})
      if (auto m = master(*b)) children.emplace_back(std::move(*b), std::move(*m));
    std::stable_sort(children.begin(), children.end(),
                     [](const auto& a, const auto& b) { return a.second.value > b.second.value; });
    for (const auto& [b, m] : children) {
      if (have_best && m.value <= best.value - 1e-9) continue;
      explore(b, m);
    }
  }
};

}  // namespace

BranchResult branch_and_price(const MultiInstance& inst, const BranchOptions& options) {
  Search search{inst, options, ColumnPool(inst), {}, false, 0};
  const QBounds root;
  const auto m = search.master(root);
  if (!m) throw Error(ErrorCode::Infeasible, "root master program is infeasible");
  if (options.seed_incumbent) search.seed_incumbent();
  if (search.have_best && search.best.value >= m->value - 1e-9)
    search.nodes = 1;
  else
    search.explore(root, *m);
  BranchResult out = std::move(search.best);
  out.root_bound = m->value;
  out.nodes = search.nodes;
  out.columns = search.pool.size();
  return out;
}

}  // namespace poolmarket
