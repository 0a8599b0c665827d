#include "poolmarket/preferences.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace poolmarket {

namespace {

void check_delay(const DelayFn::Variant& fn) {
  if (const auto* lin = std::get_if<DelayFn::Linear>(&fn)) {
    if (!(lin->slope >= 0.0) || !std::isfinite(lin->slope))
      throw Error(ErrorCode::InvalidPreferences, "linear delay slope must be finite and >= 0");
  } else if (const auto* pw = std::get_if<DelayFn::PiecewiseLinear>(&fn)) {
    const auto& pts = pw->breakpoints;
    if (pts.empty() || pts.front().first != 0.0 || pts.front().second != 0.0)
      throw Error(ErrorCode::InvalidPreferences, "piecewise delay must start at (0, 0)");
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (!(pts[i].first > pts[i - 1].first) || pts[i].second < pts[i - 1].second)
        throw Error(ErrorCode::InvalidPreferences, "piecewise delay breakpoints must increase and be nondecreasing");
    }
  }
}

}  // namespace

DelayFn::DelayFn(Variant fn) : fn_(std::move(fn)) { check_delay(fn_); }

Value DelayFn::operator()(double lateness) const {
  if (lateness <= kTimeTol) return 0.0;
  return std::visit(
      [&](const auto& f) -> Value {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Linear>) {
          return f.slope * lateness;
        } else if constexpr (std::is_same_v<T, HardDeadline>) {
          return Value::infeasible();
        } else {
          const auto& pts = f.breakpoints;
          if (pts.size() == 1) return 0.0;
          for (std::size_t i = 1; i < pts.size(); ++i) {
            if (lateness <= pts[i].first) {
              const double w = (lateness - pts[i - 1].first) / (pts[i].first - pts[i - 1].first);
              return pts[i - 1].second + w * (pts[i].second - pts[i - 1].second);
            }
          }
          // Extend the last segment.
          const auto& a = pts[pts.size() - 2];
          const auto& b = pts.back();
          return b.second + (lateness - b.first) * (b.second - a.second) / (b.first - a.first);
        }
      },
      fn_);
}

bool operator==(const DelayFn& a, const DelayFn& b) {
  if (a.fn_.index() != b.fn_.index()) return false;
  if (const auto* la = std::get_if<DelayFn::Linear>(&a.fn_)) return la->slope == std::get<DelayFn::Linear>(b.fn_).slope;
  if (const auto* pa = std::get_if<DelayFn::PiecewiseLinear>(&a.fn_))
    return pa->breakpoints == std::get<DelayFn::PiecewiseLinear>(b.fn_).breakpoints;
  return true;
}

Value Agent::pi_at(int size) const {
  if (size < 1 || size > static_cast<int>(pi.size())) return Value::infeasible();
  return pi[size - 1];
}

Value Agent::gamma_at(int size) const {
  if (size < 1 || size > static_cast<int>(gamma.size())) return Value::infeasible();
  return gamma[size - 1];
}

void check_costs(const MarketCosts& costs) {
  if (!(costs.sigma >= 0.0) || !(costs.delta >= 0.0))
    throw Error(ErrorCode::InvalidPreferences, "sigma and delta must be >= 0");
  if (costs.vehicle_capacity < 1) throw Error(ErrorCode::InvalidPreferences, "vehicle capacity must be >= 1");
}

void check_agent(const Agent& agent, int capacity) {
  const std::string who = "agent " + std::to_string(agent.id) + ": ";
  if (!std::isfinite(agent.alpha) || !std::isfinite(agent.beta) || !std::isfinite(agent.theta))
    throw Error(ErrorCode::InvalidPreferences, who + "alpha, beta and theta must be finite");
  if (agent.beta < 0.0) throw Error(ErrorCode::InvalidPreferences, who + "beta must be >= 0");
  auto check_table = [&](const SizeTable& table, const char* name) {
    if (static_cast<int>(table.size()) < capacity)
      throw Error(ErrorCode::InvalidPreferences,
                  who + name + " table has " + std::to_string(table.size()) + " entries, vehicle capacity is " +
                      std::to_string(capacity));
    if (!table.front().feasible() || table.front().amount() != 0.0)
      throw Error(ErrorCode::InvalidPreferences, who + name + "(1) must be 0");
    bool infinite = false;
    double prev_step = -INFINITY;
    for (std::size_t n = 1; n < table.size(); ++n) {
      if (!table[n].feasible()) {
        infinite = true;
        continue;
      }
      if (infinite)
        throw Error(ErrorCode::InvalidPreferences, who + name + " table becomes finite after an infinite entry");
      if (table[n].amount() < 0.0) throw Error(ErrorCode::InvalidPreferences, who + name + " entries must be >= 0");
      const double step = table[n].amount() - table[n - 1].amount();
      if (step < prev_step - kMoneyTol)
        throw Error(ErrorCode::InvalidPreferences,
                    who + name + " marginal increments must be nondecreasing (size " + std::to_string(n + 1) + ")");
      prev_step = step;
    }
  };
  check_table(agent.pi, "pi");
  check_table(agent.gamma, "gamma");
}

bool same_disutility(const Agent& a, const Agent& b, int capacity) {
  for (int n = 1; n <= capacity; ++n) {
    if (!(a.pi_at(n) == b.pi_at(n)) || !(a.gamma_at(n) == b.gamma_at(n))) return false;
  }
  return true;
}

void require_homogeneous(std::span<const Agent> agents, std::span<const int> members, int capacity) {
  for (std::size_t i = 1; i < members.size(); ++i) {
    if (!same_disutility(agents[members[0]], agents[members[i]], capacity))
      throw Error(ErrorCode::HeterogeneousDisutility, "agents " + std::to_string(agents[members[0]].id) + " and " +
                                                          std::to_string(agents[members[i]].id) +
                                                          " have different pooling disutilities");
  }
}

Value eta(const Agent& agent, int z, const Route& route) {
  const double d = route.total_time;
  const double lateness = std::max(0.0, z + d - agent.theta);
  return Value(agent.alpha - agent.beta * d) - agent.delay(lateness);
}

Value agent_trip_value(const Agent& agent, int z, const Route& route, int group_size, const MarketCosts& costs) {
  if (group_size > costs.vehicle_capacity)
    throw Error(ErrorCode::GroupTooLarge, "group of " + std::to_string(group_size) + " exceeds vehicle capacity " +
                                              std::to_string(costs.vehicle_capacity));
  if (group_size < 1) throw Error(ErrorCode::GroupTooLarge, "group size must be >= 1");
  return eta(agent, z, route) - agent.pi_at(group_size) - agent.gamma_at(group_size) * route.total_time;
}

double trip_cost(const Route& route, int group_size, const MarketCosts& costs) {
  return (costs.sigma + costs.delta * route.total_time) * group_size;
}

Value trip_value(std::span<const Agent> agents, std::span<const int> group, int z, const Route& route,
                 const MarketCosts& costs) {
  const int n = static_cast<int>(group.size());
  if (n > costs.vehicle_capacity)
    throw Error(ErrorCode::GroupTooLarge, "group of " + std::to_string(n) + " exceeds vehicle capacity");
  Value total = 0.0;
  for (int m : group) total += agent_trip_value(agents[m], z, route, n, costs);
  return total - Value(trip_cost(route, n, costs));
}

Value xi(int n, const Route& route, const MarketCosts& costs, const SizeTable& pi, const SizeTable& gamma) {
  if (n == 0) return 0.0;
  if (n < 0 || n > costs.vehicle_capacity || n > static_cast<int>(pi.size()) || n > static_cast<int>(gamma.size()))
    return Value::infeasible();
  const double d = route.total_time;
  return (pi[n - 1] + Value(costs.sigma)) * n + (gamma[n - 1] + Value(costs.delta)) * (n * d);
}

std::vector<Value> xi_table(const Route& route, const MarketCosts& costs, const Agent& representative) {
  std::vector<Value> table(costs.vehicle_capacity + 1);
  for (int n = 0; n <= costs.vehicle_capacity; ++n) table[n] = xi(n, route, costs, representative.pi, representative.gamma);
  return table;
}

AugmentedValue augmented_value_sorted(std::span<const int> order, std::span<const double> eta_of,
                                      std::span<const Value> xi_table, int capacity) {
  AugmentedValue out;
  double sum = 0.0;
  int n = 0;
  for (int m : order) {
    if (n == capacity) break;
    const double e = eta_of[m];
    if (!std::isfinite(e)) break;  // Infeasible eta sorts last
    const Value step = xi_table[n + 1] - xi_table[n];
    if (!step.feasible()) break;
    if (e < step.amount() - kMoneyTol) break;
    sum += e;
    ++n;
    out.representative.push_back(m);
  }
  out.value = n == 0 ? 0.0 : sum - xi_table[n].amount();
  std::sort(out.representative.begin(), out.representative.end());
  return out;
}

AugmentedValue augmented_value(std::span<const Agent> agents, std::span<const int> members, int z,
                               const Route& route, const MarketCosts& costs) {
  if (members.empty()) return {};
  require_homogeneous(agents, members, costs.vehicle_capacity);
  std::vector<double> eta_of(agents.size(), -INFINITY);
  for (int m : members) eta_of[m] = eta(agents[m], z, route).or_neg_inf();
  std::vector<int> order(members.begin(), members.end());
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (eta_of[a] != eta_of[b]) return eta_of[a] > eta_of[b];
    return a < b;
  });
  const auto table = xi_table(route, costs, agents[members[0]]);
  return augmented_value_sorted(order, eta_of, table, costs.vehicle_capacity);
}

AugmentedValue best_response_group(std::span<const Agent> agents, std::span<const int> members, int z,
                                   const Route& route, const MarketCosts& costs, std::span<const double> utility) {
  AugmentedValue best;
  if (members.empty()) return best;
  std::vector<std::pair<double, int>> net;
  for (int m : members) {
    const Value e = eta(agents[m], z, route);
    if (e.feasible()) net.emplace_back(e.amount() - utility[m], m);
  }
  std::sort(net.begin(), net.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  const auto table = xi_table(route, costs, agents[members[0]]);
  double sum = 0.0;
  int best_n = 0;
  for (int n = 1; n <= static_cast<int>(net.size()) && n <= costs.vehicle_capacity; ++n) {
    if (!table[n].feasible()) break;
    sum += net[n - 1].first;
    const double surplus = sum - table[n].amount();
    if (surplus > best.value + kMoneyTol) {
      best.value = surplus;
      best_n = n;
    }
  }
  for (int i = 0; i < best_n; ++i) best.representative.push_back(net[i].second);
  std::sort(best.representative.begin(), best.representative.end());
  return best;
}

}  // namespace poolmarket
