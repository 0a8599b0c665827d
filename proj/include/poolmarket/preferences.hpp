#pragma once

#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "poolmarket/common.hpp"
#include "poolmarket/network.hpp"

namespace poolmarket {

/// Cost of arriving late, as a function of lateness >= 0.
class DelayFn {
 public:
  struct Linear {
    double slope = 0.0;
  };
  struct HardDeadline {};
  struct PiecewiseLinear {
    std::vector<std::pair<double, double>> breakpoints;  // (lateness, cost), starts at (0, 0)
  };
  using Variant = std::variant<Linear, HardDeadline, PiecewiseLinear>;

  DelayFn() : fn_(Linear{0.0}) {}
  explicit DelayFn(Variant fn);

  static DelayFn linear(double slope) { return DelayFn(Linear{slope}); }
  static DelayFn hard_deadline() { return DelayFn(HardDeadline{}); }
  static DelayFn piecewise(std::vector<std::pair<double, double>> points) {
    return DelayFn(PiecewiseLinear{std::move(points)});
  }

  Value operator()(double lateness) const;
  const Variant& variant() const { return fn_; }

  friend bool operator==(const DelayFn& a, const DelayFn& b);

 private:
  Variant fn_;
};

/// Disutility table indexed by group size; entry n-1 holds the value for size n.
using SizeTable = std::vector<Value>;

struct Agent {
  int id = 0;
  double alpha = 0.0;  // value of arriving
  double beta = 0.0;   // value of time
  double theta = 0.0;  // preferred latest arrival
  DelayFn delay;
  SizeTable pi;     // fixed pooling disutility
  SizeTable gamma;  // per-time-unit pooling disutility

  Value pi_at(int size) const;
  Value gamma_at(int size) const;
};

struct MarketCosts {
  double sigma = 0.0;  // per seat
  double delta = 0.0;  // per seat per time unit
  int vehicle_capacity = 1;
};

/// Checks the table and parameter invariants of one agent against capacity A.
/// Throws InvalidPreferences naming the agent.
void check_agent(const Agent& agent, int vehicle_capacity);
void check_costs(const MarketCosts& costs);

/// True when both agents' pi and gamma agree on sizes 1..A.
bool same_disutility(const Agent& a, const Agent& b, int vehicle_capacity);

/// Throws HeterogeneousDisutility unless all listed agents share tables.
void require_homogeneous(std::span<const Agent> agents, std::span<const int> members, int vehicle_capacity);

/// One agent's value of the trip (z, r, group of `group_size`).
Value agent_trip_value(const Agent& agent, int z, const Route& route, int group_size, const MarketCosts& costs);

/// Total value of trip (z, r, group) net of the seat cost; `group` indexes `agents`.
Value trip_value(std::span<const Agent> agents, std::span<const int> group, int z, const Route& route,
                 const MarketCosts& costs);

/// Seat cost (sigma + delta d_r) |b|.
double trip_cost(const Route& route, int group_size, const MarketCosts& costs);

/// Size-independent part of an agent's value: alpha - beta d_r - delay.
Value eta(const Agent& agent, int z, const Route& route);

/// Size-dependent group cost xi(n) = (pi(n)+sigma) n + (gamma(n)+delta) n d_r,
/// xi(0) = 0; Infeasible for n > A or an Infeasible table entry.
Value xi(int n, const Route& route, const MarketCosts& costs, const SizeTable& pi, const SizeTable& gamma);

struct AugmentedValue {
  double value = 0.0;
  std::vector<int> representative;  // sorted agent indices
};

/// Greedy evaluation of the augmented value of candidate set `members`
/// (agents with identical disutility tables; the set may exceed A).
AugmentedValue augmented_value(std::span<const Agent> agents, std::span<const int> members, int z,
                               const Route& route, const MarketCosts& costs);

/// Same greedy, from precomputed etas. `order` must list members by
/// descending eta (ties by index ascending); `xi_table[n]` is xi(n).
AugmentedValue augmented_value_sorted(std::span<const int> order, std::span<const double> eta_of,
                                      std::span<const Value> xi_table, int vehicle_capacity);

/// xi(0..A) for one route and one disutility table pair.
std::vector<Value> xi_table(const Route& route, const MarketCosts& costs, const Agent& representative);

/// Best feasible group of one homogeneous population for a trip, given
/// per-agent utilities: maximizes V(b) - sum_{m in b} u_m over |b| <= A.
/// Returns the surplus (0 for the empty group) and the group.
AugmentedValue best_response_group(std::span<const Agent> agents, std::span<const int> members, int z,
                                   const Route& route, const MarketCosts& costs, std::span<const double> utility);

}  // namespace poolmarket
