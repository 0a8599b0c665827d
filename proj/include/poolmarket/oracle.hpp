#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "poolmarket/instance.hpp"

namespace poolmarket::oracle {

/// Brute-force view of a market: agents, routes, and a capacity model.
struct Problem {
  std::vector<Agent> agents;
  std::vector<Route> routes;
  MarketCosts costs;
  int horizon = 0;
  ResourceModel resources;

  /// Edge-capacity problem over all routes of the instance.
  static Problem from_instance(const Instance& inst);
  /// Same agents and routes, capacities given per (route, departure).
  static Problem with_route_counts(const Instance& inst, std::span<const Route> routes,
                                   const std::vector<std::vector<int>>& counts);
};

struct Limits {
  std::size_t max_agents = 12;
  std::size_t max_routes = 6;
  int max_horizon = 6;
  std::size_t max_columns = 200'000;
};

/// Every trip with finite value that arrives by the horizon, in
/// (route, departure, group) order. Throws InstanceTooLarge beyond the cap.
std::vector<Trip> feasible_trips(const Problem& p, std::size_t cap);

struct IpResult {
  double welfare = 0.0;
  std::vector<Trip> trips;
  std::size_t nodes = 0;
};

/// Exact optimum of the trip organization problem by depth-first search.
IpResult ip_optimum(const Problem& p, const Limits& limits = {});

struct LpResult {
  double welfare = 0.0;
  std::vector<Trip> columns;
  std::vector<double> x;
  bool fractional = false;
  std::vector<double> agent_dual;
  std::vector<double> resource_dual;

  /// Columns with x > tol.
  std::vector<std::pair<Trip, double>> support(double tol = 1e-9) const;
};

/// Linear relaxation with one column per feasible trip.
LpResult lp_optimum(const Problem& p, const Limits& limits = {});

struct DualPoint {
  std::vector<double> utility;  // per agent
  std::vector<double> price;    // per resource
  double objective = 0.0;       // sum u + sum capacity * price
};

/// Optimal solutions of the dual program under random secondary objectives
/// (weights uniform in [-1, 1]).
std::vector<DualPoint> dual_vertex_sample(const Problem& p, int count, std::uint64_t seed,
                                          const Limits& limits = {});

/// Set function on subsets of {0..n-1}, encoded as bit masks.
class ValueOracle {
 public:
  static ValueOracle from_table(int n, std::map<std::uint32_t, double> table);
  static ValueOracle from_function(int n, std::function<double(std::uint32_t)> fn);

  int ground_size() const { return n_; }
  /// Throws OracleIncomplete for a missing table entry.
  double operator()(std::uint32_t mask) const;

 private:
  int n_ = 0;
  std::optional<std::map<std::uint32_t, double>> table_;
  std::function<double(std::uint32_t)> fn_;
};

/// Augmented trip value of subsets of `members`, by exhaustive search over
/// feasible subgroups.
ValueOracle augmented_oracle(std::span<const Agent> agents, std::vector<int> members, int z, const Route& route,
                             const MarketCosts& costs);

struct GsViolation {
  int condition = 1;  // 1 or 2
  std::uint32_t base = 0;
  std::uint32_t larger = 0;  // condition 1 only
  int i = -1, j = -1, k = -1;
  double lhs = 0.0;
  double rhs1 = 0.0;
  double rhs2 = 0.0;  // condition 2 only

  std::string to_string() const;
};

struct GsReport {
  std::optional<GsViolation> condition1;
  std::optional<GsViolation> condition2;
  bool pass() const { return !condition1 && !condition2; }
};

/// Exhaustive gross-substitutes check; each condition reports its first
/// violation in mask order. Ground set of at most 10 elements.
GsReport gs_check(const ValueOracle& f, double tol = 1e-9);

struct MonotonicityReport {
  bool pass = true;
  std::uint32_t base = 0;
  int added = -1;
  double before = 0.0;
  double after = 0.0;
};

/// Checks f(S + i) >= f(S) for all S and i (first violation in mask order).
MonotonicityReport monotonicity_check(const ValueOracle& f, double tol = 1e-9);

/// Maximum number of vehicles leaving the origin at ticks 1..t that reach the
/// destination by t in the time-expanded network (edge e takes ceil(d_e)
/// ticks, capacity q_e per tick, waiting allowed). TooLarge above 10,000 nodes.
long long time_expanded_maxflow(const Network& net, int t);

std::string mask_to_string(std::uint32_t mask, int base_index = 1);

}  // namespace poolmarket::oracle
