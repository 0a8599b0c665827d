#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "poolmarket/auction.hpp"
#include "poolmarket/flowcap.hpp"
#include "poolmarket/instance.hpp"

namespace poolmarket {

enum class PriceMode { Route, Edge };

/// Prices and transfers of a market outcome.
struct PriceSystem {
  PriceMode mode = PriceMode::Route;
  /// Route prices lambda[r][z-1] and the per-(route, departure) capacity they
  /// price (route mode).
  std::vector<std::vector<double>> route_price;
  std::vector<std::vector<int>> route_capacity;
  /// Edge tolls per resource of ResourceModel::edge_ticks (edge mode).
  std::vector<double> toll;
  std::vector<double> utility;
  std::vector<double> payment;
};

struct Outcome {
  std::vector<Route> routes;
  bool series_parallel = false;
  RouteCapacity capacity;
  SlotSet slots;
  Allocation allocation;
  std::vector<Trip> trips;
  double welfare = 0.0;
  double epsilon = 0.0;
  PriceSystem prices;
  /// Largest disagreement between copies of the same (route, departure).
  double price_spread = 0.0;
};

struct SolveOptions {
  std::optional<double> epsilon;  // default: instance value, else default_epsilon
  AllocateOptions auction;
};

/// Full route-price pipeline: greedy route capacities, temporally repeated
/// slots, ascending auction, trip vector, route prices and payments.
Outcome solve(const Instance& inst, const SolveOptions& options = {});

/// Same pipeline on explicit slots over the given routes (counts[r][z-1]).
Outcome solve_on_slots(const Instance& inst, std::span<const Route> routes, const std::vector<std::vector<int>>& counts,
                       const SolveOptions& options = {});

/// Trips of the nonempty representative groups. Throws CapacityViolation if
/// an agent rides twice or a (route, departure) exceeds its slot count.
std::vector<Trip> build_trip_vector(const SlotMarket& market, const Allocation& allocation);

/// lambda[r][z-1]: the largest slot surplus among copies of (r, z), at least
/// 0; for departures with no slot, the best surplus any group could get.
/// `spread` receives the largest gap between copies.
std::vector<std::vector<double>> route_prices(const SlotMarket& market, const Allocation& allocation,
                                              std::span<const double> utility, int horizon, double* spread = nullptr);

/// p_m = (value of m's trip to m) - u_m; 0 for agents without a trip.
std::vector<double> payments(std::span<const Agent> agents, std::span<const Route> routes, std::span<const Trip> trips,
                             std::span<const double> utility, const MarketCosts& costs);

/// Utilities from trips and payments: u_m = (value of m's trip) - p_m.
std::vector<double> utilities_from_payments(std::span<const Agent> agents, std::span<const Route> routes,
                                            std::span<const Trip> trips, std::span<const double> payment,
                                            const MarketCosts& costs);

struct EquilibriumReport {
  bool individual_rationality = true;
  bool stability = true;
  bool budget_balance = true;
  bool market_clearing = true;
  std::vector<std::string> violations;
  double welfare = 0.0;
  double tolerance = 0.0;
  std::size_t stability_checked = 0;
  double stability_coverage = 1.0;

  bool pass() const { return individual_rationality && stability && budget_balance && market_clearing; }
};

struct VerifyOptions {
  std::size_t enumeration_cap = 200'000;
  std::uint64_t seed = 1;
};

/// Checks the four equilibrium conditions of (trips, payments, prices) with
/// tolerance epsilon |M| + 1e-6. Capacity feasibility of the trips is
/// reported under market clearing.
EquilibriumReport verify_equilibrium(const Instance& inst, std::span<const Route> routes, std::span<const Trip> trips,
                                     const PriceSystem& prices, double epsilon, const VerifyOptions& options = {});

struct EdgeTolls {
  ResourceModel resources;
  std::vector<double> toll;
  double total = 0.0;  // sum q_e tau_e^t
  std::size_t rounds = 0;
  std::size_t rows = 0;
};

/// Minimal-total tolls supporting the fixed utilities, by cutting planes on
/// the dual program with exact greedy separation per (route, departure).
/// Utilities that come from the auction are only accurate to epsilon, so each
/// stability row is required to hold up to `tolerance`.
/// Throws Infeasible when u + tolls cannot match the welfare of `trips`
/// (u is then not an equilibrium utility vector).
EdgeTolls edge_tolls(const Instance& inst, std::span<const Route> routes, std::span<const double> utility,
                     std::span<const Trip> trips, double tolerance);

struct VcgOutcome {
  Outcome base;
  std::vector<double> welfare_without;  // S_{-m}(x*_{-m})
  std::vector<double> utility;          // u-dagger
  std::vector<double> payment;          // p-dagger
};

/// VCG utilities and payments by re-solving without each agent.
VcgOutcome vcg_outcome(const Instance& inst, const SolveOptions& options = {});

/// Sum of the trip values, recomputed from the agents.
double welfare_of(std::span<const Agent> agents, std::span<const Route> routes, std::span<const Trip> trips,
                  const MarketCosts& costs);

struct ExistenceCheck {
  double lp_value = 0.0;
  double ip_value = 0.0;
  bool fractional = false;
  bool exists() const { return lp_value - ip_value <= 1e-6; }
};

/// Equilibrium (with edge prices) exists iff the trip LP has an integral
/// optimum; decided by the brute-force oracles.
ExistenceCheck check_existence(const Instance& inst);

}  // namespace poolmarket
