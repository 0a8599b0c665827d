#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "poolmarket/equilibrium.hpp"
#include "poolmarket/instance.hpp"
#include "poolmarket/network.hpp"
#include "poolmarket/preferences.hpp"

namespace poolmarket {

/// Unvalidated population: member agent ids and an origin-destination pair.
struct PopulationSpec {
  int id = 0;
  std::vector<int> members;  // agent ids
  std::string origin;
  std::string destination;
};

/// Validated population over the shared network.
struct Population {
  int id = 0;
  std::vector<int> members;  // indices into MultiInstance::agents
  Network network;           // shared edges, rooted at this population's pair
  std::vector<Route> routes;  // over `network`
  /// Index in MultiInstance::edges of each edge of `network`.
  std::vector<int> edge_map;
};

/// Several populations sharing edge capacities over one horizon.
class MultiInstance {
 public:
  /// Validates the network per population and the partition of agents.
  /// Throws NonIntegralTravelTime, InvalidPreferences, HeterogeneousDisutility,
  /// DuplicateId or UnknownNode.
  static MultiInstance build(NetworkSpec network, std::vector<Agent> agents, MarketCosts costs,
                             std::vector<PopulationSpec> populations, std::optional<double> epsilon = std::nullopt);

  const NetworkSpec& network() const { return network_; }
  const std::vector<EdgeSpec>& edges() const { return network_.edges; }
  int horizon() const { return network_.horizon; }
  const std::vector<Agent>& agents() const { return agents_; }
  const MarketCosts& costs() const { return costs_; }
  const std::vector<Population>& populations() const { return populations_; }
  const std::vector<PopulationSpec>& population_specs() const { return specs_; }
  std::optional<double> epsilon() const { return epsilon_; }

  /// Single-market view of population i (its agents only, its network).
  Instance submarket(std::size_t i) const;

 private:
  NetworkSpec network_;
  std::vector<Agent> agents_;
  MarketCosts costs_;
  std::vector<PopulationSpec> specs_;
  std::vector<Population> populations_;
  std::optional<double> epsilon_;
};

/// Index of a capacity variable q^{i,z}_r.
struct QIndex {
  int population = 0;
  int route = 0;
  int departure = 1;

  friend auto operator<=>(const QIndex&, const QIndex&) = default;
};

/// Branching bounds on capacity variables.
struct QBounds {
  std::map<QIndex, int> lower;
  std::map<QIndex, int> upper;

  /// True when no lower bound exceeds the upper bound of the same index.
  bool consistent() const;
};

/// Trip column of the master program; `group` holds indices into
/// MultiInstance::agents.
struct MultiTrip {
  int population = 0;
  int route = 0;
  int departure = 1;
  std::vector<int> group;
  double value = 0.0;

  friend bool operator==(const MultiTrip&, const MultiTrip&) = default;
};

/// Capacity allocation q[i][r][z-1].
using CapacityAllocation = std::vector<std::vector<std::vector<double>>>;

struct MasterResult {
  double value = 0.0;
  CapacityAllocation q;
  std::vector<MultiTrip> columns;  // columns with positive x
  std::vector<double> x;
  std::size_t rounds = 0;
  std::size_t columns_added = 0;
  /// Largest reduced cost in the final pricing sweep.
  double max_reduced_cost = 0.0;
};

struct MasterOptions {
  std::size_t max_rounds = 2'000;
  double reduced_cost_tol = 1e-7;
};

/// Column-generation pool shared by the master solves of a search.
class ColumnPool {
 public:
  explicit ColumnPool(const MultiInstance& inst);

  std::size_t size() const { return columns_.size(); }
  const std::vector<MultiTrip>& columns() const { return columns_; }
  /// Adds a column unless an identical one exists; returns true if added.
  bool add(MultiTrip column);

 private:
  std::vector<MultiTrip> columns_;
  std::map<std::tuple<int, int, int, std::vector<int>>, std::size_t> index_;
};

/// Linear relaxation of the multi-population problem under branching bounds,
/// by column generation over `pool`. Throws Infeasible or IterationCapExceeded.
MasterResult solve_master(const MultiInstance& inst, const QBounds& bounds, ColumnPool& pool,
                          const MasterOptions& options = {});
MasterResult solve_master(const MultiInstance& inst, const QBounds& bounds = {});

struct SubmarketResult {
  std::vector<std::vector<int>> counts;  // slots per (route, departure)
  Outcome outcome;
  EquilibriumReport report;
};

/// Route-price equilibrium of population i under integral capacities
/// counts[r][z-1].
SubmarketResult submarket_equilibrium(const MultiInstance& inst, std::size_t i,
                                      const std::vector<std::vector<int>>& counts, const SolveOptions& options = {});

struct BranchOptions {
  std::size_t node_cap = 10'000;
  /// Evaluate the temporally repeated greedy allocation before branching.
  bool seed_incumbent = true;
  MasterOptions master;
  SolveOptions solve;
};

struct BranchResult {
  double value = 0.0;
  /// Integral allocation q[i][r][z-1] of the best leaf.
  std::vector<std::vector<std::vector<int>>> q;
  std::vector<SubmarketResult> submarkets;
  double root_bound = 0.0;
  std::size_t nodes = 0;
  std::size_t columns = 0;
};

/// Exact depth-first branch-and-price on the capacity variables. Throws
/// NodeCapExceeded.
BranchResult branch_and_price(const MultiInstance& inst, const BranchOptions& options = {});

/// True when the load of an allocation on every edge and tick is within q_e.
bool allocation_fits(const MultiInstance& inst, const std::vector<std::vector<std::vector<int>>>& q);

}  // namespace poolmarket
