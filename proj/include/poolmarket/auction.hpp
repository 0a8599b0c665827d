#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "poolmarket/flowcap.hpp"
#include "poolmarket/preferences.hpp"

namespace poolmarket {

/// Read-only data of the auxiliary economy: slots are buyers, agents are goods.
/// All agents must share pooling disutility tables.
class SlotMarket {
 public:
  SlotMarket(std::span<const Agent> agents, std::span<const Route> routes, SlotSet slots, MarketCosts costs);

  std::size_t num_agents() const { return agents_.size(); }
  std::size_t num_slots() const { return slots_.size(); }
  std::span<const Agent> agents() const { return agents_; }
  std::span<const Route> routes() const { return routes_; }
  const SlotSet& slot_set() const { return slots_; }
  const Slot& slot(std::size_t l) const { return slots_.slots[l]; }
  const MarketCosts& costs() const { return costs_; }

  /// eta of agent m at slot l; -infinity when Infeasible.
  double eta(std::size_t l, int m) const { return eta_[l][m]; }
  std::span<const double> etas(std::size_t l) const { return eta_[l]; }
  /// xi(0..A) of slot l's route.
  std::span<const Value> xi(std::size_t l) const { return xi_[slots_.slots[l].route]; }

  /// Augmented value of `bundle` at slot l (greedy, from scratch).
  AugmentedValue augmented(std::size_t l, std::span<const int> bundle) const;

 private:
  std::vector<Agent> agents_;
  std::vector<Route> routes_;
  SlotSet slots_;
  MarketCosts costs_;
  std::vector<std::vector<double>> eta_;
  std::vector<std::vector<Value>> xi_;
};

/// Per-slot auction state.
struct SlotState {
  std::vector<int> bundle;          // augmented group, sorted
  std::vector<int> representative;  // subgroup that rides, sorted
  double lambda = 0.0;              // smallest eta in the representative group (+inf if empty)
  double value = 0.0;               // augmented value of the bundle
  double paid = 0.0;                // sum of member utilities
  double surplus() const { return value - paid; }
};

/// Recomputes a slot's state from its bundle.
SlotState slot_state(const SlotMarket& market, std::size_t l, std::vector<int> bundle, std::span<const double> utility);

struct JlResult {
  std::vector<int> added;  // in the order examined
  SlotState tentative;     // state after adding them at utility + epsilon
};

/// Greedy demand of slot l for agents outside its bundle, each priced at
/// u + epsilon; stops at the first candidate whose marginal gain is not
/// positive.
JlResult compute_Jl(const SlotMarket& market, std::size_t l, const SlotState& state, std::span<const double> utility,
                    double epsilon);

struct Allocation {
  double epsilon = 0.0;
  std::vector<SlotState> slots;
  std::vector<long long> ticks;  // utility of agent m is ticks[m] * epsilon
  std::vector<int> holder;       // slot whose bundle contains m, or -1
  std::size_t rounds = 0;

  std::vector<double> utility() const;
  double welfare() const;
};

struct AllocateOptions {
  /// Recompute every slot from scratch after each round and throw on mismatch.
  bool debug_check = false;
  /// Overrides the default |M| * V_max / epsilon round cap when nonzero.
  std::size_t round_cap = 0;
};

/// min(1 / (4 |M|), 1e-3).
double default_epsilon(std::size_t num_agents);

/// Ascending auction over slots. Throws NonPositiveEpsilon,
/// HeterogeneousDisutility, or AuctionRoundCap.
Allocation allocate(const SlotMarket& market, double epsilon, const AllocateOptions& options = {});

struct WalrasianReport {
  bool demand_ok = true;
  bool unassigned_zero = true;
  std::vector<std::string> violations;
  bool ok() const { return demand_ok && unassigned_zero; }
};

/// Checks that every slot's bundle is within epsilon |M| of its demand at the
/// final utilities (exhaustive over subsets, |M| <= 16) and that agents held
/// by no slot have zero utility.
WalrasianReport verify_walrasian(const SlotMarket& market, std::span<const SlotState> slots,
                                 std::span<const double> utility, double epsilon);

}  // namespace poolmarket
