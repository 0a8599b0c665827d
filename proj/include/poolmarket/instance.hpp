#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "poolmarket/network.hpp"
#include "poolmarket/preferences.hpp"

namespace poolmarket {

/// Single origin-destination market.
struct Instance {
  Network network;
  std::vector<Agent> agents;
  MarketCosts costs;
  std::optional<double> epsilon;

  /// Validates every agent against the costs; throws InvalidPreferences.
  void check() const;
};

/// An organized trip; `group` holds sorted agent indices.
struct Trip {
  int departure = 1;
  int route = 0;
  std::vector<int> group;
  double value = 0.0;

  friend bool operator==(const Trip&, const Trip&) = default;
};

/// Capacity resources consumed by a trip departing at z on a route.
///
/// Edge mode: one resource per (edge, entry tick), capacity q_e.
/// Slot mode: one resource per (route, departure), capacity from a count table.
class ResourceModel {
 public:
  static ResourceModel edge_ticks(const Network& net, std::span<const Route> routes, int horizon);
  static ResourceModel route_slots(std::span<const Route> routes, const std::vector<std::vector<int>>& counts,
                                   int horizon);

  std::size_t size() const { return capacity_.size(); }
  long long capacity(int res) const { return capacity_[res]; }
  const std::vector<long long>& capacities() const { return capacity_; }
  const std::string& label(int res) const { return labels_[res]; }
  /// Resources of a departure at z (1-based) on route r; empty if the trip
  /// does not arrive by the horizon.
  const std::vector<int>& uses(int route, int z) const { return uses_[route][z - 1]; }
  /// Edge and tick of a resource (edge mode only; -1 otherwise).
  int edge_of(int res) const { return edge_[res]; }
  int tick_of(int res) const { return tick_[res]; }
  bool edge_mode() const { return edge_mode_; }
  int horizon() const { return horizon_; }

 private:
  bool edge_mode_ = false;
  int horizon_ = 0;
  std::vector<long long> capacity_;
  std::vector<std::string> labels_;
  std::vector<int> edge_;
  std::vector<int> tick_;
  std::vector<std::vector<std::vector<int>>> uses_;
};

/// Upper bound on the number of (z, r, group) candidates with 1 <= |group| <= A
/// (saturates at SIZE_MAX).
std::size_t count_trip_candidates(std::size_t members, std::size_t routes, int horizon, int capacity);

/// Enumeration cap from POOLMARKET_MAX_ENUM, else `fallback`.
std::size_t enumeration_cap(std::size_t fallback);

}  // namespace poolmarket
