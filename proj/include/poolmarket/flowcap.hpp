#pragma once

#include <span>
#include <vector>

#include "poolmarket/network.hpp"

namespace poolmarket {

/// Static route capacities w*, aligned with `routes`.
struct RouteCapacity {
  std::vector<Route> routes;
  std::vector<int> capacity;

  long long total() const;
};

/// Greedy static route capacity: repeatedly saturate the shortest route with
/// positive residual capacity on every edge. `routes` must come from
/// enumerate_routes (sorted), so the first usable route is the shortest one
/// with ties broken by edge-index sequence.
RouteCapacity greedy_route_capacity(const Network& net, std::span<const Route> routes);
RouteCapacity greedy_route_capacity(const Network& net);

/// Number of integer departures z >= 1 with z + duration <= horizon.
int departures_within(double duration, int horizon);

/// One unit of capacity on route `route` departing at `departure`.
struct Slot {
  int id = 0;
  int route = 0;  // index into the route list the set was built from
  int departure = 1;
  int copy = 0;
};

struct SlotSet {
  std::vector<Slot> slots;

  std::size_t size() const { return slots.size(); }
  bool empty() const { return slots.empty(); }
  /// Number of slots on (route, departure).
  int count(int route, int departure) const;
};

/// Slots of the temporally repeated flow: w*_r copies at every departure that
/// arrives by the horizon. Ids follow route order, then departure, then copy.
SlotSet temporally_repeated(const RouteCapacity& w, int horizon);

/// Slots from an explicit per-(route, departure) count; counts[r][z-1].
SlotSet slots_from_counts(std::span<const Route> routes, const std::vector<std::vector<int>>& counts, int horizon);

/// Vehicles that can have arrived by time t: sum_r w*_r times the departures
/// z >= 1 with z + d_r <= t.
long long arrival_profile(const RouteCapacity& w, int t);

}  // namespace poolmarket
