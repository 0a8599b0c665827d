#include "poolmarket/flowcap.hpp"

#include <algorithm>
#include <climits>

#include "poolmarket/common.hpp"

namespace poolmarket {

long long RouteCapacity::total() const {
  long long s = 0;
  for (int c : capacity) s += c;
  return s;
}

RouteCapacity greedy_route_capacity(const Network& net, std::span<const Route> routes) {
  RouteCapacity out;
  out.routes.assign(routes.begin(), routes.end());
  out.capacity.assign(routes.size(), 0);
  std::vector<int> residual;
  for (const auto& e : net.edges()) residual.push_back(e.capacity);

  while (true) {
    int chosen = -1;
    for (std::size_t r = 0; r < routes.size(); ++r) {
      if (std::all_of(routes[r].edges.begin(), routes[r].edges.end(), [&](int e) { return residual[e] > 0; })) {
        chosen = static_cast<int>(r);
        break;
      }
    }
    if (chosen < 0) break;
    int w = INT_MAX;
    for (int e : routes[chosen].edges) w = std::min(w, residual[e]);
    out.capacity[chosen] += w;
    for (int e : routes[chosen].edges) residual[e] -= w;
  }
  return out;
}

RouteCapacity greedy_route_capacity(const Network& net) {
  const auto routes = enumerate_routes(net);
  return greedy_route_capacity(net, routes);
}

int departures_within(double duration, int horizon) {
  int n = 0;
  for (int z = 1; z <= horizon; ++z)
    if (arrives_within(z, duration, horizon)) ++n;
  return n;
}

int SlotSet::count(int route, int departure) const {
  return static_cast<int>(std::count_if(slots.begin(), slots.end(), [&](const Slot& s) {
    return s.route == route && s.departure == departure;
  }));
}

SlotSet temporally_repeated(const RouteCapacity& w, int horizon) {
  std::vector<std::vector<int>> counts(w.routes.size(), std::vector<int>(std::max(horizon, 0), 0));
  for (std::size_t r = 0; r < w.routes.size(); ++r)
    for (int z = 1; z <= horizon; ++z)
      if (arrives_within(z, w.routes[r].total_time, horizon)) counts[r][z - 1] = w.capacity[r];
  return slots_from_counts(w.routes, counts, horizon);
}

SlotSet slots_from_counts(std::span<const Route> routes, const std::vector<std::vector<int>>& counts, int horizon) {
  SlotSet set;
  for (std::size_t r = 0; r < routes.size() && r < counts.size(); ++r) {
    for (int z = 1; z <= horizon && z <= static_cast<int>(counts[r].size()); ++z) {
      if (!arrives_within(z, routes[r].total_time, horizon)) continue;
      for (int c = 0; c < counts[r][z - 1]; ++c)
        set.slots.push_back({static_cast<int>(set.slots.size()), static_cast<int>(r), z, c});
    }
  }
  return set;
}

long long arrival_profile(const RouteCapacity& w, int t) {
  long long total = 0;
  for (std::size_t r = 0; r < w.routes.size(); ++r)
    total += static_cast<long long>(w.capacity[r]) * departures_within(w.routes[r].total_time, t);
  return total;
}

}  // namespace poolmarket
