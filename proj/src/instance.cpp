#include "poolmarket/instance.hpp"

#include <cstdint>
#include <cstdlib>
#include <map>

#include "poolmarket/common.hpp"

namespace poolmarket {

void Instance::check() const {
  check_costs(costs);
  for (const auto& a : agents) check_agent(a, costs.vehicle_capacity);
  if (epsilon && !(*epsilon > 0.0)) throw Error(ErrorCode::NonPositiveEpsilon, "epsilon must be positive");
}

ResourceModel ResourceModel::edge_ticks(const Network& net, std::span<const Route> routes, int horizon) {
  ResourceModel rm;
  rm.edge_mode_ = true;
  rm.horizon_ = horizon;
  std::map<std::pair<int, int>, int> index;  // (edge, tick) -> resource
  rm.uses_.assign(routes.size(), std::vector<std::vector<int>>(std::max(horizon, 0)));
  for (std::size_t r = 0; r < routes.size(); ++r) {
    for (int z = 1; z <= horizon; ++z) {
      if (!arrives_within(z, routes[r].total_time, horizon)) continue;
      for (std::size_t pos = 0; pos < routes[r].edges.size(); ++pos) {
        const int e = routes[r].edges[pos];
        const int tick = entry_tick(z + routes[r].prefix_at(pos));
        auto [it, fresh] = index.emplace(std::make_pair(e, tick), static_cast<int>(rm.capacity_.size()));
        if (fresh) {
          rm.capacity_.push_back(net.edges()[e].capacity);
          rm.labels_.push_back(net.edges()[e].id + "@" + std::to_string(tick));
          rm.edge_.push_back(e);
          rm.tick_.push_back(tick);
        }
        rm.uses_[r][z - 1].push_back(it->second);
      }
    }
  }
  return rm;
}

ResourceModel ResourceModel::route_slots(std::span<const Route> routes, const std::vector<std::vector<int>>& counts,
                                         int horizon) {
  ResourceModel rm;
  rm.horizon_ = horizon;
  rm.uses_.assign(routes.size(), std::vector<std::vector<int>>(std::max(horizon, 0)));
  for (std::size_t r = 0; r < routes.size(); ++r) {
    for (int z = 1; z <= horizon; ++z) {
      if (!arrives_within(z, routes[r].total_time, horizon)) continue;
      const int k = r < counts.size() && z - 1 < static_cast<int>(counts[r].size()) ? counts[r][z - 1] : 0;
      rm.uses_[r][z - 1].push_back(static_cast<int>(rm.capacity_.size()));
      rm.capacity_.push_back(k);
      rm.labels_.push_back("r" + std::to_string(r) + "@" + std::to_string(z));
      rm.edge_.push_back(-1);
      rm.tick_.push_back(z);
    }
  }
  return rm;
}

std::size_t count_trip_candidates(std::size_t members, std::size_t routes, int horizon, int capacity) {
  double groups = 0.0;
  for (int n = 1; n <= capacity; ++n) groups += binomial(static_cast<int>(members), n);
  const double total = groups * static_cast<double>(routes) * std::max(horizon, 0);
  if (total >= static_cast<double>(SIZE_MAX)) return SIZE_MAX;
  return static_cast<std::size_t>(total);
}

std::size_t enumeration_cap(std::size_t fallback) {
  if (const char* env = std::getenv("POOLMARKET_MAX_ENUM")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return fallback;
}

}  // namespace poolmarket
