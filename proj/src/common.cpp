#include "poolmarket/common.hpp"

#include <functional>

namespace poolmarket {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveCapacity: return "NonPositiveCapacity";
    case ErrorCode::NonPositiveTravelTime: return "NonPositiveTravelTime";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::RouteExplosion: return "RouteExplosion";
    case ErrorCode::GroupTooLarge: return "GroupTooLarge";
    case ErrorCode::InvalidPreferences: return "InvalidPreferences";
    case ErrorCode::HeterogeneousDisutility: return "HeterogeneousDisutility";
    case ErrorCode::NonPositiveEpsilon: return "NonPositiveEpsilon";
    case ErrorCode::AuctionRoundCap: return "AuctionRoundCap";
    case ErrorCode::CapacityViolation: return "CapacityViolation";
    case ErrorCode::EnumerationCap: return "EnumerationCap";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::SeparationCapExceeded: return "SeparationCapExceeded";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::OracleIncomplete: return "OracleIncomplete";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NonIntegralTravelTime: return "NonIntegralTravelTime";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::IterationCapExceeded: return "IterationCapExceeded";
    case ErrorCode::NodeCapExceeded: return "NodeCapExceeded";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<std::vector<int>> subsets_up_to(int n, int max_size) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (!cur.empty()) out.push_back(cur);
    if (static_cast<int>(cur.size()) == max_size) return;
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

}  // namespace poolmarket
