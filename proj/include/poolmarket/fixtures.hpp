#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "poolmarket/instance.hpp"
#include "poolmarket/multipop.hpp"
#include "poolmarket/network.hpp"

/// Bundled regression instances.
namespace poolmarket::fixtures {

/// Wheatstone network: e1 o-a, e2 a-d, e3 o-b, e4 b-d, e5 a-b.
NetworkSpec wheatstone();

/// Three identical agents on the wheatstone network, vehicles of two.
Instance example1();

/// Two parallel unit edges, twelve agents in two disutility classes.
Instance example2();

/// Welfare figures printed alongside the second example; they do not follow
/// from its parameters and are kept for reference only.
struct PrintedValues {
  double lp = 0.0;
  double ip = 0.0;
};
inline constexpr PrintedValues kExample2Printed{662.5, 621.0};

/// Value table of three agents with heterogeneous pooling costs; bit k of a
/// mask is agent k+1.
std::map<std::uint32_t, double> footnote_table();

/// Two single-agent populations with unit values. In the first graph their
/// paths are edge-disjoint; in the second they must share an edge at the same
/// tick.
MultiInstance prop4_disjoint();
MultiInstance prop4_shared();

inline constexpr std::uint64_t kBayMiniSeed = 2023;

/// Synthetic three-origin, one-destination market with low, medium and high
/// income classes (population ids 1, 2, 3). Time is in ticks of ten minutes.
MultiInstance bay_mini(std::uint64_t seed = kBayMiniSeed);

/// Names accepted by the demo command.
bool is_fixture_name(const std::string& name);

}  // namespace poolmarket::fixtures
