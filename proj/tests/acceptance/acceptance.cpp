// Acceptance suite: one PASS/FAIL line per criterion A1..A10.
// Usage: acceptance [A1 A2 ...]   (no arguments runs everything)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../support/random_instances.hpp"
#include "poolmarket/equilibrium.hpp"
#include "poolmarket/fixtures.hpp"
#include "poolmarket/flowcap.hpp"
#include "poolmarket/multipop.hpp"
#include "poolmarket/oracle.hpp"

using namespace poolmarket;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  os << x;
  return os.str();
}

double eps_for(const Instance& inst) { return 1.0 / (4.0 * static_cast<double>(std::max<std::size_t>(inst.agents.size(), 1))); }

// ---------------------------------------------------------------------------

Verdict a1() {
  const auto t0 = std::chrono::steady_clock::now();
  const Instance inst = fixtures::example1();
  const auto p = oracle::Problem::from_instance(inst);
  const auto lp = oracle::lp_optimum(p);
  const auto ip = oracle::ip_optimum(p);
  const auto support = lp.support(1e-9);

  // Three half-integral pair trips, one per route, every agent in two of them.
  bool shape = support.size() == 3;
  std::set<int> routes;
  std::vector<int> load(inst.agents.size(), 0);
  for (const auto& [t, x] : support) {
    shape = shape && std::fabs(x - 0.5) <= 1e-6 && t.group.size() == 2 && t.departure == 1;
    routes.insert(t.route);
    for (int m : t.group) ++load[m];
  }
  shape = shape && routes.size() == 3 && std::all_of(load.begin(), load.end(), [](int c) { return c == 2; });

  // The listed solution itself: (1,2) on e1-e2, (2,3) on e1-e5-e4, (1,3) on
  // e3-e4, each at 0.5. Check feasibility against every edge-tick and value.
  const Network& net = inst.network;
  auto route_index = [&](const std::string& label) {
    for (std::size_t r = 0; r < p.routes.size(); ++r)
      if (route_label(net, p.routes[r]) == label) return static_cast<int>(r);
    return -1;
  };
  const std::vector<std::pair<int, std::vector<int>>> listed{
      {route_index("e1-e2"), {0, 1}}, {route_index("e1-e5-e4"), {1, 2}}, {route_index("e3-e4"), {0, 2}}};
  std::vector<double> used(p.resources.size(), 0.0);
  std::vector<double> rides(inst.agents.size(), 0.0);
  double listed_value = 0.0;
  for (const auto& [r, g] : listed) {
    for (int res : p.resources.uses(r, 1)) used[res] += 0.5;
    for (int m : g) rides[m] += 0.5;
    listed_value += 0.5 * trip_value(inst.agents, g, 1, p.routes[r], inst.costs).amount();
  }
  bool listed_ok = std::fabs(listed_value - 9.8) <= 1e-6;
  for (std::size_t res = 0; res < used.size(); ++res) listed_ok = listed_ok && used[res] <= p.resources.capacity(res) + 1e-9;
  for (double v : rides) listed_ok = listed_ok && v <= 1.0 + 1e-9;

  const auto ex = check_existence(inst);
  const double secs = elapsed(t0);
  Verdict v;
  v.pass = std::fabs(lp.welfare - 9.8) <= 1e-6 && shape && listed_ok && ip.welfare < lp.welfare - 1e-6 &&
           !ex.exists() && secs < 5.0;
  v.detail = "LP " + fmt(lp.welfare) + ", IP " + fmt(ip.welfare) + ", half-integral pair support " +
             (shape ? "yes" : "no") + ", listed solution value " + fmt(listed_value) + (listed_ok ? " feasible" : " infeasible") +
             ", equilibrium " + (ex.exists() ? "exists" : "does not exist") + ", " + fmt(secs, 3) + " s";
  return v;
}

Verdict a2() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = oracle::gs_check(oracle::ValueOracle::from_table(3, fixtures::footnote_table()));
  const double secs = elapsed(t0);
  Verdict v;
  if (!rep.condition2) {
    v.detail = "no condition (ii) violation found";
    return v;
  }
  const auto& c = *rep.condition2;
  v.pass = c.lhs == 150.0 && c.rhs1 == 110.0 && c.rhs2 == 110.0 && secs < 1.0;
  v.detail = c.to_string() + ", " + fmt(secs, 3) + " s";
  return v;
}

// Shared by A3 and A10.
struct RandomCase {
  std::uint64_t seed;
  double ip;
  double welfare;
  bool verified;
};

std::vector<RandomCase> run_random_cases(int count) {
  std::vector<RandomCase> out;
  for (int k = 0; k < count; ++k) {
    const std::uint64_t seed = 100 + static_cast<std::uint64_t>(k);
    const Instance inst = testing::random_sp_instance(seed);
    SolveOptions opts;
    opts.epsilon = eps_for(inst);
    const Outcome o = solve(inst, opts);
    const auto ip = oracle::ip_optimum(oracle::Problem::from_instance(inst));
    const auto rep = verify_equilibrium(inst, o.routes, o.trips, o.prices, o.epsilon);
    out.push_back({seed, ip.welfare, o.welfare, rep.pass()});
  }
  return out;
}

const std::vector<RandomCase>& random_cases() {
  static const std::vector<RandomCase> cases = run_random_cases(60);
  return cases;
}

Verdict a3() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& cases = random_cases();
  int welfare_ok = 0, verified = 0;
  std::string first_bad;
  for (const auto& c : cases) {
    const bool w = std::fabs(c.welfare - c.ip) <= 1e-6;
    welfare_ok += w;
    verified += c.verified;
    if ((!w || !c.verified) && first_bad.empty())
      first_bad = ", first mismatch seed " + std::to_string(c.seed) + " (pipeline " + fmt(c.welfare) + ", IP " +
                  fmt(c.ip) + ")";
  }
  const double secs = elapsed(t0);
  Verdict v;
  const int n = static_cast<int>(cases.size());
  v.pass = n >= 50 && welfare_ok == n && verified == n && secs < 60.0;
  v.detail = std::to_string(welfare_ok) + "/" + std::to_string(n) + " welfare matches, " + std::to_string(verified) +
             "/" + std::to_string(n) + " pass all four conditions" + first_bad + ", " + fmt(secs, 3) + " s";
  return v;
}

Verdict a4() {
  const auto t0 = std::chrono::steady_clock::now();
  const Instance inst = fixtures::example2();
  const auto p = oracle::Problem::from_instance(inst);
  const auto lp = oracle::lp_optimum(p);
  const auto ip = oracle::ip_optimum(p);
  const double secs = elapsed(t0);
  Verdict v;
  v.pass = lp.welfare > ip.welfare + 1e-6 && lp.fractional && secs < 10.0;
  v.detail = "LP " + fmt(lp.welfare) + " > IP " + fmt(ip.welfare) + (lp.fractional ? ", fractional" : ", integral") +
             " (reference values not reproduced: " + fmt(fixtures::kExample2Printed.lp) + " / " +
             fmt(fixtures::kExample2Printed.ip) + "), " + fmt(secs, 3) + " s";
  return v;
}

Verdict a5() {
  const auto t0 = std::chrono::steady_clock::now();
  int instances = 0, checks = 0, equal = 0;
  std::string first_bad;
  for (std::uint64_t seed = 500; instances < 25; ++seed) {
    testing::Rng rng(seed);
    const int horizon = rng.uniform(2, 7);
    const Network net = Network::validate(testing::random_sp_network(rng, rng.uniform(1, 6), horizon, 3, 3));
    const auto w = greedy_route_capacity(net);
    ++instances;
    for (int t = 1; t <= horizon; ++t) {
      ++checks;
      const long long a = arrival_profile(w, t);
      const long long f = oracle::time_expanded_maxflow(net, t);
      if (a == f) {
        ++equal;
      } else if (first_bad.empty()) {
        first_bad = ", seed " + std::to_string(seed) + " t=" + std::to_string(t) + ": " + std::to_string(a) +
                    " vs " + std::to_string(f);
      }
    }
  }
  const double secs = elapsed(t0);
  Verdict v;
  v.pass = equal == checks && secs < 30.0;
  v.detail = std::to_string(equal) + "/" + std::to_string(checks) + " (instance, t) pairs equal over " +
             std::to_string(instances) + " networks" + first_bad + ", " + fmt(secs, 3) + " s";
  return v;
}

Verdict a6() {
  const auto t0 = std::chrono::steady_clock::now();
  int instances = 0, samples = 0, utility_ok = 0, toll_ok = 0;
  std::string first_bad;
  for (std::uint64_t seed = 700; instances < 12 && seed < 900; ++seed) {
    const Instance inst = testing::random_sp_instance(seed);
    const auto p = oracle::Problem::from_instance(inst);
    const auto lp = oracle::lp_optimum(p);
    const auto ip = oracle::ip_optimum(p);
    if (lp.welfare - ip.welfare > 1e-6 || ip.trips.empty()) continue;
    ++instances;
    SolveOptions opts;
    opts.epsilon = eps_for(inst);
    const auto vcg = vcg_outcome(inst, opts);
    const double tol = opts.epsilon.value() * static_cast<double>(inst.agents.size()) + 1e-6;
    const auto tolls = edge_tolls(inst, vcg.base.routes, vcg.utility, vcg.base.trips, tol);
    for (const auto& d : oracle::dual_vertex_sample(p, 6, seed)) {
      ++samples;
      bool u_ok = true;
      for (std::size_t m = 0; m < inst.agents.size(); ++m) u_ok = u_ok && d.utility[m] <= vcg.utility[m] + 1e-6;
      double sum_u = 0.0;
      for (double x : d.utility) sum_u += x;
      const double sample_tolls = d.objective - sum_u;
      const bool t_ok = tolls.total <= sample_tolls + 1e-6;
      utility_ok += u_ok;
      toll_ok += t_ok;
      if ((!u_ok || !t_ok) && first_bad.empty())
        first_bad = ", first failure seed " + std::to_string(seed) + " (VCG tolls " + fmt(tolls.total) +
                    ", sampled " + fmt(sample_tolls) + ")";
    }
  }
  const double secs = elapsed(t0);
  Verdict v;
  v.pass = instances >= 10 && samples >= 5 * instances && utility_ok == samples && toll_ok == samples;
  v.detail = std::to_string(instances) + " zero-gap instances, " + std::to_string(samples) + " dual samples; u <= u-dagger in " +
             std::to_string(utility_ok) + ", VCG toll total minimal in " + std::to_string(toll_ok) + first_bad + ", " +
             fmt(secs, 3) + " s";
  return v;
}

// Exhaustive q-grid: every integral allocation within edge capacities (per
// population capped at its size, which loses nothing), each submarket solved
// by the exact IP oracle.
double q_grid_optimum(const MultiInstance& mi) {
  const int T = mi.horizon();
  struct Entry {
    int route, z;
    int cap;
  };
  std::vector<std::vector<Entry>> entries(mi.populations().size());
  std::vector<std::map<std::vector<int>, double>> best(mi.populations().size());
  std::vector<std::vector<std::vector<int>>> grids(mi.populations().size());

  for (std::size_t i = 0; i < mi.populations().size(); ++i) {
    const auto& pop = mi.populations()[i];
    for (std::size_t r = 0; r < pop.routes.size(); ++r)
      for (int z = 1; z <= T; ++z) {
        if (!arrives_within(z, pop.routes[r].total_time, T)) continue;
        long long cap = static_cast<long long>(pop.members.size());
        for (int e : pop.routes[r].edges) cap = std::min(cap, mi.edges()[pop.edge_map[e]].capacity);
        entries[i].push_back({static_cast<int>(r), z, static_cast<int>(cap)});
      }
    // Enumerate the per-population grid.
    std::vector<int> q(entries[i].size(), 0);
    const Instance sub = mi.submarket(i);
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
      if (k == q.size()) {
        std::vector<std::vector<int>> counts(pop.routes.size(), std::vector<int>(T, 0));
        for (std::size_t n = 0; n < q.size(); ++n) counts[entries[i][n].route][entries[i][n].z - 1] = q[n];
        const auto prob = oracle::Problem::with_route_counts(sub, pop.routes, counts);
        best[i][q] = oracle::ip_optimum(prob).welfare;
        grids[i].push_back(q);
        return;
      }
      for (int v = 0; v <= entries[i][k].cap; ++v) {
        q[k] = v;
        rec(k + 1);
      }
    };
    rec(0);
  }

  auto fits = [&](const std::vector<std::vector<int>>& qs) {
    std::map<std::pair<std::string, int>, long long> load;
    for (std::size_t i = 0; i < qs.size(); ++i) {
      const auto& pop = mi.populations()[i];
      for (std::size_t n = 0; n < qs[i].size(); ++n) {
        if (qs[i][n] == 0) continue;
        const Route& route = pop.routes[entries[i][n].route];
        double t = entries[i][n].z;
        for (int e : route.edges) {
          const auto& edge = pop.network.edges()[e];
          load[{edge.id, static_cast<int>(std::lround(t))}] += qs[i][n];
          t += edge.travel_time;
        }
      }
    }
    for (const auto& [key, l] : load)
      for (const auto& e : mi.edges())
        if (e.id == key.first && l > e.capacity) return false;
    return true;
  };

  double opt = 0.0;
  for (const auto& q1 : grids[0])
    for (const auto& q2 : grids[1])
      if (fits({q1, q2})) opt = std::max(opt, best[0].at(q1) + best[1].at(q2));
  return opt;
}

Verdict a7() {
  const auto t0 = std::chrono::steady_clock::now();
  int instances = 0, equal = 0, leaves_ok = 0, branched = 0;
  std::string first_bad;
  for (std::uint64_t seed = 900; instances < 40; ++seed) {
    const auto mi = testing::random_two_population(seed);
    ++instances;
    const auto bp = branch_and_price(mi);
    BranchOptions plain;
    plain.seed_incumbent = false;
    const auto pure = branch_and_price(mi, plain);
    branched += pure.nodes > 1;
    const double grid = q_grid_optimum(mi);
    const bool same = std::fabs(bp.value - grid) <= 1e-6 && std::fabs(pure.value - grid) <= 1e-6;
    bool leaves = true;
    for (const auto& s : bp.submarkets) leaves = leaves && s.report.pass();
    for (const auto& s : pure.submarkets) leaves = leaves && s.report.pass();
    equal += same;
    leaves_ok += leaves;
    if ((!same || !leaves) && first_bad.empty())
      first_bad = ", first mismatch seed " + std::to_string(seed) + " (branch-and-price " + fmt(bp.value) +
                  ", grid " + fmt(grid) + ")";
  }
  const double secs = elapsed(t0);
  Verdict v;
  v.pass = equal == instances && leaves_ok == instances && instances >= 10 && secs < 120.0;
  v.detail = std::to_string(equal) + "/" + std::to_string(instances) + " values equal the q-grid oracle with and without a seeded incumbent (" +
             std::to_string(branched) + " branched without it), " +
             std::to_string(leaves_ok) + "/" + std::to_string(instances) + " with every submarket verified" + first_bad +
             ", " + fmt(secs, 3) + " s";
  return v;
}

Verdict a8() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto disjoint = branch_and_price(fixtures::prop4_disjoint());
  const auto shared = branch_and_price(fixtures::prop4_shared());
  Verdict v;
  v.pass = std::fabs(disjoint.value - 2.0) <= 1e-9 && std::fabs(shared.value - 1.0) <= 1e-9;
  v.detail = "disjoint paths " + fmt(disjoint.value) + ", shared edge " + fmt(shared.value) + ", " +
             fmt(elapsed(t0), 3) + " s";
  return v;
}

double median_group(const Outcome& o) {
  std::vector<std::size_t> s;
  for (const auto& t : o.trips) s.push_back(t.group.size());
  if (s.empty()) return 0.0;
  std::sort(s.begin(), s.end());
  const std::size_t n = s.size();
  return n % 2 ? static_cast<double>(s[n / 2]) : 0.5 * static_cast<double>(s[n / 2 - 1] + s[n / 2]);
}

Verdict a9() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto res = branch_and_price(fixtures::bay_mini());
  std::vector<double> med;
  for (const auto& s : res.submarkets) med.push_back(median_group(s.outcome));
  Verdict v;
  v.pass = med.size() == 3 && med[0] >= med[1] && med[1] >= med[2];
  v.detail = "median group size L " + fmt(med.at(0)) + ", M " + fmt(med.at(1)) + ", H " + fmt(med.at(2)) + ", " +
             fmt(elapsed(t0), 3) + " s";
  return v;
}

Verdict a10() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& cases = random_cases();
  int matched = 0;
  for (const auto& c : cases) matched += std::fabs(c.welfare - c.ip) <= 1e-6;
  int lower = 0;
  std::string example;
  for (const auto& c : cases) {
    const Instance inst = testing::random_sp_instance(c.seed);
    SolveOptions opts;
    opts.epsilon = 1.0;
    const Outcome coarse = solve(inst, opts);
    if (coarse.welfare < c.ip - 1e-6) {
      if (lower++ == 0)
        example = ", e.g. seed " + std::to_string(c.seed) + ": " + fmt(coarse.welfare) + " < " + fmt(c.ip);
    }
  }
  Verdict v;
  const int n = static_cast<int>(cases.size());
  v.pass = matched == n && lower >= 1;
  v.detail = "small epsilon matches " + std::to_string(matched) + "/" + std::to_string(n) + "; epsilon = 1 loses welfare on " +
             std::to_string(lower) + "/" + std::to_string(n) + example + ", " + fmt(elapsed(t0), 3) + " s";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5},
      {"A6", a6}, {"A7", a7}, {"A8", a8}, {"A9", a9}, {"A10", a10}};
  std::set<std::string> only(argv + 1, argv + argc);
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    if (!only.empty() && !only.count(name)) continue;
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    std::printf("%-4s %s  %s\n", name.c_str(), v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
    failed += !v.pass;
  }
  return failed == 0 ? 0 : 1;
}
