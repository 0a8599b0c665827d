#include "poolmarket/auction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace poolmarket {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// xi(n+1) - xi(n), or +inf when size n+1 is not allowed.
double next_step(std::span<const Value> xi, int n) {
  if (n + 1 >= static_cast<int>(xi.size())) return kInf;
  const Value step = xi[n + 1] - xi[n];
  return step.feasible() ? step.amount() : kInf;
}

double min_eta(const SlotMarket& market, std::size_t l, std::span<const int> group) {
  double lo = kInf;
  for (int m : group) lo = std::min(lo, market.eta(l, m));
  return lo;
}

}  // namespace

SlotMarket::SlotMarket(std::span<const Agent> agents, std::span<const Route> routes, SlotSet slots, MarketCosts costs)
    : agents_(agents.begin(), agents.end()), routes_(routes.begin(), routes.end()), slots_(std::move(slots)),
      costs_(costs) {
  std::vector<int> all(agents_.size());
  for (std::size_t m = 0; m < all.size(); ++m) all[m] = static_cast<int>(m);
  require_homogeneous(agents_, all, costs_.vehicle_capacity);
  for (const auto& route : routes_) {
    if (agents_.empty())
      xi_.emplace_back();
    else
      xi_.push_back(xi_table(route, costs_, agents_.front()));
  }
  for (const auto& s : slots_.slots) {
    std::vector<double> row(agents_.size());
    for (std::size_t m = 0; m < agents_.size(); ++m)
      row[m] = poolmarket::eta(agents_[m], s.departure, routes_[s.route]).or_neg_inf();
    eta_.push_back(std::move(row));
  }
}

AugmentedValue SlotMarket::augmented(std::size_t l, std::span<const int> bundle) const {
  if (bundle.empty()) return {};
  std::vector<int> order(bundle.begin(), bundle.end());
  const auto& e = eta_[l];
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (e[a] != e[b]) return e[a] > e[b];
    return a < b;
  });
  return augmented_value_sorted(order, e, xi(l), costs_.vehicle_capacity);
}

SlotState slot_state(const SlotMarket& market, std::size_t l, std::vector<int> bundle, std::span<const double> utility) {
  SlotState st;
  std::sort(bundle.begin(), bundle.end());
  st.bundle = std::move(bundle);
  auto aug = market.augmented(l, st.bundle);
  st.value = aug.value;
  st.representative = std::move(aug.representative);
  st.lambda = min_eta(market, l, st.representative);
  for (int m : st.bundle) st.paid += utility[m];
  return st;
}

JlResult compute_Jl(const SlotMarket& market, std::size_t l, const SlotState& state, std::span<const double> utility,
                    double epsilon) {
  JlResult res;
  res.tentative = state;
  SlotState& st = res.tentative;
  const auto eta = market.etas(l);
  const auto xi = market.xi(l);

  std::vector<char> member(market.num_agents(), 0);
  for (int m : state.bundle) member[m] = 1;
  std::vector<int> candidates;
  for (std::size_t m = 0; m < market.num_agents(); ++m)
    if (!member[m] && std::isfinite(eta[m])) candidates.push_back(static_cast<int>(m));
  std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
    const double ka = eta[a] - utility[a];
    const double kb = eta[b] - utility[b];
    if (ka != kb) return ka > kb;
    return a < b;
  });

  int n = static_cast<int>(st.representative.size());
  for (int j : candidates) {
    const double step = next_step(xi, n);
    const double theta = std::min(st.lambda, step);
    const double gain = std::max(0.0, eta[j] - theta) - utility[j] - epsilon;
    if (!(gain > kMoneyTol)) break;
    if (step <= st.lambda) {
      // j joins the riding group
      st.representative.push_back(j);
      st.value += eta[j] - step;
      ++n;
    } else {
      // j displaces the member with the smallest eta (latest id on ties)
      auto out = st.representative.begin();
      for (auto it = st.representative.begin(); it != st.representative.end(); ++it) {
        if (eta[*it] < eta[*out] || (eta[*it] == eta[*out] && *it > *out)) out = it;
      }
      st.value += eta[j] - st.lambda;
      *out = j;
    }
    st.lambda = min_eta(market, l, st.representative);
    st.bundle.push_back(j);
    st.paid += utility[j] + epsilon;
    res.added.push_back(j);
  }
  std::sort(st.bundle.begin(), st.bundle.end());
  std::sort(st.representative.begin(), st.representative.end());
  return res;
}

std::vector<double> Allocation::utility() const {
  std::vector<double> u(ticks.size());
  for (std::size_t m = 0; m < ticks.size(); ++m) u[m] = static_cast<double>(ticks[m]) * epsilon;
  return u;
}

double Allocation::welfare() const {
  double s = 0.0;
  for (const auto& st : slots) s += st.value;
  return s;
}

double default_epsilon(std::size_t num_agents) {
  if (num_agents == 0) return 1e-3;
  return std::min(1.0 / (4.0 * static_cast<double>(num_agents)), 1e-3);
}

Allocation allocate(const SlotMarket& market, double epsilon, const AllocateOptions& options) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw Error(ErrorCode::NonPositiveEpsilon, "epsilon must be positive, got " + std::to_string(epsilon));
  const std::size_t M = market.num_agents();
  const std::size_t L = market.num_slots();

  Allocation a;
  a.epsilon = epsilon;
  a.ticks.assign(M, 0);
  a.holder.assign(M, -1);
  a.slots.resize(L);
  for (auto& st : a.slots) st.lambda = kInf;
  std::vector<double> u(M, 0.0);

  std::size_t cap = options.round_cap;
  if (cap == 0) {
    double vmax = 1.0;
    for (const auto& ag : market.agents()) vmax = std::max(vmax, ag.alpha);
    cap = static_cast<std::size_t>(std::ceil(static_cast<double>(M) * vmax / epsilon)) + M + 16;
  }

  while (true) {
    // Lowest slot whose demand is nonempty: only its best candidate by
    // eta - u needs checking.
    int chosen = -1;
    for (std::size_t l = 0; l < L && chosen < 0; ++l) {
      const SlotState& st = a.slots[l];
      const auto eta = market.etas(l);
      int best = -1;
      for (std::size_t m = 0; m < M; ++m) {
        if (a.holder[m] == static_cast<int>(l) || !std::isfinite(eta[m])) continue;
        if (best < 0 || eta[m] - u[m] > eta[best] - u[best]) best = static_cast<int>(m);
      }
      if (best < 0) continue;
      const double theta = std::min(st.lambda, next_step(market.xi(l), static_cast<int>(st.representative.size())));
      const double gain = std::max(0.0, eta[best] - theta) - u[best] - epsilon;
      if (gain > kMoneyTol) chosen = static_cast<int>(l);
    }
    if (chosen < 0) break;

    if (++a.rounds > cap)
      throw Error(ErrorCode::AuctionRoundCap, "auction exceeded " + std::to_string(cap) + " rounds");

    JlResult j = compute_Jl(market, chosen, a.slots[chosen], u, epsilon);
    std::vector<int> dirty;
    for (int m : j.added) {
      const int from = a.holder[m];
      if (from >= 0) {
        auto& b = a.slots[from].bundle;
        b.erase(std::remove(b.begin(), b.end(), m), b.end());
        dirty.push_back(from);
      }
      a.holder[m] = chosen;
      ++a.ticks[m];
      u[m] = static_cast<double>(a.ticks[m]) * epsilon;
    }
    a.slots[chosen] = std::move(j.tentative);
    std::sort(dirty.begin(), dirty.end());
    dirty.erase(std::unique(dirty.begin(), dirty.end()), dirty.end());
    for (int l : dirty) a.slots[l] = slot_state(market, l, a.slots[l].bundle, u);

    if (options.debug_check) {
      for (std::size_t l = 0; l < L; ++l) {
        const SlotState fresh = slot_state(market, l, a.slots[l].bundle, u);
        if (std::fabs(fresh.value - a.slots[l].value) > 1e-7 || std::fabs(fresh.paid - a.slots[l].paid) > 1e-7 ||
            std::fabs(fresh.lambda - a.slots[l].lambda) > 1e-7 * (std::isfinite(fresh.lambda) ? 1.0 : kInf))
          throw Error(ErrorCode::NumericalBreakdown,
                      "incremental state of slot " + std::to_string(l) + " drifted from recomputation");
      }
    }
  }
  // Settle any drift of the incremental bookkeeping.
  for (std::size_t l = 0; l < L; ++l) a.slots[l] = slot_state(market, l, a.slots[l].bundle, u);
  return a;
}

WalrasianReport verify_walrasian(const SlotMarket& market, std::span<const SlotState> slots,
                                 std::span<const double> utility, double epsilon) {
  WalrasianReport rep;
  const std::size_t M = market.num_agents();
  const double tol = epsilon * static_cast<double>(M) + 1e-9;
  const int A = market.costs().vehicle_capacity;
  std::vector<char> held(M, 0);
  for (std::size_t l = 0; l < slots.size(); ++l) {
    for (int m : slots[l].bundle) held[m] = 1;
    const SlotState fresh = slot_state(market, l, slots[l].bundle, utility);
    const double own = fresh.surplus();
    // Demand value: for each size n the best group takes the n largest eta - u.
    const auto eta = market.etas(l);
    const auto xi = market.xi(l);
    std::vector<double> net;
    for (std::size_t m = 0; m < M; ++m)
      if (std::isfinite(eta[m])) net.push_back(eta[m] - utility[m]);
    std::sort(net.begin(), net.end(), std::greater<>());
    double best = 0.0, sum = 0.0;
    for (int n = 1; n <= A && n <= static_cast<int>(net.size()); ++n) {
      if (!xi[n].feasible()) break;
      sum += net[n - 1];
      best = std::max(best, sum - xi[n].amount());
    }
    if (own < best - tol) {
      rep.demand_ok = false;
      std::ostringstream os;
      os << "slot " << l << ": bundle surplus " << own << " below demand surplus " << best;
      rep.violations.push_back(os.str());
    }
  }
  for (std::size_t m = 0; m < M; ++m) {
    if (!held[m] && std::fabs(utility[m]) > 1e-12) {
      rep.unassigned_zero = false;
      rep.violations.push_back("agent index " + std::to_string(m) + " holds no slot but has utility " +
                               std::to_string(utility[m]));
    }
  }
  return rep;
}

}  // namespace poolmarket
