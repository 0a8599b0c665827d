#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace poolmarket {

/// Absolute tolerance for comparing money amounts.
inline constexpr double kMoneyTol = 1e-9;
/// Absolute tolerance for comparing (real-valued) times.
inline constexpr double kTimeTol = 1e-9;

enum class ErrorCode {
  NonPositiveCapacity,
  NonPositiveTravelTime,
  Disconnected,
  CycleDetected,
  SelfLoop,
  UnknownNode,
  DuplicateId,
  RouteExplosion,
  GroupTooLarge,
  InvalidPreferences,
  HeterogeneousDisutility,
  NonPositiveEpsilon,
  AuctionRoundCap,
  CapacityViolation,
  EnumerationCap,
  Infeasible,
  SeparationCapExceeded,
  InstanceTooLarge,
  OracleIncomplete,
  TooLarge,
  NonIntegralTravelTime,
  NumericalBreakdown,
  Unbounded,
  IterationCapExceeded,
  NodeCapExceeded,
  SchemaError,
  IoError,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A money amount that may be the Infeasible sentinel.
///
/// Infeasible is absorbing under addition and subtraction. It stands for the
/// "infinite" disutilities and delay costs of the model; any trip whose value
/// touches it is excluded from every maximization.
class Value {
 public:
  constexpr Value() = default;
  constexpr Value(double amount) : amount_(amount) {}  // NOLINT(implicit)

  static constexpr Value infeasible() {
    Value v;
    v.feasible_ = false;
    return v;
  }

  constexpr bool feasible() const { return feasible_; }

  double amount() const {
    if (!feasible_) throw std::logic_error("amount() of an Infeasible value");
    return amount_;
  }

  /// Amount, with Infeasible mapped to -infinity (for max-style comparisons).
  double or_neg_inf() const { return feasible_ ? amount_ : -INFINITY; }

  Value& operator+=(Value other) {
    feasible_ = feasible_ && other.feasible_;
    amount_ = feasible_ ? amount_ + other.amount_ : 0.0;
    return *this;
  }
  Value& operator-=(Value other) {
    feasible_ = feasible_ && other.feasible_;
    amount_ = feasible_ ? amount_ - other.amount_ : 0.0;
    return *this;
  }
  friend Value operator+(Value a, Value b) { return a += b; }
  friend Value operator-(Value a, Value b) { return a -= b; }
  friend Value operator*(Value a, double s) {
    if (a.feasible_) a.amount_ *= s;
    return a;
  }
  friend Value operator*(double s, Value a) { return a * s; }

  friend bool operator==(Value a, Value b) {
    if (a.feasible_ != b.feasible_) return false;
    return !a.feasible_ || a.amount_ == b.amount_;
  }

 private:
  double amount_ = 0.0;
  bool feasible_ = true;
};

inline bool approx_equal(double a, double b, double tol = kMoneyTol) {
  return std::fabs(a - b) <= tol;
}

/// Entry tick of a vehicle that reaches the start of an edge at real time t.
///
/// Capacities and tolls are indexed by integer ticks; a fractional entry time
/// is counted against the next tick, i.e. ceil(t) up to kTimeTol.
inline int entry_tick(double t) { return static_cast<int>(std::ceil(t - kTimeTol)); }

/// True when departing at z on a route of duration d arrives by the horizon.
inline bool arrives_within(int z, double duration, int horizon) {
  return static_cast<double>(z) + duration <= static_cast<double>(horizon) + kTimeTol;
}

/// Binomial coefficient as double (saturating; used for enumeration sizing).
double binomial(int n, int k);

/// All subsets of {0..n-1} with size in [1, max_size], in lexicographic order
/// of their sorted index lists.
std::vector<std::vector<int>> subsets_up_to(int n, int max_size);

}  // namespace poolmarket
