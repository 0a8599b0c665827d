#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "poolmarket/equilibrium.hpp"
#include "poolmarket/instance.hpp"
#include "poolmarket/multipop.hpp"

/// Instance files and reports. Schema problems raise SchemaError with the JSON
/// pointer of the offending value; unreadable files raise IoError.
namespace poolmarket::io {

using Json = nlohmann::ordered_json;

/// Parses text; syntax errors report line and column.
Json parse_json(const std::string& text, const std::string& source = "<input>");
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Number, or "inf" / null for the Infeasible sentinel.
Value value_from_json(const Json& j, const std::string& where);
Json value_to_json(Value v);

/// True when the document carries a populations array.
bool has_populations(const Json& doc);

Instance instance_from_json(const Json& doc);
Json instance_to_json(const Instance& inst);
/// A document without populations becomes a single population of all agents.
MultiInstance multi_from_json(const Json& doc);
Json multi_to_json(const MultiInstance& inst);

Instance load_instance(const std::string& path);
MultiInstance load_multi_instance(const std::string& path);

/// Money rounded to 6 decimals.
double money(double x);
std::string money_text(double x);

struct SolveReport {
  const Instance* instance = nullptr;
  const Outcome* outcome = nullptr;
  const EquilibriumReport* verification = nullptr;
  const EdgeTolls* tolls = nullptr;
  const VcgOutcome* vcg = nullptr;
  std::optional<double> seconds;
};

Json solve_report_json(const SolveReport& r);
Json verification_json(const EquilibriumReport& rep);

/// CSV columns, fixed: kind,entity,time,amount. One row per route price
/// (route, departure), toll (edge, tick) and payment (agent).
inline constexpr const char* kCsvHeader = "kind,entity,time,amount";
std::string solve_report_csv(const SolveReport& r);

struct MultipopReport {
  const MultiInstance* instance = nullptr;
  const BranchResult* result = nullptr;
  std::optional<double> seconds;
};
Json multipop_report_json(const MultipopReport& r);
std::string multipop_report_csv(const MultipopReport& r);

/// Trips and prices read back from a solve report.
struct LoadedOutcome {
  std::vector<Route> routes;
  std::vector<Trip> trips;
  PriceSystem prices;
  double epsilon = 0.0;
};
LoadedOutcome outcome_from_json(const Instance& inst, const Json& report);

}  // namespace poolmarket::io
