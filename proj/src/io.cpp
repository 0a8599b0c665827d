#include "poolmarket/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace poolmarket::io {

namespace {

[[noreturn]] void schema(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::SchemaError, (where.empty() ? std::string("/") : where) + ": " + what);
}

const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) schema(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) schema(where, std::string("missing \"") + key + "\"");
  return *it;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) schema(where, "expected a number");
  return j.get<double>();
}

long long integer(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return j.get<long long>();
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (v == std::floor(v)) return static_cast<long long>(v);
  }
  schema(where, "expected an integer");
}

std::string text(const Json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  schema(where, "expected a string");
}

const Json& array(const Json& j, const std::string& where) {
  if (!j.is_array()) schema(where, "expected an array");
  return j;
}

double number_or(const Json& obj, const char* key, double fallback, const std::string& where) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : number(*it, where + "/" + key);
}

std::string at(const std::string& where, std::size_t k) { return where + "/" + std::to_string(k); }

SizeTable table_from_json(const Json& j, const std::string& where) {
  SizeTable t;
  const auto& arr = array(j, where);
  for (std::size_t k = 0; k < arr.size(); ++k) t.push_back(value_from_json(arr[k], at(where, k)));
  return t;
}

Json table_to_json(const SizeTable& t) {
  Json out = Json::array();
  for (const auto& v : t) out.push_back(value_to_json(v));
  return out;
}

DelayFn delay_from_json(const Json& j, const std::string& where) {
  const std::string type = text(field(j, "type", where), where + "/type");
  try {
    if (type == "linear") return DelayFn::linear(number(field(j, "slope", where), where + "/slope"));
    if (type == "hard_deadline") return DelayFn::hard_deadline();
    if (type == "piecewise") {
      std::vector<std::pair<double, double>> pts;
      const auto& arr = array(field(j, "points", where), where + "/points");
      for (std::size_t k = 0; k < arr.size(); ++k) {
        const std::string w = at(where + "/points", k);
        if (!arr[k].is_array() || arr[k].size() != 2) schema(w, "expected [lateness, cost]");
        pts.emplace_back(number(arr[k][0], w + "/0"), number(arr[k][1], w + "/1"));
      }
      return DelayFn::piecewise(std::move(pts));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SchemaError) throw;
    schema(where, e.what());
  }
  schema(where + "/type", "unknown delay type \"" + type + "\"");
}

Json delay_to_json(const DelayFn& d) {
  return std::visit(
      [](const auto& f) -> Json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, DelayFn::Linear>) {
          return Json{{"type", "linear"}, {"slope", f.slope}};
        } else if constexpr (std::is_same_v<T, DelayFn::HardDeadline>) {
          return Json{{"type", "hard_deadline"}};
        } else {
          Json pts = Json::array();
          for (const auto& [x, y] : f.breakpoints) pts.push_back(Json::array({x, y}));
          return Json{{"type", "piecewise"}, {"points", pts}};
        }
      },
      d.variant());
}

NetworkSpec network_from_json(const Json& j, const std::string& where) {
  NetworkSpec net;
  const auto& nodes = array(field(j, "nodes", where), where + "/nodes");
  for (std::size_t k = 0; k < nodes.size(); ++k) net.nodes.push_back(text(nodes[k], at(where + "/nodes", k)));
  const auto& edges = array(field(j, "edges", where), where + "/edges");
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::string w = at(where + "/edges", k);
    EdgeSpec e;
    e.id = text(field(edges[k], "id", w), w + "/id");
    e.tail = text(field(edges[k], "tail", w), w + "/tail");
    e.head = text(field(edges[k], "head", w), w + "/head");
    e.capacity = integer(field(edges[k], "capacity", w), w + "/capacity");
    e.travel_time = number(field(edges[k], "travel_time", w), w + "/travel_time");
    net.edges.push_back(std::move(e));
  }
  const auto o = j.find("origin");
  const auto d = j.find("destination");
  if (o != j.end()) net.origin = text(*o, where + "/origin");
  if (d != j.end()) net.destination = text(*d, where + "/destination");
  net.horizon = static_cast<int>(integer(field(j, "horizon", where), where + "/horizon"));
  return net;
}

Json network_to_json(const NetworkSpec& net) {
  Json edges = Json::array();
  for (const auto& e : net.edges)
    edges.push_back(
        {{"id", e.id}, {"tail", e.tail}, {"head", e.head}, {"capacity", e.capacity}, {"travel_time", e.travel_time}});
  return Json{{"nodes", net.nodes},
              {"edges", edges},
              {"origin", net.origin},
              {"destination", net.destination},
              {"horizon", net.horizon}};
}

struct Market {
  MarketCosts costs;
  std::optional<double> epsilon;
};

Market market_from_json(const Json& doc) {
  Market m;
  const auto it = doc.find("market");
  if (it == doc.end()) return m;
  const std::string w = "/market";
  if (!it->is_object()) schema(w, "expected an object");
  m.costs.sigma = number_or(*it, "sigma", 0.0, w);
  m.costs.delta = number_or(*it, "delta", 0.0, w);
  if (it->contains("vehicle_capacity"))
    m.costs.vehicle_capacity = static_cast<int>(integer((*it)["vehicle_capacity"], w + "/vehicle_capacity"));
  if (it->contains("epsilon") && !(*it)["epsilon"].is_null()) m.epsilon = number((*it)["epsilon"], w + "/epsilon");
  return m;
}

Json market_to_json(const MarketCosts& c, std::optional<double> epsilon) {
  Json m{{"sigma", c.sigma}, {"delta", c.delta}, {"vehicle_capacity", c.vehicle_capacity}};
  if (epsilon) m["epsilon"] = *epsilon;
  return m;
}

// Agents; tables missing on an agent come from `shared` (population tables).
std::vector<Agent> agents_from_json(const Json& doc, const std::map<int, std::pair<Json, Json>>& shared) {
  std::vector<Agent> agents;
  const auto it = doc.find("agents");
  if (it == doc.end()) return agents;
  const auto& arr = array(*it, "/agents");
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const std::string w = at("/agents", k);
    const Json& j = arr[k];
    Agent a;
    a.id = static_cast<int>(integer(field(j, "id", w), w + "/id"));
    a.alpha = number(field(j, "alpha", w), w + "/alpha");
    a.beta = number_or(j, "beta", 0.0, w);
    a.theta = number(field(j, "theta", w), w + "/theta");
    if (j.contains("delay")) a.delay = delay_from_json(j["delay"], w + "/delay");
    const auto sh = shared.find(a.id);
    for (const char* key : {"pi", "gamma"}) {
      SizeTable& t = key[0] == 'p' ? a.pi : a.gamma;
      if (j.contains(key)) {
        t = table_from_json(j[key], w + "/" + key);
      } else if (sh != shared.end()) {
        const Json& s = key[0] == 'p' ? sh->second.first : sh->second.second;
        if (s.is_null()) schema(w, std::string("missing \"") + key + "\"");
        t = table_from_json(s, w + "/" + key);
      } else {
        schema(w, std::string("missing \"") + key + "\"");
      }
    }
    agents.push_back(std::move(a));
  }
  return agents;
}

Json agent_to_json(const Agent& a) {
  return Json{{"id", a.id},
              {"alpha", a.alpha},
              {"beta", a.beta},
              {"theta", a.theta},
              {"delay", delay_to_json(a.delay)},
              {"pi", table_to_json(a.pi)},
              {"gamma", table_to_json(a.gamma)}};
}

// Validation failures of agents and costs become schema errors at /agents.
template <typename F>
auto as_schema(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidPreferences || e.code() == ErrorCode::NonPositiveEpsilon) schema(where, e.what());
    throw;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "cannot read " + path);
  return ss.str();
}

Json money_json(double x) { return money(x); }

Json outcome_json(const Instance& inst, const Outcome& out) {
  const auto& routes = out.routes;
  const int T = inst.network.horizon();
  Json j;
  j["welfare"] = money_json(out.welfare);
  j["epsilon"] = out.epsilon;
  Json rs = Json::array();
  for (std::size_t r = 0; r < routes.size(); ++r) {
    Json e{{"index", r}, {"label", route_label(inst.network, routes[r])}, {"travel_time", routes[r].total_time}};
    if (r < out.capacity.capacity.size()) e["capacity"] = out.capacity.capacity[r];
    rs.push_back(e);
  }
  j["routes"] = rs;
  Json trips = Json::array();
  std::map<int, int> sizes;
  for (const auto& t : out.trips) {
    Json g = Json::array();
    for (int m : t.group) g.push_back(inst.agents[m].id);
    trips.push_back({{"departure", t.departure},
                     {"route", route_label(inst.network, routes[t.route])},
                     {"group", g},
                     {"value", money(t.value)}});
    ++sizes[static_cast<int>(t.group.size())];
  }
  j["trips"] = trips;
  Json hist = Json::object();
  for (const auto& [n, c] : sizes) hist[std::to_string(n)] = c;
  j["carpool_sizes"] = hist;
  Json prices = Json::array();
  for (std::size_t r = 0; r < out.prices.route_price.size(); ++r)
    for (int z = 1; z <= T; ++z) {
      if (!arrives_within(z, routes[r].total_time, T)) continue;
      prices.push_back({{"route", route_label(inst.network, routes[r])},
                        {"departure", z},
                        {"slots", out.prices.route_capacity[r][z - 1]},
                        {"price", money(out.prices.route_price[r][z - 1])}});
    }
  j["route_prices"] = prices;
  Json agents = Json::array();
  for (std::size_t m = 0; m < inst.agents.size(); ++m)
    agents.push_back({{"id", inst.agents[m].id},
                      {"utility", money(out.prices.utility[m])},
                      {"payment", money(out.prices.payment[m])}});
  j["agents"] = agents;
  return j;
}

void csv_row(std::ostringstream& os, const std::string& kind, const std::string& entity, const std::string& time,
             double amount) {
  os << kind << ',' << entity << ',' << time << ',' << money_text(amount) << '\n';
}

void outcome_csv(std::ostringstream& os, const Instance& inst, const Outcome& out, const std::string& prefix) {
  const int T = inst.network.horizon();
  for (std::size_t r = 0; r < out.prices.route_price.size(); ++r)
    for (int z = 1; z <= T; ++z)
      if (arrives_within(z, out.routes[r].total_time, T))
        csv_row(os, "route_price", prefix + route_label(inst.network, out.routes[r]), std::to_string(z),
                out.prices.route_price[r][z - 1]);
  for (std::size_t m = 0; m < inst.agents.size(); ++m)
    csv_row(os, "payment", "agent " + std::to_string(inst.agents[m].id), "", out.prices.payment[m]);
}

}  // namespace

Json parse_json(const std::string& source_text, const std::string& source) {
  try {
    return Json::parse(source_text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, source_text.size());
    for (std::size_t k = 0; k < upto; ++k) {
      if (source_text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::SchemaError,
                source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON (" + e.what() + ")");
  }
}

Json read_json_file(const std::string& path) { return parse_json(read_file(path), path); }

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << body;
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
}

Value value_from_json(const Json& j, const std::string& where) {
  if (j.is_null()) return Value::infeasible();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity") return Value::infeasible();
    schema(where, "expected a number, \"inf\" or null");
  }
  if (!j.is_number()) schema(where, "expected a number, \"inf\" or null");
  return Value(j.get<double>());
}

Json value_to_json(Value v) { return v.feasible() ? Json(v.amount()) : Json("inf"); }

bool has_populations(const Json& doc) { return doc.is_object() && doc.contains("populations"); }

Instance instance_from_json(const Json& doc) {
  if (!doc.is_object()) schema("", "expected an object");
  Instance inst;
  inst.network = Network::validate(network_from_json(field(doc, "network", ""), "/network"));
  const auto m = market_from_json(doc);
  inst.costs = m.costs;
  inst.epsilon = m.epsilon;
  inst.agents = agents_from_json(doc, {});
  std::set<int> ids;
  for (std::size_t k = 0; k < inst.agents.size(); ++k)
    if (!ids.insert(inst.agents[k].id).second) schema(at("/agents", k) + "/id", "duplicate agent id");
  as_schema("/agents", [&] {
    inst.check();
    return 0;
  });
  return inst;
}

Json instance_to_json(const Instance& inst) {
  Json doc;
  doc["network"] = network_to_json(inst.network.to_spec());
  doc["market"] = market_to_json(inst.costs, inst.epsilon);
  Json agents = Json::array();
  for (const auto& a : inst.agents) agents.push_back(agent_to_json(a));
  doc["agents"] = agents;
  return doc;
}

MultiInstance multi_from_json(const Json& doc) {
  if (!doc.is_object()) schema("", "expected an object");
  const NetworkSpec net = network_from_json(field(doc, "network", ""), "/network");
  const auto m = market_from_json(doc);
  std::vector<PopulationSpec> pops;
  std::map<int, std::pair<Json, Json>> shared;
  if (!has_populations(doc)) {
    // A single-market file is one population over its own pair.
    auto agents = agents_from_json(doc, shared);
    PopulationSpec all{1, {}, net.origin, net.destination};
    for (const auto& a : agents) all.members.push_back(a.id);
    return as_schema("/agents", [&] { return MultiInstance::build(net, std::move(agents), m.costs, {all}, m.epsilon); });
  }
  const auto& arr = array(field(doc, "populations", ""), "/populations");
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const std::string w = at("/populations", k);
    PopulationSpec ps;
    ps.id = static_cast<int>(integer(field(arr[k], "id", w), w + "/id"));
    const auto& mem = array(field(arr[k], "members", w), w + "/members");
    for (std::size_t q = 0; q < mem.size(); ++q) {
      ps.members.push_back(static_cast<int>(integer(mem[q], at(w + "/members", q))));
      shared[ps.members.back()] = {arr[k].value("pi", Json()), arr[k].value("gamma", Json())};
    }
    ps.origin = text(field(arr[k], "origin", w), w + "/origin");
    ps.destination = text(field(arr[k], "destination", w), w + "/destination");
    pops.push_back(std::move(ps));
  }
  auto agents = agents_from_json(doc, shared);
  return as_schema("/agents", [&] { return MultiInstance::build(net, std::move(agents), m.costs, pops, m.epsilon); });
}

Json multi_to_json(const MultiInstance& inst) {
  Json doc;
  doc["network"] = network_to_json(inst.network());
  doc["market"] = market_to_json(inst.costs(), inst.epsilon());
  Json agents = Json::array();
  for (const auto& a : inst.agents()) agents.push_back(agent_to_json(a));
  doc["agents"] = agents;
  Json pops = Json::array();
  for (const auto& p : inst.population_specs())
    pops.push_back({{"id", p.id}, {"members", p.members}, {"origin", p.origin}, {"destination", p.destination}});
  doc["populations"] = pops;
  return doc;
}

Instance load_instance(const std::string& path) { return instance_from_json(read_json_file(path)); }
MultiInstance load_multi_instance(const std::string& path) { return multi_from_json(read_json_file(path)); }

double money(double x) {
  const double r = std::round(x * 1e6) / 1e6;
  return r == 0.0 ? 0.0 : r;  // no negative zero
}

std::string money_text(double x) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << money(x);
  return os.str();
}

Json verification_json(const EquilibriumReport& rep) {
  return Json{{"pass", rep.pass()},
              {"individual_rationality", rep.individual_rationality},
              {"stability", rep.stability},
              {"budget_balance", rep.budget_balance},
              {"market_clearing", rep.market_clearing},
              {"tolerance", rep.tolerance},
              {"stability_checked", rep.stability_checked},
              {"stability_coverage", rep.stability_coverage},
              {"violations", rep.violations}};
}

Json solve_report_json(const SolveReport& r) {
  const Instance& inst = *r.instance;
  Json j{{"command", "solve"}};
  j["series_parallel"] = r.outcome->series_parallel;
  j.update(outcome_json(inst, *r.outcome));
  if (r.verification) j["verification"] = verification_json(*r.verification);
  if (r.tolls) {
    Json tolls = Json::array();
    for (std::size_t res = 0; res < r.tolls->resources.size(); ++res)
      tolls.push_back({{"edge", inst.network.edges()[r.tolls->resources.edge_of(res)].id},
                       {"tick", r.tolls->resources.tick_of(res)},
                       {"toll", money(r.tolls->toll[res])}});
    j["edge_tolls"] = {{"total", money(r.tolls->total)}, {"rounds", r.tolls->rounds}, {"tolls", tolls}};
  }
  if (r.vcg) {
    Json agents = Json::array();
    for (std::size_t m = 0; m < inst.agents.size(); ++m)
      agents.push_back({{"id", inst.agents[m].id},
                        {"utility", money(r.vcg->utility[m])},
                        {"payment", money(r.vcg->payment[m])},
                        {"welfare_without", money(r.vcg->welfare_without[m])}});
    j["vcg"] = {{"agents", agents}};
  }
  if (r.seconds) j["timing"] = {{"seconds", *r.seconds}};
  return j;
}

std::string solve_report_csv(const SolveReport& r) {
  const Instance& inst = *r.instance;
  std::ostringstream os;
  os << kCsvHeader << '\n';
  outcome_csv(os, inst, *r.outcome, "");
  if (r.tolls)
    for (std::size_t res = 0; res < r.tolls->resources.size(); ++res)
      csv_row(os, "toll", inst.network.edges()[r.tolls->resources.edge_of(res)].id,
              std::to_string(r.tolls->resources.tick_of(res)), r.tolls->toll[res]);
  if (r.vcg)
    for (std::size_t m = 0; m < inst.agents.size(); ++m)
      csv_row(os, "vcg_payment", "agent " + std::to_string(inst.agents[m].id), "", r.vcg->payment[m]);
  return os.str();
}

Json multipop_report_json(const MultipopReport& r) {
  const auto& inst = *r.instance;
  const auto& res = *r.result;
  Json j{{"command", "multipop"},
         {"welfare", money(res.value)},
         {"root_bound", money(res.root_bound)},
         {"nodes", res.nodes},
         {"columns", res.columns}};
  Json pops = Json::array();
  for (std::size_t i = 0; i < inst.populations().size(); ++i) {
    const auto& pop = inst.populations()[i];
    const Instance sub = inst.submarket(i);
    Json p{{"id", pop.id}};
    Json alloc = Json::array();
    for (std::size_t rt = 0; rt < res.q[i].size(); ++rt)
      for (std::size_t zi = 0; zi < res.q[i][rt].size(); ++zi)
        if (res.q[i][rt][zi] > 0)
          alloc.push_back({{"route", route_label(pop.network, pop.routes[rt])},
                           {"departure", zi + 1},
                           {"slots", res.q[i][rt][zi]}});
    p["allocation"] = alloc;
    p.update(outcome_json(sub, res.submarkets[i].outcome));
    p["verification"] = verification_json(res.submarkets[i].report);
    pops.push_back(p);
  }
  j["populations"] = pops;
  if (r.seconds) j["timing"] = {{"seconds", *r.seconds}};
  return j;
}

std::string multipop_report_csv(const MultipopReport& r) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (std::size_t i = 0; i < r.instance->populations().size(); ++i) {
    const Instance sub = r.instance->submarket(i);
    outcome_csv(os, sub, r.result->submarkets[i].outcome,
                "population " + std::to_string(r.instance->populations()[i].id) + " ");
  }
  return os.str();
}

LoadedOutcome outcome_from_json(const Instance& inst, const Json& report) {
  LoadedOutcome out;
  out.routes = enumerate_routes(inst.network);
  const int T = inst.network.horizon();
  std::map<std::string, int> by_label;
  for (std::size_t r = 0; r < out.routes.size(); ++r)
    by_label[route_label(inst.network, out.routes[r])] = static_cast<int>(r);
  std::map<int, int> by_id;
  for (std::size_t m = 0; m < inst.agents.size(); ++m) by_id[inst.agents[m].id] = static_cast<int>(m);
  auto route_of = [&](const Json& j, const std::string& w) {
    const auto it = by_label.find(text(j, w));
    if (it == by_label.end()) schema(w, "unknown route");
    return it->second;
  };
  auto agent_of = [&](const Json& j, const std::string& w) {
    const auto it = by_id.find(static_cast<int>(integer(j, w)));
    if (it == by_id.end()) schema(w, "unknown agent");
    return it->second;
  };

  out.epsilon = number(field(report, "epsilon", ""), "/epsilon");
  const auto& trips = array(field(report, "trips", ""), "/trips");
  for (std::size_t k = 0; k < trips.size(); ++k) {
    const std::string w = at("/trips", k);
    Trip t;
    t.departure = static_cast<int>(integer(field(trips[k], "departure", w), w + "/departure"));
    t.route = route_of(field(trips[k], "route", w), w + "/route");
    if (t.departure < 1 || t.departure > T) schema(w + "/departure", "outside the horizon");
    const auto& g = array(field(trips[k], "group", w), w + "/group");
    for (std::size_t q = 0; q < g.size(); ++q) t.group.push_back(agent_of(g[q], at(w + "/group", q)));
    std::sort(t.group.begin(), t.group.end());
    t.value = trip_value(inst.agents, t.group, t.departure, out.routes[t.route], inst.costs).or_neg_inf();
    out.trips.push_back(std::move(t));
  }
  out.prices.mode = PriceMode::Route;
  out.prices.route_price.assign(out.routes.size(), std::vector<double>(std::max(T, 0), 0.0));
  out.prices.route_capacity.assign(out.routes.size(), std::vector<int>(std::max(T, 0), 0));
  const auto& prices = array(field(report, "route_prices", ""), "/route_prices");
  for (std::size_t k = 0; k < prices.size(); ++k) {
    const std::string w = at("/route_prices", k);
    const int r = route_of(field(prices[k], "route", w), w + "/route");
    const int z = static_cast<int>(integer(field(prices[k], "departure", w), w + "/departure"));
    if (z < 1 || z > T) schema(w + "/departure", "outside the horizon");
    out.prices.route_price[r][z - 1] = number(field(prices[k], "price", w), w + "/price");
    out.prices.route_capacity[r][z - 1] = static_cast<int>(integer(field(prices[k], "slots", w), w + "/slots"));
  }
  out.prices.payment.assign(inst.agents.size(), 0.0);
  const auto& agents = array(field(report, "agents", ""), "/agents");
  for (std::size_t k = 0; k < agents.size(); ++k) {
    const std::string w = at("/agents", k);
    out.prices.payment[agent_of(field(agents[k], "id", w), w + "/id")] =
        number(field(agents[k], "payment", w), w + "/payment");
  }
  out.prices.utility = utilities_from_payments(inst.agents, out.routes, out.trips, out.prices.payment, inst.costs);
  return out;
}

}  // namespace poolmarket::io
