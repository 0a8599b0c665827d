#include "poolmarket/network.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "poolmarket/common.hpp"

namespace poolmarket {

bool Route::uses(int edge) const { return std::find(edges.begin(), edges.end(), edge) != edges.end(); }

int Network::edge_index(std::string_view id) const {
  for (std::size_t i = 0; i < edges_.size(); ++i)
    if (edges_[i].id == id) return static_cast<int>(i);
  return -1;
}

int Network::node_index(std::string_view name) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i] == name) return static_cast<int>(i);
  return -1;
}

bool Network::integral_times() const {
  return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) {
    return std::fabs(e.travel_time - std::round(e.travel_time)) <= kTimeTol;
  });
}

NetworkSpec Network::to_spec() const {
  NetworkSpec spec;
  spec.nodes = nodes_;
  for (const auto& e : edges_)
    spec.edges.push_back({e.id, nodes_[e.tail], nodes_[e.head], e.capacity, e.travel_time});
  spec.origin = nodes_[origin_];
  spec.destination = nodes_[destination_];
  spec.horizon = horizon_;
  return spec;
}

Network Network::validate(const NetworkSpec& spec) {
  std::vector<std::pair<ErrorCode, std::string>> problems;
  auto fail = [&](ErrorCode code, std::string msg) { problems.emplace_back(code, std::move(msg)); };

  std::map<std::string, int> node_of;
  for (const auto& name : spec.nodes) {
    if (!node_of.emplace(name, static_cast<int>(node_of.size())).second)
      fail(ErrorCode::DuplicateId, "node '" + name + "' listed twice");
  }
  auto lookup = [&](const std::string& name, const std::string& what) -> int {
    auto it = node_of.find(name);
    if (it == node_of.end()) {
      fail(ErrorCode::UnknownNode, what + " refers to unknown node '" + name + "'");
      return -1;
    }
    return it->second;
  };
  const int origin = lookup(spec.origin, "origin");
  const int destination = lookup(spec.destination, "destination");
  if (origin >= 0 && origin == destination) fail(ErrorCode::Disconnected, "origin equals destination");
  if (spec.horizon < 1) fail(ErrorCode::SchemaError, "horizon must be a positive integer");

  std::vector<Edge> all;
  std::set<std::string> ids;
  for (const auto& e : spec.edges) {
    if (!ids.insert(e.id).second) fail(ErrorCode::DuplicateId, "edge '" + e.id + "' listed twice");
    if (e.capacity < 1) fail(ErrorCode::NonPositiveCapacity, "edge '" + e.id + "' has capacity " + std::to_string(e.capacity));
    if (!(e.travel_time > 0.0) || !std::isfinite(e.travel_time))
      fail(ErrorCode::NonPositiveTravelTime, "edge '" + e.id + "' has non-positive travel time");
    const int t = lookup(e.tail, "edge '" + e.id + "' tail");
    const int h = lookup(e.head, "edge '" + e.id + "' head");
    if (t >= 0 && t == h) fail(ErrorCode::SelfLoop, "edge '" + e.id + "' is a self-loop");
    all.push_back({e.id, t, h, static_cast<int>(std::max<long long>(e.capacity, 0)), e.travel_time});
  }

  auto raise = [&]() {
    std::ostringstream os;
    for (std::size_t i = 0; i < problems.size(); ++i) os << (i ? "; " : "") << problems[i].second;
    throw Error(problems.front().first, os.str());
  };
  if (!problems.empty()) raise();

  const int n = static_cast<int>(spec.nodes.size());
  std::vector<std::vector<int>> out(n), in(n);
  for (std::size_t i = 0; i < all.size(); ++i) {
    out[all[i].tail].push_back(static_cast<int>(i));
    in[all[i].head].push_back(static_cast<int>(i));
  }
  auto reach = [&](int start, bool forward) {
    std::vector<bool> seen(n, false);
    std::vector<int> stack{start};
    seen[start] = true;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int e : forward ? out[v] : in[v]) {
        const int w = forward ? all[e].head : all[e].tail;
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    return seen;
  };
  const auto from_origin = reach(origin, true);
  const auto to_destination = reach(destination, false);
  if (!from_origin[destination]) {
    fail(ErrorCode::Disconnected, "no path from '" + spec.origin + "' to '" + spec.destination + "'");
    raise();
  }

  Network net;
  net.nodes_ = spec.nodes;
  net.origin_ = origin;
  net.destination_ = destination;
  net.horizon_ = spec.horizon;
  for (const auto& e : all) {
    if (from_origin[e.tail] && to_destination[e.head] && from_origin[e.head] && to_destination[e.tail])
      net.edges_.push_back(e);
    else
      net.pruned_.push_back(e.id);
  }

  // Cycle check on the kept edges (Kahn).
  std::vector<int> indeg(n, 0);
  std::vector<std::vector<int>> succ(n);
  for (const auto& e : net.edges_) {
    succ[e.tail].push_back(e.head);
    ++indeg[e.head];
  }
  std::vector<int> queue;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) queue.push_back(v);
  int visited = 0;
  while (!queue.empty()) {
    const int v = queue.back();
    queue.pop_back();
    ++visited;
    for (int w : succ[v])
      if (--indeg[w] == 0) queue.push_back(w);
  }
  if (visited != n) {
    fail(ErrorCode::CycleDetected, "directed cycle among origin-destination edges");
    raise();
  }
  return net;
}

// ---------------------------------------------------------------------------
// Series-parallel recognition

std::string SpCertificate::to_string(const Network& net) const {
  if (!series_parallel) return {};
  std::function<void(int, std::ostream&)> emit = [&](int id, std::ostream& os) {
    const SpNode& node = nodes[id];
    if (node.kind == SpNode::Kind::Leaf) {
      os << net.edges()[node.edge].id;
      return;
    }
    os << (node.kind == SpNode::Kind::Series ? "S(" : "P(");
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      if (i) os << ",";
      emit(node.children[i], os);
    }
    os << ")";
  };
  std::ostringstream os;
  emit(root, os);
  return os.str();
}

SpCertificate is_series_parallel(const Network& net) {
  SpCertificate cert;
  struct Super {
    int tail, head, tree;
    bool alive;
  };
  std::vector<Super> edges;
  for (std::size_t i = 0; i < net.edges().size(); ++i) {
    cert.nodes.push_back({SpNode::Kind::Leaf, static_cast<int>(i), {}});
    edges.push_back({net.edges()[i].tail, net.edges()[i].head, static_cast<int>(i), true});
  }
  auto combine = [&](SpNode::Kind kind, int a, int b) {
    // Flatten same-kind children so P(P(a,b),c) reads P(a,b,c).
    SpNode node{kind, -1, {}};
    for (int child : {a, b}) {
      if (cert.nodes[child].kind == kind)
        node.children.insert(node.children.end(), cert.nodes[child].children.begin(), cert.nodes[child].children.end());
      else
        node.children.push_back(child);
    }
    cert.nodes.push_back(std::move(node));
    return static_cast<int>(cert.nodes.size()) - 1;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    // Parallel merges.
    std::map<std::pair<int, int>, int> first;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (!edges[i].alive) continue;
      auto key = std::make_pair(edges[i].tail, edges[i].head);
      auto it = first.find(key);
      if (it == first.end()) {
        first.emplace(key, static_cast<int>(i));
        continue;
      }
      Super& keep = edges[it->second];
      keep.tree = combine(SpNode::Kind::Parallel, keep.tree, edges[i].tree);
      edges[i].alive = false;
      changed = true;
    }
    // Series contractions at internal nodes with in = out = 1.
    std::vector<std::vector<int>> in(net.node_count()), out(net.node_count());
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (!edges[i].alive) continue;
      out[edges[i].tail].push_back(static_cast<int>(i));
      in[edges[i].head].push_back(static_cast<int>(i));
    }
    for (int v = 0; v < net.node_count(); ++v) {
      if (v == net.origin() || v == net.destination()) continue;
      if (in[v].size() != 1 || out[v].size() != 1) continue;
      Super& a = edges[in[v][0]];
      Super& b = edges[out[v][0]];
      if (!a.alive || !b.alive || a.tail == v || b.head == v) continue;
      a.tree = combine(SpNode::Kind::Series, a.tree, b.tree);
      a.head = b.head;
      b.alive = false;
      changed = true;
      break;  // adjacency is stale after one contraction
    }
  }

  std::vector<int> remaining;
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].alive) remaining.push_back(static_cast<int>(i));
  if (remaining.size() == 1 && edges[remaining[0]].tail == net.origin() &&
      edges[remaining[0]].head == net.destination()) {
    cert.series_parallel = true;
    cert.root = edges[remaining[0]].tree;
    return cert;
  }
  std::function<void(int)> collect = [&](int id) {
    const SpNode& node = cert.nodes[id];
    if (node.kind == SpNode::Kind::Leaf) cert.witness_edges.push_back(node.edge);
    for (int c : node.children) collect(c);
  };
  for (int i : remaining) collect(edges[i].tree);
  std::sort(cert.witness_edges.begin(), cert.witness_edges.end());
  cert.nodes.clear();
  return cert;
}

// ---------------------------------------------------------------------------
// Routes

Route make_route(const Network& net, std::vector<int> edges) {
  Route r;
  r.edges = std::move(edges);
  double t = 0.0;
  for (int e : r.edges) {
    r.prefix_times.push_back(t);
    t += net.edges()[e].travel_time;
  }
  r.total_time = t;
  return r;
}

bool route_less(const Route& a, const Route& b) {
  if (std::fabs(a.total_time - b.total_time) > kTimeTol) return a.total_time < b.total_time;
  return a.edges < b.edges;
}

std::string route_label(const Network& net, const Route& route) {
  std::string s;
  for (std::size_t i = 0; i < route.edges.size(); ++i) {
    if (i) s += '-';
    s += net.edges()[route.edges[i]].id;
  }
  return s;
}

std::vector<Route> enumerate_routes(const Network& net, std::size_t cap) {
  std::vector<std::vector<int>> out(net.node_count());
  for (std::size_t i = 0; i < net.edges().size(); ++i) out[net.edges()[i].tail].push_back(static_cast<int>(i));

  std::vector<Route> routes;
  std::vector<int> path;
  std::vector<bool> on_path(net.node_count(), false);
  std::function<void(int)> dfs = [&](int v) {
    if (v == net.destination()) {
      if (routes.size() >= cap)
        throw Error(ErrorCode::RouteExplosion, "more than " + std::to_string(cap) + " routes");
      routes.push_back(make_route(net, path));
      return;
    }
    on_path[v] = true;
    for (int e : out[v]) {
      const int w = net.edges()[e].head;
      if (on_path[w]) continue;
      path.push_back(e);
      dfs(w);
      path.pop_back();
    }
    on_path[v] = false;
  };
  dfs(net.origin());
  std::sort(routes.begin(), routes.end(), route_less);
  return routes;
}

}  // namespace poolmarket
