#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace poolmarket {

/// Unvalidated edge as read from an instance file.
struct EdgeSpec {
  std::string id;
  std::string tail;
  std::string head;
  long long capacity = 0;
  double travel_time = 0.0;
};

/// Unvalidated network description.
struct NetworkSpec {
  std::vector<std::string> nodes;
  std::vector<EdgeSpec> edges;
  std::string origin;
  std::string destination;
  int horizon = 0;
};

struct Edge {
  std::string id;
  int tail = 0;
  int head = 0;
  int capacity = 1;          // vehicles per tick
  double travel_time = 1.0;  // time units
};

/// A simple origin-destination path.
struct Route {
  std::vector<int> edges;            // indices into Network::edges()
  std::vector<double> prefix_times;  // time from origin to the start of each edge
  double total_time = 0.0;

  /// Prefix time of the edge at position `pos` on this route.
  double prefix_at(std::size_t pos) const { return prefix_times[pos]; }
  bool uses(int edge) const;
};

/// Validated, immutable two-terminal network.
///
/// Edges that lie on no origin-destination walk are pruned during validation,
/// so every stored edge is usable.
class Network {
 public:
  /// Validates the description. Throws Error listing every structural problem
  /// found (the code is that of the first one).
  static Network validate(const NetworkSpec& spec);

  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::string>& node_names() const { return nodes_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  int origin() const { return origin_; }
  int destination() const { return destination_; }
  int horizon() const { return horizon_; }
  /// Ids of edges dropped because they were not on any origin-destination walk.
  const std::vector<std::string>& pruned_edges() const { return pruned_; }

  /// Index of the edge with the given id, or -1.
  int edge_index(std::string_view id) const;
  int node_index(std::string_view name) const;

  /// True when every travel time is an integer (up to kTimeTol).
  bool integral_times() const;

  /// Back to the file-level description (pruned edges excluded).
  NetworkSpec to_spec() const;

 private:
  std::vector<std::string> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::string> pruned_;
  int origin_ = 0;
  int destination_ = 0;
  int horizon_ = 0;
};

/// Node of a series/parallel decomposition tree.
struct SpNode {
  enum class Kind { Leaf, Series, Parallel };
  Kind kind = Kind::Leaf;
  int edge = -1;              // for leaves
  std::vector<int> children;  // indices into SpCertificate::nodes
};

struct SpCertificate {
  bool series_parallel = false;
  std::vector<SpNode> nodes;
  int root = -1;
  /// When not series-parallel: the original edges of the irreducible remainder,
  /// which contains an embedded wheatstone.
  std::vector<int> witness_edges;

  /// Decomposition as text, e.g. "S(e1,P(e2,e3))". Empty when not SP.
  std::string to_string(const Network& net) const;
};

/// Two-terminal series-parallel recognition by exhaustive series contraction
/// and parallel merging.
SpCertificate is_series_parallel(const Network& net);

inline constexpr std::size_t kDefaultRouteCap = 10'000;

/// All simple origin-destination paths, sorted by total time and then by the
/// lexicographic order of their edge-index sequences. Throws RouteExplosion
/// beyond `cap` routes.
std::vector<Route> enumerate_routes(const Network& net, std::size_t cap = kDefaultRouteCap);

/// Builds a Route (prefix times and total) from an edge sequence.
Route make_route(const Network& net, std::vector<int> edges);

/// Strict ordering used by enumerate_routes.
bool route_less(const Route& a, const Route& b);

/// Route label such as "e1-e5-e4".
std::string route_label(const Network& net, const Route& route);

}  // namespace poolmarket
