#pragma once

#include <Eigen/Dense>

#include <bit>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdlab {

// Nodes are dense indices 0..p-1; sets of nodes are 64-bit masks.
using NodeSet = std::uint64_t;
inline constexpr int kMaxNodes = 64;

constexpr NodeSet node_bit(int i) { return NodeSet{1} << i; }
constexpr bool contains(NodeSet s, int i) { return (s >> i) & 1U; }
constexpr int set_size(NodeSet s) { return std::popcount(s); }
/// Nodes with index greater than i.
constexpr NodeSet nodes_above(int i) { return i >= kMaxNodes - 1 ? 0 : ~NodeSet{0} << (i + 1); }
/// The set {0, ..., p-1}.
constexpr NodeSet all_nodes(int p) { return p >= kMaxNodes ? ~NodeSet{0} : node_bit(p) - 1; }

template <typename F>
void for_each_node(NodeSet s, F&& f) {
  while (s != 0) {
    const int i = std::countr_zero(s);
    f(i);
    s &= s - 1;
  }
}

std::vector<int> to_vector(NodeSet s);
NodeSet to_set(const std::vector<int>& nodes);

struct Edge {
  int from = 0;
  int to = 0;
  auto operator<=>(const Edge&) const = default;
};

struct VStructure {
  int a = 0;  // a < c
  int b = 0;  // collider
  int c = 0;
  auto operator<=>(const VStructure&) const = default;
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Weighted directed acyclic graph. Adding an edge that would close a cycle throws.
class Dag {
 public:
  explicit Dag(int node_count = 0);

  int node_count() const { return static_cast<int>(parents_.size()); }
  int edge_count() const;

  void add_edge(int from, int to, double weight = 1.0);
  void remove_edge(int from, int to);
  bool has_edge(int from, int to) const { return contains(parents_[to], from); }
  bool adjacent(int a, int b) const { return has_edge(a, b) || has_edge(b, a); }

  NodeSet parents(int node) const { return parents_[node]; }
  NodeSet children(int node) const { return children_[node]; }
  NodeSet adjacents(int node) const { return parents_[node] | children_[node]; }

  double weight(int from, int to) const { return weights_(from, to); }
  void set_weight(int from, int to, double weight);
  /// W(i, j) is the coefficient of i in the equation for j; zero when absent.
  const Eigen::MatrixXd& weights() const { return weights_; }

  std::vector<Edge> edges() const;
  std::vector<int> topological_order() const;
  /// True when `to` is reachable from `from` along directed edges.
  bool reachable(int from, int to) const;

  bool same_structure(const Dag& other) const {
    return parents_ == other.parents_;
  }
  bool operator==(const Dag& other) const {
    return parents_ == other.parents_ && weights_ == other.weights_;
  }

 private:
  void check_node(int i) const;

  std::vector<NodeSet> parents_;
  std::vector<NodeSet> children_;
  Eigen::MatrixXd weights_;
};

/// Partially directed graph: a directed edge set plus an undirected edge set.
class Pdag {
 public:
  explicit Pdag(int node_count = 0);
  static Pdag from_dag(const Dag& dag);

  int node_count() const { return static_cast<int>(parents_.size()); }
  int edge_count() const;

  void add_directed(int from, int to);
  void add_undirected(int a, int b);
  void remove_edge(int a, int b);
  /// Turns the undirected edge a--b into a->b.
  void orient(int from, int to);

  bool has_directed(int from, int to) const { return contains(parents_[to], from); }
  bool has_undirected(int a, int b) const { return contains(neighbors_[a], b); }
  bool adjacent(int a, int b) const { return contains(adjacents(a), b); }

  NodeSet parents(int node) const { return parents_[node]; }
  NodeSet children(int node) const { return children_[node]; }
  NodeSet neighbors(int node) const { return neighbors_[node]; }
  NodeSet adjacents(int node) const {
    return parents_[node] | children_[node] | neighbors_[node];
  }

  std::vector<Edge> directed_edges() const;
  /// Each undirected edge once, with from < to.
  std::vector<Edge> undirected_edges() const;

  bool operator==(const Pdag& other) const = default;

 private:
  void check_pair(int a, int b) const;

  std::vector<NodeSet> parents_;
  std::vector<NodeSet> children_;
  std::vector<NodeSet> neighbors_;
};

/// Unordered adjacencies as edges with from < to, sorted.
std::vector<Edge> skeleton(const Dag& g);
std::vector<Edge> skeleton(const Pdag& g);

std::vector<VStructure> v_structures(const Dag& dag);

bool has_directed_cycle(const Pdag& g);
/// A cycle made of undirected edges and at least one directed edge, all followed forward.
bool has_partially_directed_cycle(const Pdag& g);

/// Applies the four Meek orientation rules until none fires.
/// Throws GraphError if the directed part is or becomes cyclic.
Pdag meek_closure(Pdag pdag);

Pdag dag_to_cpdag(const Dag& dag);

/// A DAG with the same skeleton and v-structures as `pdag` whose orientations
/// agree with every directed edge of `pdag`, found by repeated sink elimination.
std::optional<Dag> consistent_extension(const Pdag& pdag);

/// Completes a pattern into the CPDAG of its extension; nullopt when not extendable.
std::optional<Pdag> complete_pdag(const Pdag& pdag);

bool is_cpdag(const Pdag& pdag);

bool is_clique(const Pdag& g, NodeSet nodes);

// Graph text format: `nodes=<p>` header then one edge per line,
// `a -> b [w=<weight>]` or `a -- b`, sorted by (min(a,b), max(a,b)).
std::string format_graph(const Dag& dag);
std::string format_graph(const Pdag& pdag);

struct ParsedGraph {
  Pdag pdag;
  /// Set when every edge is directed and carries a weight.
  std::optional<Dag> dag;
};

ParsedGraph parse_graph(const std::string& text);
ParsedGraph read_graph_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace cdlab
