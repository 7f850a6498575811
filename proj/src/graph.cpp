#include "cdlab/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cdlab {

std::vector<int> to_vector(NodeSet s) {
  std::vector<int> out;
  out.reserve(set_size(s));
  for_each_node(s, [&](int i) { out.push_back(i); });
  return out;
}

NodeSet to_set(const std::vector<int>& nodes) {
  NodeSet s = 0;
  for (int i : nodes) s |= node_bit(i);
  return s;
}

// ---------------------------------------------------------------- Dag

Dag::Dag(int node_count)
    : parents_(node_count, 0), children_(node_count, 0),
      weights_(Eigen::MatrixXd::Zero(node_count, node_count)) {
  if (node_count < 0 || node_count > kMaxNodes) {
    throw GraphError("node count must be in [0, 64]");
  }
}

void Dag::check_node(int i) const {
  if (i < 0 || i >= node_count()) {
    throw GraphError("node index " + std::to_string(i) + " out of range");
  }
}

int Dag::edge_count() const {
  int m = 0;
  for (NodeSet s : parents_) m += set_size(s);
  return m;
}

void Dag::add_edge(int from, int to, double weight) {
  check_node(from);
  check_node(to);
  if (from == to) throw GraphError("self-loop on node " + std::to_string(from));
  if (adjacent(from, to)) {
    throw GraphError("nodes " + std::to_string(from) + " and " + std::to_string(to) +
                     " are already adjacent");
  }
  if (reachable(to, from)) {
    throw GraphError("edge " + std::to_string(from) + " -> " + std::to_string(to) +
                     " would create a cycle");
  }
  parents_[to] |= node_bit(from);
  children_[from] |= node_bit(to);
  weights_(from, to) = weight;
}

void Dag::remove_edge(int from, int to) {
  check_node(from);
  check_node(to);
  if (!has_edge(from, to)) throw GraphError("no such edge");
  parents_[to] &= ~node_bit(from);
  children_[from] &= ~node_bit(to);
  weights_(from, to) = 0.0;
}

void Dag::set_weight(int from, int to, double weight) {
  if (!has_edge(from, to)) throw GraphError("no such edge");
  weights_(from, to) = weight;
}

std::vector<Edge> Dag::edges() const {
  std::vector<Edge> out;
  for (int a = 0; a < node_count(); ++a) {
    for_each_node(children_[a], [&](int b) { out.push_back({a, b}); });
  }
  return out;
}

bool Dag::reachable(int from, int to) const {
  NodeSet seen = node_bit(from);
  NodeSet frontier = seen;
  while (frontier != 0) {
    NodeSet next = 0;
    for_each_node(frontier, [&](int u) { next |= children_[u]; });
    next &= ~seen;
    if (contains(next, to)) return true;
    seen |= next;
    frontier = next;
  }
  return from == to;
}

std::vector<int> Dag::topological_order() const {
  const int p = node_count();
  std::vector<int> order;
  order.reserve(p);
  NodeSet placed = 0;
  while (static_cast<int>(order.size()) < p) {
    for (int i = 0; i < p; ++i) {
      if (!contains(placed, i) && (parents_[i] & ~placed) == 0) {
        order.push_back(i);
        placed |= node_bit(i);
        break;
      }
    }
  }
  return order;
}

// ---------------------------------------------------------------- Pdag

Pdag::Pdag(int node_count)
    : parents_(node_count, 0), children_(node_count, 0), neighbors_(node_count, 0) {
  if (node_count < 0 || node_count > kMaxNodes) {
    throw GraphError("node count must be in [0, 64]");
  }
}

Pdag Pdag::from_dag(const Dag& dag) {
  Pdag g(dag.node_count());
  for (const Edge& e : dag.edges()) g.add_directed(e.from, e.to);
  return g;
}

void Pdag::check_pair(int a, int b) const {
  if (a < 0 || b < 0 || a >= node_count() || b >= node_count()) {
    throw GraphError("node index out of range");
  }
  if (a == b) throw GraphError("self-loop on node " + std::to_string(a));
}

int Pdag::edge_count() const {
  int m = 0;
  for (int i = 0; i < node_count(); ++i) {
    m += set_size(parents_[i]) * 2 + set_size(neighbors_[i]);
  }
  return m / 2;
}

void Pdag::add_directed(int from, int to) {
  check_pair(from, to);
  if (adjacent(from, to)) throw GraphError("nodes are already adjacent");
  parents_[to] |= node_bit(from);
  children_[from] |= node_bit(to);
}

void Pdag::add_undirected(int a, int b) {
  check_pair(a, b);
  if (adjacent(a, b)) throw GraphError("nodes are already adjacent");
  neighbors_[a] |= node_bit(b);
  neighbors_[b] |= node_bit(a);
}

void Pdag::remove_edge(int a, int b) {
  check_pair(a, b);
  if (!adjacent(a, b)) throw GraphError("no such edge");
  for (auto [u, v] : {std::pair{a, b}, std::pair{b, a}}) {
    parents_[u] &= ~node_bit(v);
    children_[u] &= ~node_bit(v);
    neighbors_[u] &= ~node_bit(v);
  }
}

void Pdag::orient(int from, int to) {
  check_pair(from, to);
  if (!has_undirected(from, to)) throw GraphError("edge is not undirected");
  neighbors_[from] &= ~node_bit(to);
  neighbors_[to] &= ~node_bit(from);
  parents_[to] |= node_bit(from);
  children_[from] |= node_bit(to);
}

std::vector<Edge> Pdag::directed_edges() const {
  std::vector<Edge> out;
  for (int a = 0; a < node_count(); ++a) {
    for_each_node(children_[a], [&](int b) { out.push_back({a, b}); });
  }
  return out;
}

std::vector<Edge> Pdag::undirected_edges() const {
  std::vector<Edge> out;
  for (int a = 0; a < node_count(); ++a) {
    for_each_node(neighbors_[a] & nodes_above(a), [&](int b) { out.push_back({a, b}); });
  }
  return out;
}

// ---------------------------------------------------------------- structure

namespace {

template <typename G>
std::vector<Edge> skeleton_of(const G& g) {
  std::vector<Edge> out;
  for (int a = 0; a < g.node_count(); ++a) {
    for_each_node(g.adjacents(a) & nodes_above(a), [&](int b) { out.push_back({a, b}); });
  }
  return out;
}

// Nodes reachable from `start` following directed edges forward and,
// when `semi` is set, undirected edges too.
NodeSet forward_reach(const Pdag& g, int start, bool semi) {
  NodeSet seen = 0;
  NodeSet frontier = node_bit(start);
  while (frontier != 0) {
    NodeSet next = 0;
    for_each_node(frontier, [&](int u) {
      next |= g.children(u);
      if (semi) next |= g.neighbors(u);
    });
    next &= ~seen;
    seen |= next;
    frontier = next;
  }
  return seen;
}

bool has_nonadjacent_pair(const Pdag& g, NodeSet s) {
  bool found = false;
  for_each_node(s, [&](int c) {
    if (!found && (s & ~node_bit(c) & ~g.adjacents(c)) != 0) found = true;
  });
  return found;
}

// Whether one of the Meek rules orients the undirected edge a--b as a->b.
bool meek_orients(const Pdag& g, int a, int b) {
  const NodeSet not_b = ~g.adjacents(b) & ~node_bit(b);
  // R1: c -> a -- b with c, b nonadjacent.
  if ((g.parents(a) & not_b) != 0) return true;
  // R2: a -> c -> b.
  if ((g.children(a) & g.parents(b)) != 0) return true;
  // R3: a -- c -> b and a -- d -> b with c, d nonadjacent.
  if (has_nonadjacent_pair(g, g.neighbors(a) & g.parents(b))) return true;
  // R4: a -- c -> d -> b with c, b nonadjacent and a adjacent to d.
  bool fires = false;
  for_each_node(g.neighbors(a) & not_b, [&](int c) {
    if ((g.children(c) & g.parents(b) & g.adjacents(a)) != 0) fires = true;
  });
  return fires;
}

}  // namespace

std::vector<Edge> skeleton(const Dag& g) { return skeleton_of(g); }
std::vector<Edge> skeleton(const Pdag& g) { return skeleton_of(g); }

std::vector<VStructure> v_structures(const Dag& dag) {
  std::vector<VStructure> out;
  for (int b = 0; b < dag.node_count(); ++b) {
    const NodeSet pa = dag.parents(b);
    for_each_node(pa, [&](int a) {
      for_each_node(pa & nodes_above(a), [&](int c) {
        if (!dag.adjacent(a, c)) out.push_back({a, b, c});
      });
    });
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool has_directed_cycle(const Pdag& g) {
  for (int i = 0; i < g.node_count(); ++i) {
    if (contains(forward_reach(g, i, false), i)) return true;
  }
  return false;
}

bool has_partially_directed_cycle(const Pdag& g) {
  for (const Edge& e : g.directed_edges()) {
    if (contains(forward_reach(g, e.to, true), e.from)) return true;
  }
  return false;
}

Pdag meek_closure(Pdag g) {
  if (has_directed_cycle(g)) throw GraphError("directed cycle in input to meek_closure");
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Edge& e : g.undirected_edges()) {
      for (auto [a, b] : {std::pair{e.from, e.to}, std::pair{e.to, e.from}}) {
        if (!g.has_undirected(a, b) || !meek_orients(g, a, b)) continue;
        g.orient(a, b);
        if (contains(forward_reach(g, b, false), a)) {
          throw GraphError("orientation " + std::to_string(a) + " -> " + std::to_string(b) +
                           " creates a directed cycle");
        }
        changed = true;
      }
    }
  }
  return g;
}

Pdag dag_to_cpdag(const Dag& dag) {
  Pdag g(dag.node_count());
  for (const Edge& e : skeleton(dag)) g.add_undirected(e.from, e.to);
  for (const VStructure& v : v_structures(dag)) {
    if (g.has_undirected(v.a, v.b)) g.orient(v.a, v.b);
    if (g.has_undirected(v.c, v.b)) g.orient(v.c, v.b);
  }
  return meek_closure(std::move(g));
}

std::optional<Dag> consistent_extension(const Pdag& pdag) {
  const int p = pdag.node_count();
  Dag out(p);
  try {
    for (const Edge& e : pdag.directed_edges()) out.add_edge(e.from, e.to);
  } catch (const GraphError&) {
    return std::nullopt;
  }
  NodeSet remaining = all_nodes(p);
  while (remaining != 0) {
    int sink = -1;
    for_each_node(remaining, [&](int x) {
      if (sink >= 0 || (pdag.children(x) & remaining) != 0) return;
      const NodeSet adj = pdag.adjacents(x) & remaining;
      bool ok = true;
      for_each_node(pdag.neighbors(x) & remaining, [&](int y) {
        if ((adj & ~node_bit(y) & ~pdag.adjacents(y)) != 0) ok = false;
      });
      if (ok) sink = x;
    });
    if (sink < 0) return std::nullopt;
    try {
      for_each_node(pdag.neighbors(sink) & remaining, [&](int y) { out.add_edge(y, sink); });
    } catch (const GraphError&) {
      return std::nullopt;
    }
    remaining &= ~node_bit(sink);
  }
  return out;
}

std::optional<Pdag> complete_pdag(const Pdag& pdag) {
  auto ext = consistent_extension(pdag);
  if (!ext) return std::nullopt;
  return dag_to_cpdag(*ext);
}

bool is_cpdag(const Pdag& pdag) {
  if (has_directed_cycle(pdag) || has_partially_directed_cycle(pdag)) return false;
  if (meek_closure(pdag) != pdag) return false;
  auto ext = consistent_extension(pdag);
  return ext && dag_to_cpdag(*ext) == pdag;
}

bool is_clique(const Pdag& g, NodeSet nodes) { return !has_nonadjacent_pair(g, nodes); }

// ---------------------------------------------------------------- text format

namespace {

struct Line {
  Edge key;
  std::string text;
};

std::string join_lines(int p, std::vector<Line> lines) {
  std::sort(lines.begin(), lines.end(), [](const Line& x, const Line& y) { return x.key < y.key; });
  std::string out = "nodes=" + std::to_string(p) + "\n";
  for (const Line& l : lines) out += l.text + "\n";
  return out;
}

Edge pair_key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

std::string format_weight(double w) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", w);
  return buf;
}

int parse_index(const std::string& tok, int p, int line_no) {
  std::size_t used = 0;
  int v = -1;
  try {
    v = std::stoi(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || v < 0 || v >= p) {
    throw GraphError("line " + std::to_string(line_no) + ": bad node index '" + tok + "'");
  }
  return v;
}

}  // namespace

std::string format_graph(const Dag& dag) {
  std::vector<Line> lines;
  for (const Edge& e : dag.edges()) {
    lines.push_back({pair_key(e.from, e.to), std::to_string(e.from) + " -> " + std::to_string(e.to) +
                                                 " [w=" + format_weight(dag.weight(e.from, e.to)) + "]"});
  }
  return join_lines(dag.node_count(), std::move(lines));
}

std::string format_graph(const Pdag& pdag) {
  std::vector<Line> lines;
  for (const Edge& e : pdag.directed_edges()) {
    lines.push_back({pair_key(e.from, e.to), std::to_string(e.from) + " -> " + std::to_string(e.to)});
  }
  for (const Edge& e : pdag.undirected_edges()) {
    lines.push_back({e, std::to_string(e.from) + " -- " + std::to_string(e.to)});
  }
  return join_lines(pdag.node_count(), std::move(lines));
}

ParsedGraph parse_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  int p = -1;
  while (p < 0 && std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.rfind("nodes=", 0) != 0) throw GraphError("missing 'nodes=<p>' header");
    try {
      p = std::stoi(line.substr(6));
    } catch (const std::exception&) {
      throw GraphError("bad node count in header");
    }
    if (p < 1 || p > kMaxNodes) throw GraphError("node count must be in [1, 64]");
  }
  if (p < 0) throw GraphError("empty graph text");

  Pdag pdag(p);
  struct Weighted {
    Edge e;
    std::optional<double> w;
  };
  std::vector<Weighted> directed;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string a, op, b, attr, extra;
    ls >> a >> op >> b;
    if (b.empty()) throw GraphError("line " + std::to_string(line_no) + ": malformed edge");
    const int u = parse_index(a, p, line_no);
    const int v = parse_index(b, p, line_no);
    std::optional<double> w;
    if (ls >> attr) {
      if (attr.size() < 5 || attr.rfind("[w=", 0) != 0 || attr.back() != ']' || op != "->") {
        throw GraphError("line " + std::to_string(line_no) + ": bad attribute '" + attr + "'");
      }
      const std::string num = attr.substr(3, attr.size() - 4);
      char* end = nullptr;
      w = std::strtod(num.c_str(), &end);
      if (end != num.c_str() + num.size()) {
        throw GraphError("line " + std::to_string(line_no) + ": bad weight '" + num + "'");
      }
      if (ls >> extra) throw GraphError("line " + std::to_string(line_no) + ": trailing text");
    }
    if (op == "->") {
      pdag.add_directed(u, v);
      directed.push_back({{u, v}, w});
    } else if (op == "--") {
      pdag.add_undirected(u, v);
    } else {
      throw GraphError("line " + std::to_string(line_no) + ": unknown edge operator '" + op + "'");
    }
  }

  ParsedGraph out{pdag, std::nullopt};
  const bool all_weighted =
      std::all_of(directed.begin(), directed.end(), [](const Weighted& d) { return d.w.has_value(); });
  if (pdag.undirected_edges().empty() && all_weighted) {
    Dag dag(p);
    for (const Weighted& d : directed) dag.add_edge(d.e.from, d.e.to, *d.w);
    out.dag = std::move(dag);
  }
  return out;
}

ParsedGraph read_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GraphError("cannot open graph file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_graph(ss.str());
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace cdlab
