#include "cdlab/ges.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace cdlab {

std::string to_string(Phase phase) {
  switch (phase) {
    case Phase::forward: return "forward";
    case Phase::backward: return "backward";
    case Phase::turning: return "turning";
  }
  return "?";
}

std::string Operator::describe() const {
  const char* name = kind == OperatorKind::insert ? "insert" : kind == OperatorKind::remove ? "delete" : "turn";
  return std::string(name) + "(" + std::to_string(x) + "," + std::to_string(y) + "," +
         describe_parents(subset) + ")";
}

bool Operator::precedes(const Operator& other) const {
  return std::tie(kind, x, y, subset) < std::tie(other.kind, other.x, other.y, other.subset);
}

void SearchConfig::validate() const {
  score.validate();
  if (phases.empty()) throw std::invalid_argument("at least one search phase is required");
  if (max_parents && *max_parents < 1) throw std::invalid_argument("max_parents must be positive");
}

namespace {

// Calls f(T) for every T within `candidates` such that base | T is a clique.
template <typename F>
void for_each_clique_extension(const Pdag& g, NodeSet base, NodeSet candidates, F&& f) {
  if (!is_clique(g, base)) return;
  auto extend = [&](auto&& self, NodeSet chosen, NodeSet allowed) -> void {
    f(chosen);
    for_each_node(allowed, [&](int v) {
      self(self, chosen | node_bit(v), allowed & nodes_above(v) & g.adjacents(v));
    });
  };
  NodeSet allowed = candidates;
  for_each_node(base, [&](int b) { allowed &= g.adjacents(b); });
  extend(extend, NodeSet{0}, allowed);
}

// Whether every semi-directed path from `from` to `to` passes through `blockers`.
bool semi_directed_paths_blocked(const Pdag& g, int from, int to, NodeSet blockers) {
  NodeSet seen = node_bit(from);
  NodeSet frontier = seen;
  while (frontier != 0) {
    NodeSet next = 0;
    for_each_node(frontier, [&](int u) { next |= g.children(u) | g.neighbors(u); });
    next &= ~seen;
    if (contains(next, to)) return false;
    seen |= next;
    frontier = next & ~blockers;
  }
  return true;
}

bool parents_allowed(const SearchConfig& cfg, NodeSet parents) {
  return !cfg.max_parents || set_size(parents) <= *cfg.max_parents;
}

std::vector<int> lex_bfs(const Pdag& g, const std::vector<int>& prefix) {
  const int p = g.node_count();
  std::vector<std::vector<int>> label(p);
  std::vector<int> order;
  order.reserve(p);
  NodeSet visited = 0;
  auto visit = [&](int v) {
    const int stamp = p - static_cast<int>(order.size());
    order.push_back(v);
    visited |= node_bit(v);
    for_each_node(g.neighbors(v) & ~visited, [&](int u) { label[u].push_back(stamp); });
  };
  for (int v : prefix) visit(v);
  while (static_cast<int>(order.size()) < p) {
    int best = -1;
    for_each_node(all_nodes(p) & ~visited, [&](int v) {
      if (best < 0 || label[v] > label[best]) best = v;
    });
    visit(best);
  }
  return order;
}

// Member DAG of `state` in which the undirected neighbours of y oriented into y are
// exactly `into_y`, visiting x right after y so that x gets as few parents as possible.
std::optional<Dag> member_with_parents(const Pdag& state, int x, int y, NodeSet into_y) {
  std::vector<int> prefix = to_vector(into_y);
  prefix.push_back(y);
  prefix.push_back(x);
  const std::vector<int> order = lex_bfs(state, prefix);
  std::vector<int> pos(state.node_count());
  for (int i = 0; i < static_cast<int>(order.size()); ++i) pos[order[i]] = i;

  Dag dag(state.node_count());
  try {
    for (const Edge& e : state.directed_edges()) dag.add_edge(e.from, e.to);
    for (const Edge& e : state.undirected_edges()) {
      if (pos[e.from] < pos[e.to]) {
        dag.add_edge(e.from, e.to);
      } else {
        dag.add_edge(e.to, e.from);
      }
    }
  } catch (const GraphError&) {
    return std::nullopt;
  }
  if (dag_to_cpdag(dag) != state) return std::nullopt;
  return dag;
}

struct Candidate {
  Operator op;
  bool has_result = false;
};

void collect_inserts(const Pdag& g, const BicScorer& scorer, const SearchConfig& cfg,
                     std::vector<Candidate>& out) {
  const int p = g.node_count();
  for (int x = 0; x < p; ++x) {
    for (int y = 0; y < p; ++y) {
      if (x == y || g.adjacent(x, y)) continue;
      const NodeSet na = g.neighbors(y) & g.adjacents(x);
      const NodeSet t0 = g.neighbors(y) & ~g.adjacents(x);
      for_each_clique_extension(g, na, t0, [&](NodeSet t) {
        const NodeSet s = na | t;
        const NodeSet base = g.parents(y) | s;
        if (!parents_allowed(cfg, base | node_bit(x))) return;
        if (!semi_directed_paths_blocked(g, y, x, s)) return;
        Operator op;
        op.kind = OperatorKind::insert;
        op.x = x;
        op.y = y;
        op.subset = t;
        op.delta = scorer.local(y, base | node_bit(x)) - scorer.local(y, base);
        out.push_back({std::move(op), false});
      });
    }
  }
}

void collect_removes(const Pdag& g, const BicScorer& scorer, std::vector<Candidate>& out) {
  const int p = g.node_count();
  for (int x = 0; x < p; ++x) {
    for (int y = 0; y < p; ++y) {
      if (!g.has_directed(x, y) && !g.has_undirected(x, y)) continue;
      const NodeSet na = g.neighbors(y) & g.adjacents(x);
      // H = na \ K for every clique K within na.
      for_each_clique_extension(g, 0, na, [&](NodeSet kept) {
        const NodeSet base = (g.parents(y) | kept) & ~node_bit(x);
        Operator op;
        op.kind = OperatorKind::remove;
        op.x = x;
        op.y = y;
        op.subset = na & ~kept;
        op.delta = scorer.local(y, base) - scorer.local(y, base | node_bit(x));
        out.push_back({std::move(op), false});
      });
    }
  }
}

void collect_turns(const Pdag& g, const BicScorer& scorer, const SearchConfig& cfg,
                   std::vector<Candidate>& out) {
  const int p = g.node_count();
  for (int x = 0; x < p; ++x) {
    for (int y = 0; y < p; ++y) {
      if (!g.has_directed(y, x) && !g.has_undirected(x, y)) continue;
      for_each_clique_extension(g, 0, g.neighbors(y) & ~node_bit(x), [&](NodeSet c) {
        const NodeSet y_parents = g.parents(y) | c;
        if (!parents_allowed(cfg, y_parents | node_bit(x))) return;
        auto member = member_with_parents(g, x, y, c);
        if (!member || member->parents(y) != y_parents) return;
        const NodeSet x_parents = member->parents(x);
        member->remove_edge(y, x);
        if (member->reachable(y, x)) return;
        member->add_edge(x, y);
        Pdag result = dag_to_cpdag(*member);
        if (result == g) return;
        Operator op;
        op.kind = OperatorKind::turn;
        op.x = x;
        op.y = y;
        op.subset = c;
        op.delta = scorer.local(y, y_parents | node_bit(x)) - scorer.local(y, y_parents) +
                   scorer.local(x, x_parents & ~node_bit(y)) - scorer.local(x, x_parents);
        op.result = std::move(result);
        out.push_back({std::move(op), true});
      });
    }
  }
}

std::vector<Candidate> collect(const Pdag& g, Phase phase, const BicScorer& scorer,
                               const SearchConfig& cfg) {
  std::vector<Candidate> out;
  switch (phase) {
    case Phase::forward: collect_inserts(g, scorer, cfg, out); break;
    case Phase::backward: collect_removes(g, scorer, out); break;
    case Phase::turning: collect_turns(g, scorer, cfg, out); break;
  }
  return out;
}

void materialize(const Pdag& g, Candidate& c) {
  if (c.has_result) return;
  Operator& op = c.op;
  Pdag next = g;
  if (op.kind == OperatorKind::insert) {
    next.add_directed(op.x, op.y);
    for_each_node(op.subset, [&](int t) { next.orient(t, op.y); });
  } else {
    next.remove_edge(op.x, op.y);
    for_each_node(op.subset, [&](int h) {
      next.orient(op.y, h);
      if (next.has_undirected(op.x, h)) next.orient(op.x, h);
    });
  }
  auto completed = complete_pdag(next);
  if (!completed) throw std::logic_error("operator " + op.describe() + " produced a non-extendable graph");
  op.result = std::move(*completed);
  c.has_result = true;
}

// Max delta; among deltas within tie_epsilon of it, the lexicographically first.
const Candidate* select_best(const std::vector<Candidate>& cands, double eps) {
  if (cands.empty()) return nullptr;
  double top = cands.front().op.delta;
  for (const Candidate& c : cands) top = std::max(top, c.op.delta);
  const Candidate* best = nullptr;
  for (const Candidate& c : cands) {
    if (c.op.delta >= top - eps && (!best || c.op.precedes(best->op))) best = &c;
  }
  return best;
}

}  // namespace

std::vector<Operator> enumerate_operators(const Pdag& state, Phase phase, const BicScorer& scorer,
                                          const SearchConfig& cfg) {
  cfg.validate();
  std::vector<Candidate> cands = collect(state, phase, scorer, cfg);
  std::sort(cands.begin(), cands.end(),
            [](const Candidate& a, const Candidate& b) { return a.op.precedes(b.op); });
  std::map<std::string, bool> seen;
  std::vector<Operator> out;
  for (Candidate& c : cands) {
    materialize(state, c);
    if (seen.emplace(format_graph(c.op.result), true).second) out.push_back(std::move(c.op));
  }
  return out;
}

SearchResult ges(const BicScorer& scorer, const SearchConfig& cfg) {
  cfg.validate();
  if (cfg.score.lambda != scorer.config().lambda) {
    throw std::invalid_argument("scorer and search configuration disagree on lambda");
  }
  const int p = scorer.node_count();
  const double eps = scorer.config().tie_epsilon;
  SearchResult res;
  res.graph = Pdag(p);
  for (int j = 0; j < p; ++j) res.initial_score += scorer.local(j, 0);
  res.final_score = res.initial_score;

  bool changed = true;
  while (changed) {
    changed = false;
    for (Phase phase : cfg.phases) {
      while (true) {
        std::vector<Candidate> cands = collect(res.graph, phase, scorer, cfg);
        const Candidate* best = select_best(cands, eps);
        if (best == nullptr || !(best->op.delta > eps)) break;
        Candidate chosen = *best;
        materialize(res.graph, chosen);
        res.graph = chosen.op.result;
        res.final_score += chosen.op.delta;
        res.trace.push_back({phase, chosen.op.describe(), chosen.op.delta, res.graph});
        changed = true;
      }
    }
    if (!cfg.phase_loop) break;
  }
  res.variance_floor_hit = scorer.variance_floor_hit();
  return res;
}

SearchResult ges(const Dataset& data, const SearchConfig& cfg) {
  const BicScorer scorer(data, cfg.score);
  return ges(scorer, cfg);
}

std::string format_trace(const SearchResult& result) {
  std::string out;
  char buf[64];
  for (const TraceEntry& t : result.trace) {
    std::snprintf(buf, sizeof buf, "%.17g", t.delta);
    out += to_string(t.phase) + " " + t.op + " " + buf + "\n";
  }
  return out;
}

}  // namespace cdlab
