#pragma once

#include "cdlab/dataset.hpp"
#include "cdlab/graph.hpp"
#include "cdlab/scoring.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cdlab {

enum class Phase { forward, backward, turning };

std::string to_string(Phase phase);

/// Declaration order is the tie-break order between operator kinds.
enum class OperatorKind { insert, remove, turn };

/// One GES move on a CPDAG.
///
/// insert(x, y, T): add x -> y, orienting the undirected neighbours T of y
///   (non-adjacent to x) into y.
/// remove(x, y, H): delete the x-y edge, orienting y -> h and x -> h for h in H,
///   H being neighbours of y adjacent to x.
/// turn(x, y, C): reverse an edge y -> x or y -- x of a member DAG so that x -> y,
///   where C are the undirected neighbours of y taken as its parents in that member.
struct Operator {
  OperatorKind kind = OperatorKind::insert;
  int x = 0;
  int y = 0;
  NodeSet subset = 0;
  double delta = 0.0;
  /// CPDAG after applying the operator.
  Pdag result;

  std::string describe() const;
  /// Lexicographic (kind, x, y, subset).
  bool precedes(const Operator& other) const;
};

struct SearchConfig {
  ScoreConfig score;
  std::vector<Phase> phases{Phase::forward, Phase::backward, Phase::turning};
  /// Upper bound on any node's parent count in the member DAGs visited.
  std::optional<int> max_parents;
  /// Repeat the phase sequence until a full pass changes nothing.
  bool phase_loop = true;

  void validate() const;
};

struct TraceEntry {
  Phase phase = Phase::forward;
  std::string op;
  double delta = 0.0;
  Pdag graph;
};

struct SearchResult {
  Pdag graph;
  double initial_score = 0.0;
  double final_score = 0.0;
  std::vector<TraceEntry> trace;
  bool variance_floor_hit = false;
};

/// All valid operators of a phase with exact local-score deltas. Operators that
/// yield the same CPDAG are merged, keeping the lexicographically first.
std::vector<Operator> enumerate_operators(const Pdag& state, Phase phase, const BicScorer& scorer,
                                          const SearchConfig& cfg);

/// Greedy equivalence search from the empty graph. Each phase applies the
/// best-improving operator until no delta exceeds tie_epsilon; ties within
/// tie_epsilon of the best go to the lexicographically first operator.
SearchResult ges(const BicScorer& scorer, const SearchConfig& cfg);
SearchResult ges(const Dataset& data, const SearchConfig& cfg);

/// One trace line per applied operator: phase, operator, delta.
std::string format_trace(const SearchResult& result);

}  // namespace cdlab
