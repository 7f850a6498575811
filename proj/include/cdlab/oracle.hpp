#pragma once

#include "cdlab/dataset.hpp"
#include "cdlab/graph.hpp"
#include "cdlab/scoring.hpp"

#include <vector>

// Brute-force ground truth for small graphs. Everything here is exhaustive on purpose
// and shares no search code with ges.
namespace cdlab::oracle {

inline constexpr int kMaxEnumerationNodes = 5;
inline constexpr int kMaxExhaustiveNodes = 4;

/// Every labelled DAG on p nodes, from all 3^(p(p-1)/2) none/forward/backward pair
/// assignments that are acyclic. Throws std::invalid_argument for p > 5.
std::vector<Dag> enumerate_dags(int p);

struct EquivalenceClass {
  std::vector<Dag> members;
  Pdag representative;
};

/// Members found by comparing skeleton and v-structures against every enumerated DAG;
/// the representative is built from the union of member orientations.
EquivalenceClass equivalence_class(const Dag& dag);

/// Partition of enumerate_dags(p) into classes.
std::vector<EquivalenceClass> all_equivalence_classes(int p);

struct ExhaustiveResult {
  /// CPDAGs of every DAG scoring within tie_epsilon-relative of the best; one entry
  /// when all optimal DAGs are Markov equivalent.
  std::vector<Pdag> best;
  double score = 0.0;
};

/// Maximum total score over all DAGs. Throws std::invalid_argument for p > 4.
ExhaustiveResult exhaustive_best(const Dataset& data, const ScoreConfig& cfg,
                                 double relative_tie = 1e-8);

}  // namespace cdlab::oracle
