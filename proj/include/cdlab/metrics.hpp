#pragma once

#include "cdlab/graph.hpp"

#include <string>

namespace cdlab {

struct EdgeCounts {
  int true_edges_found = 0;
  int false_edges = 0;
  int gold_edges = 0;
  int gold_gaps = 0;
  int found_edges = 0;

  bool operator==(const EdgeCounts&) const = default;
};

struct MetricsReport {
  int shd = 0;
  double tpr = 0.0;
  double fpr = 0.0;
  double tdr = 0.0;
  double f1 = 0.0;
  EdgeCounts counts;
  /// A rate had a zero denominator and was set to 0.
  bool degenerate = false;

  bool operator==(const MetricsReport&) const = default;
};

/// Per unordered pair, 1 if the edge is present in only one graph or its marks differ.
int shd(const Pdag& found, const Pdag& gold);

/// Orientation-blind adjacency rates against the gold skeleton; `shd` is filled
/// against `gold` as given.
MetricsReport adjacency_metrics(const Pdag& found, const Pdag& gold);
/// Same, with SHD taken against the CPDAG of the gold DAG.
MetricsReport adjacency_metrics(const Pdag& found, const Dag& gold_dag);

std::string metrics_csv_header();
std::string metrics_csv_row(const MetricsReport& m);

}  // namespace cdlab
