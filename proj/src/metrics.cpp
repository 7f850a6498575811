#include "cdlab/metrics.hpp"

#include <cstdio>
#include <stdexcept>

namespace cdlab {

namespace {

void check_sizes(const Pdag& a, const Pdag& b) {
  if (a.node_count() != b.node_count()) {
    throw std::invalid_argument("graphs differ in node count (" + std::to_string(a.node_count()) +
                                " vs " + std::to_string(b.node_count()) + ")");
  }
}

// 0 absent, 1 a->b, 2 b->a, 3 undirected.
int mark(const Pdag& g, int a, int b) {
  if (g.has_undirected(a, b)) return 3;
  if (g.has_directed(a, b)) return 1;
  if (g.has_directed(b, a)) return 2;
  return 0;
}

}  // namespace

int shd(const Pdag& found, const Pdag& gold) {
  check_sizes(found, gold);
  int d = 0;
  for (int a = 0; a < found.node_count(); ++a) {
    for (int b = a + 1; b < found.node_count(); ++b) d += mark(found, a, b) != mark(gold, a, b);
  }
  return d;
}

MetricsReport adjacency_metrics(const Pdag& found, const Pdag& gold) {
  check_sizes(found, gold);
  const int p = found.node_count();
  MetricsReport m;
  EdgeCounts& c = m.counts;
  for (int a = 0; a < p; ++a) {
    for_each_node(found.adjacents(a) & nodes_above(a), [&](int b) {
      ++c.found_edges;
      if (gold.adjacent(a, b)) {
        ++c.true_edges_found;
      } else {
        ++c.false_edges;
      }
    });
    c.gold_edges += set_size(gold.adjacents(a) & nodes_above(a));
  }
  c.gold_gaps = p * (p - 1) / 2 - c.gold_edges;

  auto rate = [&](int num, int den) {
    if (den == 0) {
      m.degenerate = true;
      return 0.0;
    }
    return static_cast<double>(num) / den;
  };
  m.tpr = rate(c.true_edges_found, c.gold_edges);
  m.fpr = rate(c.false_edges, c.gold_gaps);
  m.tdr = rate(c.true_edges_found, c.found_edges);
  if (m.tdr + m.tpr > 0.0) {
    m.f1 = 2.0 * m.tdr * m.tpr / (m.tdr + m.tpr);
  } else {
    m.f1 = 0.0;
    m.degenerate = true;
  }
  m.shd = shd(found, gold);
  return m;
}

MetricsReport adjacency_metrics(const Pdag& found, const Dag& gold_dag) {
  return adjacency_metrics(found, dag_to_cpdag(gold_dag));
}

std::string metrics_csv_header() {
  return "shd,tpr,fpr,tdr,f1,true_edges_found,false_edges,gold_edges,gold_gaps,found_edges";
}

std::string metrics_csv_row(const MetricsReport& m) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d,%.6g,%.6g,%.6g,%.6g,%d,%d,%d,%d,%d", m.shd, m.tpr, m.fpr, m.tdr,
                m.f1, m.counts.true_edges_found, m.counts.false_edges, m.counts.gold_edges,
                m.counts.gold_gaps, m.counts.found_edges);
  return buf;
}

}  // namespace cdlab
