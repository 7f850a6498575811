#include "cdlab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace cdlab::oracle {

namespace {

std::vector<Edge> all_pairs(int p) {
  std::vector<Edge> pairs;
  for (int a = 0; a < p; ++a) {
    for (int b = a + 1; b < p; ++b) pairs.push_back({a, b});
  }
  return pairs;
}

using ClassKey = std::pair<std::vector<Edge>, std::vector<VStructure>>;

ClassKey class_key(const Dag& d) { return {skeleton(d), v_structures(d)}; }

Pdag union_of_orientations(const std::vector<Dag>& members) {
  const Dag& first = members.front();
  Pdag rep(first.node_count());
  for (const Edge& e : skeleton(first)) {
    const bool forward = first.has_edge(e.from, e.to);
    const bool agree = std::all_of(members.begin(), members.end(),
                                   [&](const Dag& m) { return m.has_edge(e.from, e.to) == forward; });
    if (!agree) {
      rep.add_undirected(e.from, e.to);
    } else if (forward) {
      rep.add_directed(e.from, e.to);
    } else {
      rep.add_directed(e.to, e.from);
    }
  }
  return rep;
}

}  // namespace

std::vector<Dag> enumerate_dags(int p) {
  if (p < 1 || p > kMaxEnumerationNodes) {
    throw std::invalid_argument("enumerate_dags supports 1 <= p <= 5");
  }
  const std::vector<Edge> pairs = all_pairs(p);
  std::size_t total = 1;
  for (std::size_t i = 0; i < pairs.size(); ++i) total *= 3;

  std::vector<Dag> out;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    Pdag g(p);
    for (const Edge& e : pairs) {
      const int state = static_cast<int>(c % 3);
      c /= 3;
      if (state == 1) g.add_directed(e.from, e.to);
      if (state == 2) g.add_directed(e.to, e.from);
    }
    if (has_directed_cycle(g)) continue;
    Dag d(p);
    for (const Edge& e : g.directed_edges()) d.add_edge(e.from, e.to);
    out.push_back(std::move(d));
  }
  return out;
}

EquivalenceClass equivalence_class(const Dag& dag) {
  const ClassKey key = class_key(dag);
  EquivalenceClass cls;
  for (Dag& d : enumerate_dags(dag.node_count())) {
    if (class_key(d) == key) cls.members.push_back(std::move(d));
  }
  cls.representative = union_of_orientations(cls.members);
  return cls;
}

std::vector<EquivalenceClass> all_equivalence_classes(int p) {
  std::map<ClassKey, std::vector<Dag>> groups;
  std::vector<ClassKey> order;
  for (Dag& d : enumerate_dags(p)) {
    ClassKey key = class_key(d);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(std::move(d));
  }
  std::vector<EquivalenceClass> out;
  out.reserve(order.size());
  for (const ClassKey& key : order) {
    std::vector<Dag>& members = groups[key];
    Pdag rep = union_of_orientations(members);
    out.push_back({std::move(members), std::move(rep)});
  }
  return out;
}

ExhaustiveResult exhaustive_best(const Dataset& data, const ScoreConfig& cfg, double relative_tie) {
  const int p = static_cast<int>(data.cols());
  if (p > kMaxExhaustiveNodes) throw std::invalid_argument("exhaustive_best supports p <= 4");
  const BicScorer scorer(data, cfg);
  const std::vector<Dag> dags = enumerate_dags(p);
  std::vector<double> scores;
  scores.reserve(dags.size());
  for (const Dag& d : dags) scores.push_back(total_score(scorer, d));
  const double best = *std::max_element(scores.begin(), scores.end());

  ExhaustiveResult res;
  res.score = best;
  const double tol = relative_tie * std::max(1.0, std::abs(best));
  for (std::size_t i = 0; i < dags.size(); ++i) {
    if (scores[i] < best - tol) continue;
    Pdag cp = dag_to_cpdag(dags[i]);
    if (std::find(res.best.begin(), res.best.end(), cp) == res.best.end()) res.best.push_back(std::move(cp));
  }
  return res;
}

}  // namespace cdlab::oracle
