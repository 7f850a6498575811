#include "cdlab/sem.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cdlab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct TableShape {
  const char* id;
  int nodes;
  double edge_prob;
  int edges;
  std::uint64_t structure_seed;
  std::uint64_t weight_seed;
};

constexpr TableShape kTable[] = {
    {"DAG1", 5, 0.25, 3, 101, 201},   {"DAG2", 5, 0.5, 5, 102, 202},
    {"DAG3", 5, 0.75, 7, 103, 203},   {"DAG4", 20, 0.25, 51, 104, 204},
    {"DAG5", 20, 0.5, 99, 105, 205},
};

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k));
  return h;
}

std::uint64_t string_key(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void DagSpec::validate() const {
  if (node_count < 1 || node_count > kMaxNodes) {
    throw std::invalid_argument("node_count must be in [1, 64]");
  }
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) {
    throw std::invalid_argument("edge_prob must be in [0, 1]");
  }
  if (target_edge_count) {
    const int max_edges = node_count * (node_count - 1) / 2;
    if (*target_edge_count < 0 || *target_edge_count > max_edges) {
      throw std::invalid_argument("target_edge_count must be in [0, p(p-1)/2]");
    }
  }
  if (max_attempts < 1) throw std::invalid_argument("max_attempts must be positive");
}

Dag random_dag(const DagSpec& spec, Rng& rng) {
  spec.validate();
  const int p = spec.node_count;
  std::bernoulli_distribution coin(spec.edge_prob);
  for (int attempt = 0; attempt < spec.max_attempts; ++attempt) {
    std::vector<int> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    Dag dag(p);
    for (int i = 0; i < p; ++i) {
      for (int j = i + 1; j < p; ++j) {
        if (coin(rng)) dag.add_edge(order[i], order[j]);
      }
    }
    if (!spec.target_edge_count || dag.edge_count() == *spec.target_edge_count) return dag;
  }
  throw std::runtime_error("random_dag: no graph with " + std::to_string(*spec.target_edge_count) +
                           " edges after " + std::to_string(spec.max_attempts) + " attempts");
}

Dag random_dag(const DagSpec& spec) {
  Rng rng(spec.seed);
  return random_dag(spec, rng);
}

Dag assign_weights(Dag dag, Rng& rng, WeightRange range) {
  if (!(range.low <= range.high)) throw std::invalid_argument("empty weight range");
  std::uniform_real_distribution<double> unif(range.low, range.high);
  for (const Edge& e : dag.edges()) dag.set_weight(e.from, e.to, unif(rng));
  return dag;
}

Dataset sample_data(const Dag& dag, int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample size must be positive");
  const int p = dag.node_count();
  std::normal_distribution<double> noise(0.0, 1.0);
  Eigen::MatrixXd x(n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) x(i, j) = noise(rng);
  }
  const Eigen::MatrixXd& w = dag.weights();
  for (int j : dag.topological_order()) {
    if (dag.parents(j) != 0) x.col(j) += x * w.col(j);
  }
  return Dataset(std::move(x), default_labels(p));
}

double adjacency_margin(const Dag& dag) {
  const int p = dag.node_count();
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(p, p) - dag.weights();
  const Eigen::MatrixXd precision = a * a.transpose();
  const Eigen::MatrixXd cov = precision.inverse();
  double margin = 1.0;
  for (const Edge& e : dag.edges()) {
    const int i = e.from, j = e.to;
    margin = std::min(margin, std::abs(cov(i, j)) / std::sqrt(cov(i, i) * cov(j, j)));
    margin = std::min(margin, std::abs(precision(i, j)) / std::sqrt(precision(i, i) * precision(j, j)));
  }
  return margin;
}

Dag dag3_fixture() {
  Dag dag(5);
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) dag.add_edge(a, b);
  }
  dag.add_edge(4, 3);
  return dag;
}

Fixture table_fixture(const std::string& id) {
  for (const TableShape& s : kTable) {
    if (id != s.id) continue;
    Dag structure = id == "DAG3" ? dag3_fixture()
                                 : random_dag(DagSpec{s.nodes, s.edge_prob, s.edges, s.structure_seed});
    Rng rng(s.weight_seed);
    for (int attempt = 0; attempt < 10000; ++attempt) {
      Dag weighted = assign_weights(structure, rng);
      if (s.nodes > 5 || adjacency_margin(weighted) >= kFixtureMargin) return {id, std::move(weighted)};
    }
    throw std::runtime_error("no weights for fixture '" + id + "' meet the adjacency margin");
  }
  throw std::invalid_argument("unknown fixture '" + id + "'");
}

std::vector<std::string> table_fixture_ids(bool include_large) {
  std::vector<std::string> out;
  for (const TableShape& s : kTable) {
    if (include_large || s.nodes <= 5) out.emplace_back(s.id);
  }
  return out;
}

}  // namespace cdlab
