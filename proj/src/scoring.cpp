#include "cdlab/scoring.hpp"

#include <mutex>

namespace cdlab {

void ScoreConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be positive");
  if (!(variance_floor > 0.0)) throw std::invalid_argument("variance_floor must be positive");
  if (!(tie_epsilon >= 0.0)) throw std::invalid_argument("tie_epsilon must be nonnegative");
}

std::string describe_parents(NodeSet parents) {
  std::string out = "{";
  bool first = true;
  for_each_node(parents, [&](int i) {
    if (!first) out += ",";
    out += std::to_string(i);
    first = false;
  });
  return out + "}";
}

double local_bic(const Dataset& data, int node, NodeSet parents, const ScoreConfig& cfg) {
  cfg.validate();
  if (node < 0 || node >= data.cols() || (parents & ~all_nodes(static_cast<int>(data.cols()))) != 0) {
    throw ScoreError("node index out of range", node, parents);
  }
  return gaussian_local_bic(centered_gram(data.values), data.rows(), node, parents, cfg).score;
}

BicScorer::BicScorer(const Dataset& data, ScoreConfig cfg)
    : gram_(centered_gram(data.values)), n_(data.rows()), cfg_(cfg) {
  cfg_.validate();
  if (data.cols() > kMaxNodes) throw std::invalid_argument("at most 64 variables are supported");
}

double BicScorer::local(int node, NodeSet parents) const {
  const Key key{node, parents};
  {
    std::shared_lock lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  if (node < 0 || node >= node_count() || (parents & ~all_nodes(node_count())) != 0) {
    throw ScoreError("node index out of range", node, parents);
  }
  const LocalFit fit = gaussian_local_bic(gram_, n_, node, parents, cfg_);
  if (fit.floor_hit) floor_hit_.store(true);
  std::unique_lock lock(mutex_);
  cache_.emplace(key, fit.score);
  return fit.score;
}

std::size_t BicScorer::cache_size() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

double total_score(const BicScorer& scorer, const Dag& dag) {
  if (dag.node_count() != scorer.node_count()) {
    throw std::invalid_argument("graph and dataset differ in variable count");
  }
  double total = 0.0;
  for (int j = 0; j < dag.node_count(); ++j) total += scorer.local(j, dag.parents(j));
  return total;
}

double total_score(const Dataset& data, const Dag& dag, const ScoreConfig& cfg) {
  const BicScorer scorer(data, cfg);
  return total_score(scorer, dag);
}

}  // namespace cdlab
