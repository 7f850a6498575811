#pragma once

#include "cdlab/dataset.hpp"
#include "cdlab/graph.hpp"

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace cdlab {

struct ScoreConfig {
  /// Multiplier on the ln(n)/2 complexity penalty; 1 is standard BIC.
  double lambda = 1.0;
  double variance_floor = 1e-12;
  /// Improvements at or below this are treated as ties.
  double tie_epsilon = 1e-10;

  void validate() const;
};

class ScoreError : public std::runtime_error {
 public:
  ScoreError(const std::string& what, int node, NodeSet parents)
      : std::runtime_error(what), node(node), parents(parents) {}
  int node;
  NodeSet parents;
};

std::string describe_parents(NodeSet parents);

/// Cross-product matrix of the mean-centered columns.
template <typename Derived>
Eigen::MatrixXd centered_gram(const Eigen::MatrixBase<Derived>& x) {
  const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  return centered.transpose() * centered;
}

struct LocalFit {
  double score = 0.0;
  bool floor_hit = false;
};

/// Maximization-convention local BIC from a centered Gram matrix:
///   -(n/2) ln(sigma^2) - lambda (|parents| + 1) ln(n) / 2
/// with sigma^2 = max(RSS / n, variance_floor). Rank-deficient parent blocks use the
/// minimum-norm least-squares solution.
template <typename Derived>
LocalFit gaussian_local_bic(const Eigen::MatrixBase<Derived>& gram, Eigen::Index n, int node,
                            NodeSet parents, const ScoreConfig& cfg) {
  if (contains(parents, node)) throw ScoreError("node is its own parent", node, parents);
  const int k = set_size(parents);
  if (n <= k + 1) {
    throw ScoreError("sample size " + std::to_string(n) + " too small for " + std::to_string(k) +
                         " parents",
                     node, parents);
  }
  double rss = gram(node, node);
  if (k > 0) {
    const std::vector<int> idx = to_vector(parents);
    Eigen::MatrixXd spp(k, k);
    Eigen::VectorXd spy(k);
    for (int a = 0; a < k; ++a) {
      spy(a) = gram(idx[a], node);
      for (int b = 0; b < k; ++b) spp(a, b) = gram(idx[a], idx[b]);
    }
    const Eigen::VectorXd beta = spp.completeOrthogonalDecomposition().solve(spy);
    rss -= spy.dot(beta);
  }
  const double nd = static_cast<double>(n);
  LocalFit fit;
  double sigma2 = rss / nd;
  if (!(sigma2 >= cfg.variance_floor)) {
    fit.floor_hit = true;
    sigma2 = cfg.variance_floor;
  }
  fit.score = -0.5 * nd * std::log(sigma2) - cfg.lambda * (k + 1) * std::log(nd) / 2.0;
  if (!std::isfinite(fit.score)) {
    throw ScoreError("non-finite local score for node " + std::to_string(node) + " with parents " +
                         describe_parents(parents),
                     node, parents);
  }
  return fit;
}

/// Uncached local score straight from a dataset.
double local_bic(const Dataset& data, int node, NodeSet parents, const ScoreConfig& cfg);

/// Decomposable BIC over one dataset with a memo of local scores. Lookups may run
/// concurrently; a fill computes the same value whichever thread does it.
class BicScorer {
 public:
  BicScorer(const Dataset& data, ScoreConfig cfg);
  BicScorer(const BicScorer&) = delete;
  BicScorer& operator=(const BicScorer&) = delete;

  double local(int node, NodeSet parents) const;

  int node_count() const { return static_cast<int>(gram_.rows()); }
  Eigen::Index sample_size() const { return n_; }
  const ScoreConfig& config() const { return cfg_; }
  bool variance_floor_hit() const { return floor_hit_.load(); }
  std::size_t cache_size() const;

 private:
  struct Key {
    int node;
    NodeSet parents;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<NodeSet>{}(k.parents * 0x9e3779b97f4a7c15ULL + static_cast<NodeSet>(k.node));
    }
  };

  Eigen::MatrixXd gram_;
  Eigen::Index n_;
  ScoreConfig cfg_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<Key, double, KeyHash> cache_;
  mutable std::atomic<bool> floor_hit_{false};
};

/// Sum of local scores over the DAG's nodes; higher is better.
double total_score(const BicScorer& scorer, const Dag& dag);
double total_score(const Dataset& data, const Dag& dag, const ScoreConfig& cfg);

}  // namespace cdlab
