// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the number
// of failed criteria. Pass a criterion number to run only that one.

#include "cdlab/experiment.hpp"
#include "cdlab/ges.hpp"
#include "cdlab/metrics.hpp"
#include "cdlab/oracle.hpp"
#include "cdlab/sem.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <string>
#include <thread>

using namespace cdlab;

namespace {

// Pinned tolerances and limits.
constexpr double kScoreEquivalenceRel = 1e-8;
constexpr double kTraceSumRel = 1e-8;
constexpr double kOptimalityRel = 1e-8;
// Frozen from the pilot run over the same 200 seeded instances (observed 192/200).
constexpr double kOptimalityThreshold = 0.90;
constexpr double kConsistencyRate = 0.90;
constexpr double kF1BandLow = 0.5;
constexpr double kF1BandHigh = 1.0;
constexpr std::uint64_t kSeed = 20240101;
constexpr int kDeskWorkers = 4;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double rel_gap(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Dataset random_instance(int p, int n, double edge_prob, Rng& rng) {
  const Dag gold = assign_weights(random_dag(DagSpec{p, edge_prob, std::nullopt, 0}, rng), rng);
  return sample_data(gold, n, rng);
}

// 1: total score is constant on every Markov class.
Outcome score_equivalence() {
  const auto classes = oracle::all_equivalence_classes(4);
  Rng rng(derive_seed(kSeed, {1}));
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Dataset data = random_instance(4, 200, 0.5, rng);
    const BicScorer scorer(data, ScoreConfig{});
    for (const auto& cls : classes) {
      double lo = INFINITY, hi = -INFINITY;
      for (const Dag& m : cls.members) {
        const double s = total_score(scorer, m);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
      worst = std::max(worst, rel_gap(lo, hi));
    }
  }
  return {worst <= kScoreEquivalenceRel,
          "200 datasets x " + std::to_string(classes.size()) + " classes, max relative spread " +
              fmt("%.3g", worst)};
}

// 2: metrics agree exactly with the brute-force oracle.
Outcome metric_oracle() {
  Rng rng(derive_seed(kSeed, {2}));
  std::uniform_int_distribution<int> size(1, 8);
  std::bernoulli_distribution use_cpdag(0.5);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int p = size(rng);
    Pdag found, gold;
    if (use_cpdag(rng)) {
      found = dag_to_cpdag(random_dag(DagSpec{p, 0.4, std::nullopt, 0}, rng));
      gold = dag_to_cpdag(random_dag(DagSpec{p, 0.4, std::nullopt, 0}, rng));
    } else {
      found = testing::random_pdag(p, rng);
      gold = testing::random_pdag(p, rng);
    }
    const MetricsReport m = adjacency_metrics(found, gold);
    const auto o = testing::brute_metrics(testing::adjacency_matrix(found), testing::adjacency_matrix(gold));
    if (m.shd != o.shd || m.tpr != o.tpr || m.fpr != o.fpr || m.tdr != o.tdr || m.f1 != o.f1) ++mismatches;
  }
  return {mismatches == 0, "1000 pairs, " + std::to_string(mismatches) + " mismatches"};
}

// 3: traces increase strictly, stay within CPDAGs and add up.
Outcome ges_validity() {
  Rng rng(derive_seed(kSeed, {3}));
  std::uniform_int_distribution<int> size(3, 6);
  std::uniform_int_distribution<int> samples(50, 500);
  std::uniform_real_distribution<double> density(0.2, 0.7);
  int bad_steps = 0, bad_graphs = 0, bad_sums = 0;
  std::size_t steps = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Dataset data = random_instance(size(rng), samples(rng), density(rng), rng);
    const SearchResult res = ges(data, SearchConfig{});
    double sum = 0.0;
    for (const TraceEntry& t : res.trace) {
      if (!(t.delta > 0.0)) ++bad_steps;
      if (!is_cpdag(t.graph)) ++bad_graphs;
      sum += t.delta;
      ++steps;
    }
    if (rel_gap(res.final_score, res.initial_score + sum) > kTraceSumRel) ++bad_sums;
  }
  return {bad_steps == 0 && bad_graphs == 0 && bad_sums == 0,
          "500 searches, " + std::to_string(steps) + " steps; non-increasing " + std::to_string(bad_steps) +
              ", non-CPDAG " + std::to_string(bad_graphs) + ", score mismatches " + std::to_string(bad_sums)};
}

// 4: how often greedy search reaches the exhaustive optimum.
Outcome optimality_rate() {
  Rng rng(derive_seed(kSeed, {4}));
  int hits = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Dataset data = random_instance(4, 1000, 0.5, rng);
    const SearchResult res = ges(data, SearchConfig{});
    const auto best = oracle::exhaustive_best(data, ScoreConfig{});
    if (rel_gap(res.final_score, best.score) <= kOptimalityRel) ++hits;
  }
  const double rate = hits / 200.0;
  return {rate >= kOptimalityThreshold,
          "optimal in " + std::to_string(hits) + "/200 (rate " + fmt("%.3f", rate) + ", threshold " +
              fmt("%.2f", kOptimalityThreshold) + ")"};
}

// 5: large-sample recovery of DAG3.
Outcome consistency() {
  const Pdag target = dag_to_cpdag(dag3_fixture());
  std::atomic<int> hits{0};
  std::atomic<int> next{0};
  auto work = [&] {
    for (int trial = next++; trial < 50; trial = next++) {
      Rng rng(derive_seed(kSeed, {5, static_cast<std::uint64_t>(trial)}));
      const Dag gold = assign_weights(dag3_fixture(), rng, WeightRange{0.5, 1.0});
      if (ges(sample_data(gold, 50000, rng), SearchConfig{}).graph == target) ++hits;
    }
  };
  {
    std::vector<std::jthread> pool;
    const unsigned hw = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    for (unsigned i = 0; i < hw; ++i) pool.emplace_back(work);
  }
  const double rate = hits / 50.0;
  return {rate >= kConsistencyRate,
          "recovered " + std::to_string(hits.load()) + "/50 (rate " + fmt("%.2f", rate) + ", need " +
              fmt("%.2f", kConsistencyRate) + ")"};
}

// Desk-scale Sim1 results shared by criteria 6-8.
const std::vector<ResultRow>& desk_rows() {
  static const std::vector<ResultRow> rows = [] {
    return run_experiment(ExperimentPlan::desk_scale(kSeed), kDeskWorkers);
  }();
  return rows;
}

double mean_of(const std::vector<ResultRow>& rows, const std::function<bool(const ResultRow&)>& keep,
               double ResultRow::*field) {
  double sum = 0.0;
  int count = 0;
  for (const ResultRow& r : rows) {
    if (!keep(r)) continue;
    sum += r.*field;
    ++count;
  }
  return count ? sum / count : NAN;
}

// 6: directional trends over sample size, lambda and binning.
Outcome trends() {
  const auto& rows = desk_rows();
  const double f1_small = mean_of(rows, [](const ResultRow& r) { return r.bins.is_continuous() && r.n == 100; },
                                  &ResultRow::f1);
  const double f1_large = mean_of(rows, [](const ResultRow& r) { return r.bins.is_continuous() && r.n == 1000; },
                                  &ResultRow::f1);
  const bool a = f1_large > f1_small;

  bool b = true;
  std::string b_detail;
  for (const BinSpec& bins : ExperimentPlan{}.bin_conditions) {
    const double t1 = mean_of(rows, [&](const ResultRow& r) { return r.bins == bins && r.lambda == 1.0; },
                              &ResultRow::tpr);
    const double t4 = mean_of(rows, [&](const ResultRow& r) { return r.bins == bins && r.lambda == 4.0; },
                              &ResultRow::tpr);
    b = b && t4 < t1;
    b_detail += " " + bins.to_string() + ":" + fmt("%.3f", t1) + ">" + fmt("%.3f", t4);
  }

  std::map<std::string, double> shd_by_bins;
  for (const BinSpec& bins : ExperimentPlan{}.bin_conditions) {
    double sum = 0.0;
    int count = 0;
    for (const ResultRow& r : rows) {
      if (r.dag_id == "DAG3" && r.n == 1000 && r.lambda == 1.0 && r.bins == bins) {
        sum += r.shd;
        ++count;
      }
    }
    shd_by_bins[bins.to_string()] = sum / count;
  }
  const double cont = shd_by_bins["continuous"];
  bool c = true;
  std::string c_detail;
  for (const auto& [bins, v] : shd_by_bins) {
    if (bins != "continuous") c = c && cont < v;
    c_detail += " " + bins + ":" + fmt("%.2f", v);
  }
  return {a && b && c, std::string("(a) F1 n=1000 ") + fmt("%.3f", f1_large) + " vs n=100 " + fmt("%.3f", f1_small) +
                           (a ? " ok" : " FAIL") + "; (b) TPR l=1>l=4" + b_detail + (b ? " ok" : " FAIL") +
                           "; (c) DAG3 mean SHD" + c_detail + (c ? " ok" : " FAIL")};
}

// 7: F1 sanity band.
Outcome f1_band() {
  const double f1 = mean_of(
      desk_rows(), [](const ResultRow& r) { return r.bins.is_continuous() && r.n == 1000 && r.lambda == 1.0; },
      &ResultRow::f1);
  return {f1 >= kF1BandLow && f1 <= kF1BandHigh,
          "mean F1 " + fmt("%.3f", f1) + " in [" + fmt("%.1f", kF1BandLow) + ", " + fmt("%.1f", kF1BandHigh) + "]"};
}

// Whether every decision of the search on `scorer` is separated from the
// runner-up and from the stopping threshold by more than tie_epsilon.
bool well_separated(const BicScorer& scorer, const SearchResult& res) {
  const double eps = scorer.config().tie_epsilon;
  std::vector<Pdag> states{Pdag(scorer.node_count())};
  for (const TraceEntry& t : res.trace) states.push_back(t.graph);
  for (const Pdag& s : states) {
    for (Phase phase : {Phase::forward, Phase::backward, Phase::turning}) {
      std::vector<double> deltas;
      for (const Operator& op : enumerate_operators(s, phase, scorer, SearchConfig{})) deltas.push_back(op.delta);
      std::sort(deltas.rbegin(), deltas.rend());
      if (deltas.empty()) continue;
      if (std::abs(deltas[0] - eps) <= eps) return false;
      if (deltas.size() > 1 && deltas[0] > eps && deltas[0] - deltas[1] <= eps) return false;
    }
  }
  return true;
}

// 8: determinism across worker counts and affine invariance of search output.
Outcome determinism_and_invariance() {
  const std::string reference = format_results_csv(desk_rows());
  bool same = true;
  for (int workers : {1, 2, 8}) {
    same = same && format_results_csv(run_experiment(ExperimentPlan::desk_scale(kSeed), workers)) == reference;
  }

  Rng rng(derive_seed(kSeed, {8}));
  std::uniform_int_distribution<int> size(3, 6);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  std::uniform_real_distribution<double> shift(-5.0, 5.0);
  int cases = 0, changed = 0, skipped = 0;
  while (cases < 100) {
    const int p = size(rng);
    const Dataset data = random_instance(p, 300, 0.5, rng);
    const BicScorer scorer(data, ScoreConfig{});
    const SearchResult res = ges(scorer, SearchConfig{});
    if (!well_separated(scorer, res)) {
      ++skipped;
      continue;
    }
    Dataset moved = data;
    for (int j = 0; j < p; ++j) {
      moved.values.col(j) = (moved.values.col(j) * scale(rng)).array() + shift(rng);
    }
    if (!(ges(moved, SearchConfig{}).graph == res.graph)) ++changed;
    ++cases;
  }
  return {same && changed == 0,
          std::string("results.csv ") + (same ? "identical" : "DIFFERS") + " for 1/2/4/8 workers (" +
              std::to_string(reference.size()) + " bytes); affine transforms changed " + std::to_string(changed) +
              "/100 outputs (" + std::to_string(skipped) + " near-tie cases skipped)"};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  Outcome (*run)();
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "score equivalence", 120, score_equivalence},
      {2, "metric oracle equivalence", 60, metric_oracle},
      {3, "GES validity", 0, ges_validity},
      {4, "small-instance optimality rate", 0, optimality_rate},
      {5, "DAG3 consistency", 300, consistency},
      {6, "trend replication", 600, trends},
      {7, "F1 sanity band", 0, f1_band},
      {8, "determinism and affine invariance", 0, determinism_and_invariance},
  };
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failed = 0;
  for (const Criterion& c : criteria) {
    if (only && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      o.pass = false;
      o.detail += "; over the " + fmt("%.0f", c.budget_s) + " s budget";
    }
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed;
}
