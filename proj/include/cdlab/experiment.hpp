#pragma once

#include "cdlab/binning.hpp"
#include "cdlab/ges.hpp"
#include "cdlab/metrics.hpp"
#include "cdlab/sem.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cdlab {

enum class Design { sim1, sim2 };

std::string to_string(Design d);

/// Factorial design over fixtures x sample sizes x bin conditions x lambdas x replicates.
struct ExperimentPlan {
  std::vector<Fixture> fixtures;
  std::vector<int> sample_sizes{100, 500, 1000};
  std::vector<BinSpec> bin_conditions{BinSpec::continuous(), BinSpec::bins(2), BinSpec::bins(5),
                                      BinSpec::bins(10), BinSpec::bins(15)};
  std::vector<double> lambdas{1.0, 2.0, 4.0};
  int replicates = 20;
  Design design = Design::sim1;
  std::uint64_t master_seed = 20240101;
  /// Overrides the per-fixture default (unbounded below 20 nodes, 8 from 20 nodes up).
  std::optional<int> max_parents;

  void validate() const;
  std::optional<int> max_parents_for(const Fixture& f) const;
  std::size_t expected_rows() const;

  /// DAG1-DAG3, 20 replicates.
  static ExperimentPlan desk_scale(std::uint64_t seed);
  /// DAG1-DAG5, 200 replicates.
  static ExperimentPlan full_scale(std::uint64_t seed);
};

/// JSON keys: design ("SIM1" | "SIM2"), dag_fixtures, sample_sizes, bin_conditions,
/// lambdas, replicates, master_seed, max_parents. Missing keys keep desk-scale
/// defaults; unknown keys throw. A fixture is a table name ("DAG1".."DAG5"), an
/// object {id, nodes, edge_prob, target_edge_count?, seed}, or {id, graph_file}.
ExperimentPlan parse_plan_json(const std::string& text);

struct ResultRow {
  std::string dag_id;
  int replicate = 0;
  int n = 0;
  BinSpec bins;
  double lambda = 1.0;
  int shd = 0;
  double tpr = 0.0;
  double fpr = 0.0;
  double tdr = 0.0;
  double f1 = 0.0;
  double final_score = 0.0;
  double runtime_ms = 0.0;
  std::uint64_t seed = 0;
  /// Hash of the continuous draw the row's dataset was derived from.
  std::uint64_t data_hash = 0;
  /// Semicolon-separated: degenerate, variance_floor, search_failed.
  std::string flags;
};

/// Each (fixture, n, replicate) continuous draw is binned into every condition and
/// searched at every lambda. Rows come back in canonical order whatever `workers` is.
std::vector<ResultRow> run_sim1(const ExperimentPlan& plan, int workers = 1);
/// Each replicate redraws the fixture's weights, then proceeds as in Sim1.
std::vector<ResultRow> run_sim2(const ExperimentPlan& plan, int workers = 1);
std::vector<ResultRow> run_experiment(const ExperimentPlan& plan, int workers = 1);

/// ResultRow fields in declaration order, runtime excluded so equal seeds give equal bytes.
std::string format_results_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_results_csv(const std::string& text);
/// dag_id, replicate, n, bins, lambda, runtime_ms.
std::string format_runtimes_csv(const std::vector<ResultRow>& rows);

inline constexpr std::array<const char*, 5> kSummaryMetrics{"shd", "tpr", "fpr", "tdr", "f1"};

struct SummaryRow {
  std::vector<std::string> group;
  int count = 0;
  std::array<double, 5> mean{};
  std::array<double, 5> sd{};
};

struct SummaryTable {
  std::vector<std::string> group_by;
  std::vector<SummaryRow> rows;
};

/// Mean and sample standard deviation (n-1) per group; groups in order of first
/// appearance. Valid fields: dag_id, replicate, n, bins, lambda.
SummaryTable aggregate(const std::vector<ResultRow>& rows, const std::vector<std::string>& group_by);

/// RFC-4180 with header; six significant digits.
std::string format_summary_csv(const SummaryTable& table);
SummaryTable parse_summary_csv(const std::string& text);

/// Static line chart of `metric` against the bins group field, one polyline per
/// combination of the remaining group fields.
std::string render_svg(const SummaryTable& table, const std::string& metric);

/// JSON record of search settings used for a plan.
std::string plan_metadata_json(const ExperimentPlan& plan, int workers);

}  // namespace cdlab
