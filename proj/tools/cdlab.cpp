// cdlab: command-line front end for data generation, binning, GES search,
// evaluation and factorial experiments.

#include "cdlab/binning.hpp"
#include "cdlab/experiment.hpp"
#include "cdlab/ges.hpp"
#include "cdlab/metrics.hpp"
#include "cdlab/sem.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace cdlab;

namespace {

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causal discovery lab: GES with lambda-penalized Gaussian BIC on binned SEM data"};
  app.require_subcommand(1);

  // gen-dag
  auto* gen = app.add_subcommand("gen-dag", "Generate a random weighted DAG or a table fixture");
  DagSpec spec;
  int edges = -1;
  WeightRange weights;
  std::string fixture, gen_out;
  gen->add_option("--nodes", spec.node_count, "Number of nodes")->check(CLI::Range(1, kMaxNodes));
  auto* prob_opt =
      gen->add_option("--edge-prob", spec.edge_prob, "Edge probability")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--edges", edges, "Exact edge count (rejection sampling)");
  gen->add_option("--seed", spec.seed, "Random seed");
  gen->add_option("--weight-min", weights.low, "Lower weight bound");
  gen->add_option("--weight-max", weights.high, "Upper weight bound");
  gen->add_option("--fixture", fixture, "Emit a table fixture instead (DAG1..DAG5)");
  gen->add_option("--out", gen_out, "Output graph file (default stdout)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Sample a linear-Gaussian dataset from a weighted DAG");
  std::string sim_graph, sim_out;
  int sim_n = 1000;
  std::uint64_t sim_seed = 0;
  sim->add_option("--graph", sim_graph, "Weighted DAG file")->required();
  sim->add_option("--n", sim_n, "Sample size")->check(CLI::PositiveNumber);
  sim->add_option("--seed", sim_seed, "Random seed");
  sim->add_option("--out", sim_out, "Output CSV (default stdout)");

  // bin
  auto* bin = app.add_subcommand("bin", "Equal-width binning of a dataset");
  std::string bin_in, bin_out, bin_spec;
  bin->add_option("--in", bin_in, "Input CSV")->required();
  bin->add_option("--bins", bin_spec, "Bin count or 'continuous'")->required();
  bin->add_option("--out", bin_out, "Output CSV (default stdout)");

  // search
  auto* search = app.add_subcommand("search", "Run GES on a dataset");
  std::string search_in, search_out, trace_out;
  double lambda = 1.0;
  bool no_turning = false;
  int max_parents = 0;
  search->add_option("--in", search_in, "Input CSV")->required();
  search->add_option("--lambda", lambda, "Penalty multiplier")->check(CLI::PositiveNumber);
  search->add_flag("--no-turning", no_turning, "Skip the turning phase");
  search->add_option("--max-parents", max_parents, "Parent cap")->check(CLI::PositiveNumber);
  search->add_option("--out", search_out, "Output CPDAG file (default stdout)");
  search->add_option("--trace", trace_out, "Trace log file");

  // eval
  auto* ev = app.add_subcommand("eval", "Compare a found graph against a gold graph");
  std::string found_path, gold_path;
  bool header = false;
  ev->add_option("--found", found_path, "Found graph file")->required();
  ev->add_option("--gold", gold_path, "Gold DAG (or CPDAG) file")->required();
  ev->add_flag("--header", header, "Print the CSV header first");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a Sim1/Sim2 factorial experiment");
  std::string plan_path, out_dir = "results";
  std::uint64_t exp_seed = 0;
  int workers = 1;
  bool full_scale = false;
  auto* seed_opt = exp->add_option("--seed", exp_seed, "Master seed (overrides the plan)");
  exp->add_option("--plan", plan_path, "JSON plan file (default: desk-scale plan)");
  exp->add_option("--out-dir", out_dir, "Output directory");
  exp->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  exp->add_flag("--full-scale", full_scale, "Allow 20-node fixtures and default to 200 replicates");

  // report
  auto* rep = app.add_subcommand("report", "Aggregate a results CSV into a summary table and chart");
  std::string results_path, group_by = "dag_id,bins", metric = "f1", report_dir = "report";
  rep->add_option("--results", results_path, "results.csv from experiment")->required();
  rep->add_option("--group-by", group_by, "Comma-separated group fields");
  rep->add_option("--metric", metric, "Metric charted in the SVG");
  rep->add_option("--out-dir", report_dir, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      Dag dag;
      if (!fixture.empty()) {
        dag = table_fixture(fixture).dag;
      } else {
        if (edges >= 0) {
          spec.target_edge_count = edges;
          // Without an explicit probability, aim the draws at the requested count.
          const int pairs = spec.node_count * (spec.node_count - 1) / 2;
          if (prob_opt->count() == 0 && pairs > 0) spec.edge_prob = std::min(1.0, double(edges) / pairs);
        }
        Rng rng(spec.seed);
        dag = random_dag(spec, rng);
        dag = assign_weights(std::move(dag), rng, weights);
      }
      emit(gen_out, format_graph(dag));
    } else if (*sim) {
      const ParsedGraph g = read_graph_file(sim_graph);
      if (!g.dag) throw std::runtime_error("simulate needs a weighted DAG (all edges '->' with [w=...])");
      Rng rng(sim_seed);
      emit(sim_out, format_csv(sample_data(*g.dag, sim_n, rng)));
    } else if (*bin) {
      emit(bin_out, format_csv(bin_equal_width(read_csv_file(bin_in), BinSpec::parse(bin_spec))));
    } else if (*search) {
      SearchConfig cfg;
      cfg.score.lambda = lambda;
      if (no_turning) cfg.phases = {Phase::forward, Phase::backward};
      if (max_parents > 0) cfg.max_parents = max_parents;
      const SearchResult res = ges(read_csv_file(search_in), cfg);
      emit(search_out, format_graph(res.graph));
      if (!trace_out.empty()) write_text_file(trace_out, format_trace(res));
      if (res.variance_floor_hit) std::cerr << "warning: variance floor hit during scoring\n";
    } else if (*ev) {
      const ParsedGraph found = read_graph_file(found_path);
      const ParsedGraph gold = read_graph_file(gold_path);
      // A gold file with undirected edges is already a CPDAG; otherwise it is a DAG.
      MetricsReport m;
      if (!gold.pdag.undirected_edges().empty()) {
        m = adjacency_metrics(found.pdag, gold.pdag);
      } else {
        Dag gold_dag(gold.pdag.node_count());
        for (const Edge& e : gold.pdag.directed_edges()) gold_dag.add_edge(e.from, e.to);
        m = adjacency_metrics(found.pdag, gold_dag);
      }
      if (header) std::cout << metrics_csv_header() << "\n";
      std::cout << metrics_csv_row(m) << "\n";
    } else if (*exp) {
      ExperimentPlan plan = plan_path.empty()
                                ? (full_scale ? ExperimentPlan::full_scale(ExperimentPlan{}.master_seed)
                                              : ExperimentPlan::desk_scale(ExperimentPlan{}.master_seed))
                                : parse_plan_json(slurp(plan_path));
      if (seed_opt->count() > 0) plan.master_seed = exp_seed;
      bool large = false;
      for (const Fixture& f : plan.fixtures) large = large || f.dag.node_count() >= 20;
      if (large && !full_scale) {
        throw std::runtime_error("plan contains 20-node fixtures; pass --full-scale to run them");
      }
      if (full_scale) {
        std::cerr << "warning: full-scale run (" << plan.expected_rows()
                  << " searches); 20-node fixtures dominate the runtime\n";
      }
      fs::create_directories(out_dir);
      const auto rows = run_experiment(plan, workers);
      write_text_file((fs::path(out_dir) / "results.csv").string(), format_results_csv(rows));
      write_text_file((fs::path(out_dir) / "runtimes.csv").string(), format_runtimes_csv(rows));
      write_text_file((fs::path(out_dir) / "metadata.json").string(), plan_metadata_json(plan, workers));
      std::cerr << rows.size() << " rows written to " << out_dir << "\n";
    } else if (*rep) {
      const auto rows = parse_results_csv(slurp(results_path));
      const SummaryTable table = aggregate(rows, split_commas(group_by));
      fs::create_directories(report_dir);
      write_text_file((fs::path(report_dir) / "summary.csv").string(), format_summary_csv(table));
      write_text_file((fs::path(report_dir) / (metric + ".svg")).string(), render_svg(table, metric));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
