#include "cdlab/experiment.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace cdlab {

std::string to_string(Design d) { return d == Design::sim1 ? "SIM1" : "SIM2"; }

// ---------------------------------------------------------------- plan

void ExperimentPlan::validate() const {
  if (fixtures.empty()) throw std::invalid_argument("plan has no fixtures");
  std::set<std::string> ids;
  for (const Fixture& f : fixtures) {
    if (f.id.empty() || f.id.find_first_of(",\"\n\r") != std::string::npos) {
      throw std::invalid_argument("fixture id '" + f.id + "' must be nonempty without commas or quotes");
    }
    if (!ids.insert(f.id).second) throw std::invalid_argument("duplicate fixture id '" + f.id + "'");
  }
  if (sample_sizes.empty() || bin_conditions.empty() || lambdas.empty()) {
    throw std::invalid_argument("sample_sizes, bin_conditions and lambdas must be nonempty");
  }
  for (int n : sample_sizes) {
    if (n < 2) throw std::invalid_argument("sample sizes must be at least 2");
  }
  for (double l : lambdas) {
    if (!(l > 0.0) || !std::isfinite(l)) throw std::invalid_argument("lambdas must be positive");
  }
  if (replicates < 1) throw std::invalid_argument("replicates must be positive");
  if (max_parents && *max_parents < 1) throw std::invalid_argument("max_parents must be positive");
}

std::optional<int> ExperimentPlan::max_parents_for(const Fixture& f) const {
  if (max_parents) return max_parents;
  if (f.dag.node_count() >= 20) return 8;
  return std::nullopt;
}

std::size_t ExperimentPlan::expected_rows() const {
  return fixtures.size() * sample_sizes.size() * bin_conditions.size() * lambdas.size() *
         static_cast<std::size_t>(replicates);
}

ExperimentPlan ExperimentPlan::desk_scale(std::uint64_t seed) {
  ExperimentPlan plan;
  for (const std::string& id : table_fixture_ids(false)) plan.fixtures.push_back(table_fixture(id));
  plan.master_seed = seed;
  return plan;
}

ExperimentPlan ExperimentPlan::full_scale(std::uint64_t seed) {
  ExperimentPlan plan;
  for (const std::string& id : table_fixture_ids(true)) plan.fixtures.push_back(table_fixture(id));
  plan.replicates = 200;
  plan.master_seed = seed;
  return plan;
}

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw std::invalid_argument("unknown key '" + key + "' in " + where);
  }
}

Fixture parse_fixture(const json& j) {
  if (j.is_string()) return table_fixture(j.get<std::string>());
  if (!j.is_object()) throw std::invalid_argument("fixture must be a name or an object");
  if (!j.contains("id")) throw std::invalid_argument("fixture object needs an 'id'");
  const std::string id = j.at("id").get<std::string>();
  if (j.contains("graph_file")) {
    reject_unknown(j, {"id", "graph_file"}, "fixture '" + id + "'");
    ParsedGraph g = read_graph_file(j.at("graph_file").get<std::string>());
    if (!g.dag) throw std::invalid_argument("fixture '" + id + "' graph_file must hold a weighted DAG");
    return {id, *g.dag};
  }
  reject_unknown(j, {"id", "nodes", "edge_prob", "target_edge_count", "seed"}, "fixture '" + id + "'");
  DagSpec spec;
  spec.node_count = j.at("nodes").get<int>();
  spec.edge_prob = j.at("edge_prob").get<double>();
  if (j.contains("target_edge_count")) spec.target_edge_count = j.at("target_edge_count").get<int>();
  spec.seed = j.at("seed").get<std::uint64_t>();
  Dag structure = random_dag(spec);
  Rng rng(derive_seed(spec.seed, {string_key("weights")}));
  return {id, assign_weights(std::move(structure), rng)};
}

BinSpec parse_bin(const json& j) {
  if (j.is_string()) return BinSpec::parse(j.get<std::string>());
  if (j.is_number_integer()) return BinSpec::bins(j.get<int>());
  throw std::invalid_argument("bin condition must be \"continuous\" or an integer");
}

}  // namespace

ExperimentPlan parse_plan_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("plan is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("plan must be a JSON object");
  reject_unknown(j,
                 {"design", "dag_fixtures", "sample_sizes", "bin_conditions", "lambdas", "replicates",
                  "master_seed", "max_parents"},
                 "plan");
  ExperimentPlan plan = ExperimentPlan::desk_scale(ExperimentPlan{}.master_seed);
  try {
    if (j.contains("design")) {
      const std::string d = j.at("design").get<std::string>();
      if (d == "SIM1") {
        plan.design = Design::sim1;
      } else if (d == "SIM2") {
        plan.design = Design::sim2;
      } else {
        throw std::invalid_argument("design must be SIM1 or SIM2");
      }
    }
    if (j.contains("dag_fixtures")) {
      plan.fixtures.clear();
      for (const json& f : j.at("dag_fixtures")) plan.fixtures.push_back(parse_fixture(f));
    }
    if (j.contains("sample_sizes")) plan.sample_sizes = j.at("sample_sizes").get<std::vector<int>>();
    if (j.contains("bin_conditions")) {
      plan.bin_conditions.clear();
      for (const json& b : j.at("bin_conditions")) plan.bin_conditions.push_back(parse_bin(b));
    }
    if (j.contains("lambdas")) plan.lambdas = j.at("lambdas").get<std::vector<double>>();
    if (j.contains("replicates")) plan.replicates = j.at("replicates").get<int>();
    if (j.contains("master_seed")) plan.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("max_parents")) plan.max_parents = j.at("max_parents").get<int>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad plan field: ") + e.what());
  }
  plan.validate();
  return plan;
}

// ---------------------------------------------------------------- running

namespace {

struct Task {
  std::size_t fixture = 0;
  int replicate = 0;
};

struct RowKey {
  std::size_t fixture;
  int n_index;
  int replicate;
  int bin_index;
  int lambda_index;
  auto operator<=>(const RowKey&) const = default;
};

struct KeyedRow {
  RowKey key;
  ResultRow row;
};

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) {
    if (!out.empty()) out += ';';
    out += f;
  }
  return out;
}

void evaluate_draw(const ExperimentPlan& plan, const Fixture& gold, std::size_t fixture_index,
                   int n_index, int replicate, const Dataset& continuous, std::uint64_t seed,
                   std::vector<KeyedRow>& out) {
  const std::uint64_t hash = content_hash(continuous);
  const Pdag gold_cpdag = dag_to_cpdag(gold.dag);
  for (std::size_t b = 0; b < plan.bin_conditions.size(); ++b) {
    const Dataset data = bin_equal_width(continuous, plan.bin_conditions[b]);
    for (std::size_t l = 0; l < plan.lambdas.size(); ++l) {
      SearchConfig cfg;
      cfg.score.lambda = plan.lambdas[l];
      cfg.max_parents = plan.max_parents_for(gold);
      std::vector<std::string> flags;
      const auto start = std::chrono::steady_clock::now();
      Pdag found(gold.dag.node_count());
      double final_score = 0.0;
      try {
        const BicScorer scorer(data, cfg.score);
        SearchResult res = ges(scorer, cfg);
        found = std::move(res.graph);
        final_score = res.final_score;
        if (res.variance_floor_hit) flags.emplace_back("variance_floor");
      } catch (const std::exception&) {
        flags.emplace_back("search_failed");
      }
      const auto stop = std::chrono::steady_clock::now();
      const MetricsReport m = adjacency_metrics(found, gold_cpdag);
      if (m.degenerate) flags.insert(flags.begin(), "degenerate");

      ResultRow row;
      row.dag_id = gold.id;
      row.replicate = replicate;
      row.n = plan.sample_sizes[n_index];
      row.bins = plan.bin_conditions[b];
      row.lambda = plan.lambdas[l];
      row.shd = m.shd;
      row.tpr = m.tpr;
      row.fpr = m.fpr;
      row.tdr = m.tdr;
      row.f1 = m.f1;
      row.final_score = final_score;
      row.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
      row.seed = seed;
      row.data_hash = hash;
      row.flags = join_flags(flags);
      out.push_back({{fixture_index, n_index, replicate, static_cast<int>(b), static_cast<int>(l)},
                     std::move(row)});
    }
  }
}

std::vector<KeyedRow> run_task(const ExperimentPlan& plan, const Task& t) {
  const Fixture& fixture = plan.fixtures[t.fixture];
  const std::uint64_t fixture_key = string_key(fixture.id);
  Fixture gold = fixture;
  if (plan.design == Design::sim2) {
    Rng weight_rng(derive_seed(plan.master_seed, {string_key("SIM2-weights"), fixture_key,
                                                  static_cast<std::uint64_t>(t.replicate)}));
    gold.dag = assign_weights(fixture.dag, weight_rng);
  }
  std::vector<KeyedRow> out;
  for (std::size_t ni = 0; ni < plan.sample_sizes.size(); ++ni) {
    const int n = plan.sample_sizes[ni];
    const std::uint64_t seed =
        derive_seed(plan.master_seed, {string_key(to_string(plan.design)), fixture_key,
                                       static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(t.replicate)});
    Rng rng(seed);
    const Dataset continuous = sample_data(gold.dag, n, rng);
    evaluate_draw(plan, gold, t.fixture, static_cast<int>(ni), t.replicate, continuous, seed, out);
  }
  return out;
}

std::vector<ResultRow> run_plan(const ExperimentPlan& plan, int workers) {
  plan.validate();
  std::vector<Task> tasks;
  for (std::size_t f = 0; f < plan.fixtures.size(); ++f) {
    for (int r = 0; r < plan.replicates; ++r) tasks.push_back({f, r});
  }
  std::vector<std::vector<KeyedRow>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) results[i] = run_task(plan, tasks[i]);
  };
  const int pool = std::max(1, std::min<int>(workers, static_cast<int>(tasks.size())));
  if (pool == 1) {
    work();
  } else {
    std::vector<std::jthread> threads;
    for (int w = 0; w < pool; ++w) threads.emplace_back(work);
  }

  std::vector<KeyedRow> all;
  for (auto& part : results) {
    for (auto& r : part) all.push_back(std::move(r));
  }
  std::sort(all.begin(), all.end(), [](const KeyedRow& a, const KeyedRow& b) { return a.key < b.key; });
  std::vector<ResultRow> rows;
  rows.reserve(all.size());
  for (auto& r : all) rows.push_back(std::move(r.row));
  return rows;
}

}  // namespace

std::vector<ResultRow> run_sim1(const ExperimentPlan& plan, int workers) {
  if (plan.design != Design::sim1) throw std::invalid_argument("run_sim1 needs a SIM1 plan");
  return run_plan(plan, workers);
}

std::vector<ResultRow> run_sim2(const ExperimentPlan& plan, int workers) {
  if (plan.design != Design::sim2) throw std::invalid_argument("run_sim2 needs a SIM2 plan");
  return run_plan(plan, workers);
}

std::vector<ResultRow> run_experiment(const ExperimentPlan& plan, int workers) {
  return plan.design == Design::sim1 ? run_sim1(plan, workers) : run_sim2(plan, workers);
}

// ---------------------------------------------------------------- CSV

namespace {

std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::vector<std::string>> parse_csv_records(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
      }
      record.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quoted CSV field");
  if (any || !field.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

const char* kResultHeader = "dag_id,replicate,n,bins,lambda,shd,tpr,fpr,tdr,f1,final_score,seed,data_hash,flags";

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

}  // namespace

std::string format_results_csv(const std::vector<ResultRow>& rows) {
  std::string out = std::string(kResultHeader) + "\n";
  for (const ResultRow& r : rows) {
    out += csv_field(r.dag_id) + ',' + std::to_string(r.replicate) + ',' + std::to_string(r.n) + ',' +
           r.bins.to_string() + ',' + num17(r.lambda) + ',' + std::to_string(r.shd) + ',' + num17(r.tpr) +
           ',' + num17(r.fpr) + ',' + num17(r.tdr) + ',' + num17(r.f1) + ',' + num17(r.final_score) +
           ',' + std::to_string(r.seed) + ',' + hex64(r.data_hash) + ',' + csv_field(r.flags) + '\n';
  }
  return out;
}

std::vector<ResultRow> parse_results_csv(const std::string& text) {
  const auto records = parse_csv_records(text);
  if (records.empty()) throw std::invalid_argument("results CSV is empty");
  std::string header;
  for (std::size_t i = 0; i < records[0].size(); ++i) header += (i ? "," : "") + records[0][i];
  if (header != kResultHeader) throw std::invalid_argument("unexpected results CSV header");
  std::vector<ResultRow> rows;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& f = records[i];
    if (f.size() != 14) throw std::invalid_argument("results row " + std::to_string(i) + " has wrong arity");
    ResultRow r;
    r.dag_id = f[0];
    r.replicate = std::stoi(f[1]);
    r.n = std::stoi(f[2]);
    r.bins = BinSpec::parse(f[3]);
    r.lambda = to_double(f[4]);
    r.shd = std::stoi(f[5]);
    r.tpr = to_double(f[6]);
    r.fpr = to_double(f[7]);
    r.tdr = to_double(f[8]);
    r.f1 = to_double(f[9]);
    r.final_score = to_double(f[10]);
    r.seed = std::stoull(f[11]);
    r.data_hash = std::stoull(f[12], nullptr, 16);
    r.flags = f[13];
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string format_runtimes_csv(const std::vector<ResultRow>& rows) {
  std::string out = "dag_id,replicate,n,bins,lambda,runtime_ms\n";
  for (const ResultRow& r : rows) {
    out += csv_field(r.dag_id) + ',' + std::to_string(r.replicate) + ',' + std::to_string(r.n) + ',' +
           r.bins.to_string() + ',' + num17(r.lambda) + ',' + num6(r.runtime_ms) + '\n';
  }
  return out;
}

// ---------------------------------------------------------------- summaries

namespace {

std::string group_value(const ResultRow& r, const std::string& field) {
  if (field == "dag_id") return r.dag_id;
  if (field == "replicate") return std::to_string(r.replicate);
  if (field == "n") return std::to_string(r.n);
  if (field == "bins") return r.bins.to_string();
  if (field == "lambda") return num6(r.lambda);
  throw std::invalid_argument("unknown group field '" + field + "'");
}

std::array<double, 5> metric_values(const ResultRow& r) {
  return {static_cast<double>(r.shd), r.tpr, r.fpr, r.tdr, r.f1};
}

}  // namespace

SummaryTable aggregate(const std::vector<ResultRow>& rows, const std::vector<std::string>& group_by) {
  if (rows.empty()) throw std::invalid_argument("aggregate needs at least one row");
  for (const auto& f : group_by) group_value(rows.front(), f);

  SummaryTable table{group_by, {}};
  std::map<std::vector<std::string>, std::size_t> index;
  std::vector<std::vector<std::array<double, 5>>> samples;
  for (const ResultRow& r : rows) {
    std::vector<std::string> key;
    for (const auto& f : group_by) key.push_back(group_value(r, f));
    auto [it, inserted] = index.try_emplace(key, table.rows.size());
    if (inserted) {
      table.rows.push_back({key, 0, {}, {}});
      samples.emplace_back();
    }
    samples[it->second].push_back(metric_values(r));
  }
  for (std::size_t g = 0; g < table.rows.size(); ++g) {
    SummaryRow& s = table.rows[g];
    const auto& xs = samples[g];
    s.count = static_cast<int>(xs.size());
    for (std::size_t m = 0; m < kSummaryMetrics.size(); ++m) {
      double sum = 0.0;
      for (const auto& x : xs) sum += x[m];
      const double mean = sum / s.count;
      double ss = 0.0;
      for (const auto& x : xs) ss += (x[m] - mean) * (x[m] - mean);
      s.mean[m] = mean;
      s.sd[m] = s.count > 1 ? std::sqrt(ss / (s.count - 1)) : 0.0;
    }
  }
  return table;
}

std::string format_summary_csv(const SummaryTable& table) {
  std::string out;
  for (const auto& f : table.group_by) out += f + ',';
  out += "count";
  for (const char* m : kSummaryMetrics) out += std::string(",") + m + "_mean," + m + "_sd";
  out += '\n';
  for (const SummaryRow& r : table.rows) {
    for (const auto& g : r.group) out += csv_field(g) + ',';
    out += std::to_string(r.count);
    for (std::size_t m = 0; m < kSummaryMetrics.size(); ++m) out += ',' + num6(r.mean[m]) + ',' + num6(r.sd[m]);
    out += '\n';
  }
  return out;
}

SummaryTable parse_summary_csv(const std::string& text) {
  const auto records = parse_csv_records(text);
  if (records.empty()) throw std::invalid_argument("summary CSV is empty");
  const auto& header = records[0];
  const std::size_t metric_cols = 1 + 2 * kSummaryMetrics.size();
  if (header.size() < metric_cols) throw std::invalid_argument("summary CSV header too short");
  const std::size_t groups = header.size() - metric_cols;
  if (header[groups] != "count") throw std::invalid_argument("summary CSV header lacks 'count'");
  SummaryTable table;
  table.group_by.assign(header.begin(), header.begin() + static_cast<std::ptrdiff_t>(groups));
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& f = records[i];
    if (f.size() != header.size()) throw std::invalid_argument("summary row has wrong arity");
    SummaryRow r;
    r.group.assign(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(groups));
    r.count = std::stoi(f[groups]);
    for (std::size_t m = 0; m < kSummaryMetrics.size(); ++m) {
      r.mean[m] = to_double(f[groups + 1 + 2 * m]);
      r.sd[m] = to_double(f[groups + 2 + 2 * m]);
    }
    table.rows.push_back(std::move(r));
  }
  return table;
}

std::string render_svg(const SummaryTable& table, const std::string& metric) {
  const auto mit = std::find_if(kSummaryMetrics.begin(), kSummaryMetrics.end(),
                                [&](const char* m) { return metric == m; });
  if (mit == kSummaryMetrics.end()) throw std::invalid_argument("unknown metric '" + metric + "'");
  const std::size_t m = static_cast<std::size_t>(mit - kSummaryMetrics.begin());
  const auto bins_it = std::find(table.group_by.begin(), table.group_by.end(), "bins");
  const std::ptrdiff_t bins_col = bins_it == table.group_by.end() ? -1 : bins_it - table.group_by.begin();

  // x positions: bin conditions in order of first appearance.
  std::vector<std::string> xs;
  std::vector<std::string> series_names;
  std::map<std::string, std::vector<std::pair<std::size_t, double>>> series;
  for (const SummaryRow& r : table.rows) {
    const std::string x = bins_col >= 0 ? r.group[bins_col] : "all";
    auto xi = std::find(xs.begin(), xs.end(), x);
    if (xi == xs.end()) xi = xs.insert(xs.end(), x);
    std::string name;
    for (std::size_t g = 0; g < r.group.size(); ++g) {
      if (static_cast<std::ptrdiff_t>(g) == bins_col) continue;
      name += (name.empty() ? "" : " ") + table.group_by[g] + "=" + r.group[g];
    }
    if (name.empty()) name = metric;
    if (!series.count(name)) series_names.push_back(name);
    series[name].push_back({static_cast<std::size_t>(xi - xs.begin()), r.mean[m]});
  }

  double lo = 0.0, hi = 1.0;
  for (const SummaryRow& r : table.rows) hi = std::max(hi, r.mean[m]);
  const double width = 640, height = 400, left = 60, right = 160, top = 30, bottom = 50;
  const double plot_w = width - left - right, plot_h = height - top - bottom;
  auto px = [&](std::size_t i) { return left + (xs.size() > 1 ? plot_w * i / (xs.size() - 1) : plot_w / 2); };
  auto py = [&](double v) { return top + plot_h * (1.0 - (v - lo) / (hi - lo)); };
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  svg << "<text x=\"" << left << "\" y=\"18\" font-size=\"14\">" << metric << " by bin condition</text>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
      << top + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
      << "\" stroke=\"black\"/>\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    svg << "<text x=\"" << px(i) << "\" y=\"" << top + plot_h + 20 << "\" font-size=\"11\" text-anchor=\"middle\">"
        << xs[i] << "</text>\n";
  }
  for (int t = 0; t <= 4; ++t) {
    const double v = lo + (hi - lo) * t / 4.0;
    svg << "<text x=\"" << left - 6 << "\" y=\"" << py(v) + 4 << "\" font-size=\"11\" text-anchor=\"end\">"
        << num6(v) << "</text>\n";
  }
  for (std::size_t s = 0; s < series_names.size(); ++s) {
    const auto& pts = series[series_names[s]];
    const char* color = palette[s % 10];
    svg << "<polyline class=\"series\" fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (std::size_t k = 0; k < pts.size(); ++k) svg << (k ? " " : "") << px(pts[k].first) << "," << py(pts[k].second);
    svg << "\"/>\n";
    svg << "<text x=\"" << left + plot_w + 10 << "\" y=\"" << top + 16 * (s + 1) << "\" font-size=\"11\" fill=\""
        << color << "\">" << series_names[s] << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string plan_metadata_json(const ExperimentPlan& plan, int workers) {
  const ScoreConfig score;
  const SearchConfig search;
  nlohmann::ordered_json j;
  j["design"] = to_string(plan.design);
  j["master_seed"] = plan.master_seed;
  j["replicates"] = plan.replicates;
  j["workers"] = workers;
  j["variance_floor"] = score.variance_floor;
  j["tie_epsilon"] = score.tie_epsilon;
  j["phase_loop"] = search.phase_loop;
  std::vector<std::string> phases;
  for (Phase p : search.phases) phases.push_back(to_string(p));
  j["phases"] = phases;
  nlohmann::ordered_json fixtures = nlohmann::ordered_json::array();
  for (const Fixture& f : plan.fixtures) {
    nlohmann::ordered_json fj;
    fj["id"] = f.id;
    fj["nodes"] = f.dag.node_count();
    fj["edges"] = f.dag.edge_count();
    const auto mp = plan.max_parents_for(f);
    fj["max_parents"] = mp ? nlohmann::ordered_json(*mp) : nlohmann::ordered_json(nullptr);
    fj["graph"] = format_graph(f.dag);
    fixtures.push_back(fj);
  }
  j["fixtures"] = fixtures;
  return j.dump(2) + "\n";
}

}  // namespace cdlab
