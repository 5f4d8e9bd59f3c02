// gsim: graph similarity search under graph edit distance.
//
//   gsim ingest      --dataset D [--format tud] --out DIR
//   gsim build-index --dataset DIR/database.txt --index vp|cover --out DIR
//   gsim range       --dataset ... --index ... --queries sample:100 --range 1,2,3
//   gsim knn         --dataset ... --knn 1,2,3
//   gsim selftest
//   gsim generate    --graphs 500 --clusters 10 --out DIR

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "gsim/cost_model.hpp"
#include "gsim/graph_io.hpp"
#include "gsim/index_io.hpp"
#include "gsim/query_engine.hpp"
#include "gsim/report.hpp"
#include "gsim/selftest.hpp"
#include "gsim/synthetic.hpp"
#include "gsim/text.hpp"

namespace fs = std::filesystem;
using namespace gsim;

namespace {

struct RunConfig {
  std::string dataset;
  std::string format = "native";
  std::string costs = "uniform";
  std::string index = "none";
  std::string index_file;
  std::size_t sample_size = 5;
  double expansion_rate = 1.2;
  std::uint64_t seed = 0;
  std::string range = "1,2,3,4,5";
  std::string knn = "1,2,3,4,5";
  std::string queries = "sample:100";
  std::uint64_t budget = kDefaultSearchBudget;
  std::string out = ".";
  int workers = 1;
  bool compare = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  for (auto part : split(text, ',')) {
    auto x = parse_double(part);
    if (!x || !(*x >= 0.0)) {
      throw UsageError(std::string(flag) + ": bad value '" + std::string(part) + "'");
    }
    out.push_back(*x);
  }
  return out;
}

void warn(const std::string& msg) { std::cerr << "warning: " << msg << "\n"; }

GraphDatabase load(const RunConfig& cfg) {
  if (cfg.dataset.empty()) throw UsageError("--dataset is required");
  auto db = load_database(cfg.dataset, parse_format(cfg.format), warn);
  if (db.size() == 0) throw std::runtime_error("dataset '" + cfg.dataset + "' holds no graphs");
  // Raw data gets normalized here; ingested files carry their record.
  if (db.normalization.empty()) normalize_attributes(db);
  return db;
}

CostModelPtr costs(const RunConfig& cfg, const GraphDatabase& db) {
  CostConfig cc = fs::is_regular_file(cfg.costs) ? load_cost_config(cfg.costs)
                                                  : parse_cost_config("model = " + cfg.costs);
  return make_cost_model(cc, db);
}

// Indices need the triangle inequality; linear scan only loses pseudo-metricity
// of BRANCH, never exactness, so it just warns.
void check_metricity(const CostModel& m, const GraphDatabase& db, bool indexing) {
  const auto rep = validate_metricity(m, db, 20000);
  if (rep.ok()) return;
  const auto& v = rep.violations.front();
  std::ostringstream msg;
  msg << "cost model is not metric (" << rep.violations.size() << " violations, first: "
      << to_string(v.rule) << (v.on_edges ? " on edges" : " on vertices") << ", "
      << format_double(v.lhs) << " > " << format_double(v.rhs) << ")";
  if (indexing) throw std::runtime_error(msg.str() + "; refusing to build a metric index");
  warn(msg.str());
}

std::vector<std::pair<std::int64_t, Graph>> queries(const RunConfig& cfg, GraphDatabase& db) {
  std::vector<std::pair<std::int64_t, Graph>> out;
  if (cfg.queries.rfind("sample:", 0) == 0) {
    auto n = parse_int<std::size_t>(cfg.queries.substr(7));
    if (!n || *n == 0) throw UsageError("--queries: bad sample size");
    for (auto& g : sample_queries(db, *n, cfg.seed)) out.emplace_back(g.id(), std::move(g));
  } else {
    std::int64_t i = 0;
    for (auto& g : load_queries(cfg.queries, db)) out.emplace_back(i++, std::move(g));
  }
  if (out.empty()) throw std::runtime_error("no queries");
  return out;
}

IndexOptions index_options(const RunConfig& cfg) {
  IndexOptions o;
  o.kind = parse_index_kind(cfg.index);
  o.sample_size = cfg.sample_size;
  o.expansion_rate = cfg.expansion_rate;
  o.seed = cfg.seed;
  return o;
}

int cmd_generate(const RunConfig& cfg, SyntheticOptions o) {
  o.seed = cfg.seed;
  const auto db = synthetic_database(o);
  fs::create_directories(cfg.out);
  const auto path = fs::path(cfg.out) / "database.txt";
  write_native(path, db);
  const auto s = stats(db);
  std::cout << s.graphs << " graphs written to " << path.string() << "\n";
  return 0;
}

int cmd_ingest(const RunConfig& cfg) {
  const auto db = load(cfg);
  fs::create_directories(cfg.out);
  write_native(fs::path(cfg.out) / "database.txt", db);
  const auto s = stats(db);
  std::cout << s.graphs << " graphs, avg |V| " << std::fixed << std::setprecision(2)
            << s.mean_vertices << ", avg |E| " << s.mean_edges << "\n";
  return 0;
}

int cmd_build_index(const RunConfig& cfg) {
  const auto opts = index_options(cfg);
  if (opts.kind == IndexKind::kNone) throw UsageError("build-index needs --index vp|cover");
  const auto db = load(cfg);
  const auto m = costs(cfg, db);
  check_metricity(*m, db, true);
  auto space = branch_space(db, *m);
  const auto t0 = std::chrono::steady_clock::now();
  const auto index = build_index(space, opts);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;
  fs::create_directories(cfg.out);
  const fs::path path = cfg.index_file.empty() ? fs::path(cfg.out) / "index.txt"
                                               : fs::path(cfg.index_file);
  save_index(path, *index, cfg.seed, fingerprint(db, *m));
  std::cout << to_string(opts.kind) << " index over " << db.size() << " graphs: "
            << index->build_evaluations() << " distance evaluations, " << std::fixed
            << std::setprecision(3) << elapsed.count() << " s -> " << path.string() << "\n";
  return 0;
}

bool same_ids(const QueryReport& a, const QueryReport& b) {
  if (a.results.size() != b.results.size()) return false;
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    if (a.results[i].id != b.results[i].id) return false;
  }
  return true;
}

int cmd_query(const RunConfig& cfg, QueryMode mode) {
  const std::vector<double> params =
      mode == QueryMode::kRange ? parse_list(cfg.range, "--range") : parse_list(cfg.knn, "--knn");
  auto db = load(cfg);
  const auto m = costs(cfg, db);
  const auto opts = index_options(cfg);
  check_metricity(*m, db, opts.kind != IndexKind::kNone);
  if (mode == QueryMode::kKnn) {
    for (double k : params) {
      if (k < 1 || k != std::floor(k) || k > db.size()) {
        throw UsageError("--knn: k must be an integer in [1, " + std::to_string(db.size()) + "]");
      }
    }
  }
  const auto qs = queries(cfg, db);

  std::unique_ptr<MetricIndex> index;
  if (opts.kind != IndexKind::kNone) {
    if (!cfg.index_file.empty()) {
      index = load_index(fs::path(cfg.index_file), fingerprint(db, *m), db.size());
      if (index->kind() != opts.kind) throw UsageError("--index does not match --index-file");
    } else {
      auto space = branch_space(db, *m);
      index = build_index(space, opts);
    }
  }
  const EngineConfig ec{cfg.budget, cfg.workers};
  const QueryEngine engine(db, *m, index.get(), ec);
  const QueryEngine scan(db, *m, nullptr, ec);

  fs::create_directories(cfg.out);
  const std::string stem = to_string(mode);
  std::ofstream jsonl(fs::path(cfg.out) / (stem + "_reports.jsonl"));
  std::ofstream csv(fs::path(cfg.out) / (stem + "_summary.csv"));
  if (!jsonl || !csv) throw std::runtime_error("cannot write reports to " + cfg.out);
  write_csv_header(csv);

  struct Totals {
    double candidates = 0, results = 0, evaluations = 0, exact = 0;
  };
  std::map<double, Totals> totals;
  std::size_t mismatches = 0, partial = 0;
  for (double p : params) {
    for (const auto& [qid, q] : qs) {
      const auto rep = mode == QueryMode::kRange
                           ? engine.range(q, p, qid)
                           : engine.knn(q, static_cast<std::size_t>(p), qid);
      if (cfg.compare && index) {
        const auto base = mode == QueryMode::kRange
                              ? scan.range(q, p, qid)
                              : scan.knn(q, static_cast<std::size_t>(p), qid);
        if (!same_ids(base, rep)) ++mismatches;
      }
      jsonl << report_json(rep) << "\n";
      write_csv_row(csv, rep);
      auto& t = totals[p];
      t.candidates += rep.lb_candidates;
      t.results += rep.result_size;
      t.evaluations += rep.branch_evaluations;
      t.exact += rep.exact_ged_calls;
      partial += rep.partial ? 1 : 0;
    }
  }
  const double n = static_cast<double>(qs.size());
  std::cout << std::fixed << std::setprecision(2);
  for (const auto& [p, t] : totals) {
    std::cout << (mode == QueryMode::kRange ? "r=" : "k=") << format_double(p)
              << ": avg candidates " << t.candidates / n << ", avg results " << t.results / n
              << ", avg BRANCH evaluations " << t.evaluations / n << " of " << db.size()
              << ", avg exact searches " << t.exact / n << "\n";
  }
  if (partial) std::cout << partial << " reports are partial (search budget exhausted)\n";
  if (cfg.compare && index) {
    std::cout << "comparison against linear scan: " << mismatches << " mismatching queries\n";
    if (mismatches) return 1;
  }
  return 0;
}

void dataset_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--dataset", cfg.dataset, "dataset path (native file, TUD dir or prefix)")
      ->required();
  sub->add_option("--format", cfg.format, "native | tud")->check(CLI::IsMember({"native", "tud"}));
}

void query_flags(CLI::App* sub, RunConfig& cfg) {
  dataset_flags(sub, cfg);
  sub->add_option("--costs", cfg.costs, "cost config file, or uniform | euclidean | mixed");
  sub->add_option("--index", cfg.index, "none | vp | cover")
      ->check(CLI::IsMember({"none", "vp", "cover"}));
  sub->add_option("--index-file", cfg.index_file, "persisted index");
  sub->add_option("--sample-size", cfg.sample_size, "vp-tree vantage candidates per node")
      ->check(CLI::PositiveNumber);
  sub->add_option("--expansion-rate", cfg.expansion_rate, "cover tree base")
      ->check(CLI::Range(1.0 + 1e-9, 1e9));
  sub->add_option("--seed", cfg.seed);
  sub->add_option("--budget", cfg.budget, "search nodes per exact verification")
      ->check(CLI::PositiveNumber);
  sub->add_option("--out", cfg.out, "output directory");
  sub->add_option("--workers", cfg.workers, "threads for per-candidate work")
      ->check(CLI::Range(1, 1024));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph similarity search under graph edit distance"};
  app.require_subcommand(1);
  RunConfig cfg;
  SyntheticOptions synth;

  auto* generate = app.add_subcommand("generate", "write a seeded synthetic database");
  generate->add_option("--graphs", synth.graphs)->check(CLI::PositiveNumber);
  generate->add_option("--min-vertices", synth.min_vertices)->check(CLI::Range(1, 1000));
  generate->add_option("--max-vertices", synth.max_vertices)->check(CLI::Range(1, 1000));
  generate->add_option("--symbols", synth.symbols, "categorical labels, 0 for none");
  generate->add_option("--vertex-dim", synth.vertex_dim, "vertex attribute dimensions");
  generate->add_option("--clusters", synth.clusters, "0 for independent random graphs");
  generate->add_option("--seed", cfg.seed);
  generate->add_option("--out", cfg.out);

  auto* ingest = app.add_subcommand("ingest", "load, normalize and store a dataset");
  dataset_flags(ingest, cfg);
  ingest->add_option("--out", cfg.out);

  auto* build = app.add_subcommand("build-index", "build and persist a metric index");
  query_flags(build, cfg);

  auto* range = app.add_subcommand("range", "range queries");
  query_flags(range, cfg);
  range->add_option("--queries", cfg.queries, "query file or sample:<n>");
  range->add_option("--range", cfg.range, "comma-separated thresholds");
  range->add_flag("--compare", cfg.compare, "also run linear scan and compare result sets");

  auto* knn = app.add_subcommand("knn", "k-nearest-neighbor queries");
  query_flags(knn, cfg);
  knn->add_option("--queries", cfg.queries, "query file or sample:<n>");
  knn->add_option("--knn", cfg.knn, "comma-separated k values");
  knn->add_flag("--compare", cfg.compare, "also run linear scan and compare result sets");

  auto* selftest = app.add_subcommand("selftest", "run the oracle suites on synthetic data");
  selftest->add_option("--seed", cfg.seed);

  CLI11_PARSE(app, argc, argv);
  try {
    if (synth.min_vertices > synth.max_vertices) throw UsageError("--min-vertices > --max-vertices");
    if (*generate) return cmd_generate(cfg, synth);
    if (*ingest) return cmd_ingest(cfg);
    if (*build) return cmd_build_index(cfg);
    if (*range) return cmd_query(cfg, QueryMode::kRange);
    if (*knn) return cmd_query(cfg, QueryMode::kKnn);
    if (*selftest) return run_selftest(std::cout, cfg.seed) == 0 ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
