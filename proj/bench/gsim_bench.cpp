// Serial reference kernels against their OpenMP versions, plus index build
// and query costs. Thread counts above the core count only measure overhead.

#include <benchmark/benchmark.h>

#include <random>

#include "gsim/assignment.hpp"
#include "gsim/index_io.hpp"
#include "gsim/kernels.hpp"
#include "gsim/query_engine.hpp"
#include "gsim/synthetic.hpp"

using namespace gsim;

namespace {

const UniformCostModel uniform;

const GraphDatabase& database() {
  static const GraphDatabase db = [] {
    SyntheticOptions o;
    o.graphs = 500;
    o.clusters = 10;
    o.seed = 1;
    return synthetic_database(o);
  }();
  return db;
}

void BM_BranchScanSerial(benchmark::State& state) {
  const auto& db = database();
  for (auto _ : state) benchmark::DoNotOptimize(branch_scan_serial(db[0], db.graphs, uniform));
  state.SetItemsProcessed(state.iterations() * db.size());
}
BENCHMARK(BM_BranchScanSerial)->Unit(benchmark::kMillisecond);

void BM_BranchScanOmp(benchmark::State& state) {
  const auto& db = database();
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(branch_scan_omp(db[0], db.graphs, uniform, workers));
  }
  state.SetItemsProcessed(state.iterations() * db.size());
}
BENCHMARK(BM_BranchScanOmp)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

struct SettleInput {
  std::vector<BoundResult> bounds;
  std::vector<Candidate> candidates;
};

const SettleInput& settle_input() {
  static const SettleInput in = [] {
    SettleInput s;
    const auto& db = database();
    s.bounds = branch_scan_serial(db[0], db.graphs, uniform);
    for (std::size_t i = 0; i < db.size(); ++i) {
      if (s.bounds[i].value <= 3.0) s.candidates.push_back({&db.graphs[i], &s.bounds[i]});
    }
    return s;
  }();
  return in;
}

void BM_SettleSerial(benchmark::State& state) {
  const auto& in = settle_input();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        settle_candidates_serial(database()[0], in.candidates, uniform, 3.0, kDefaultSearchBudget));
  }
  state.SetItemsProcessed(state.iterations() * in.candidates.size());
}
BENCHMARK(BM_SettleSerial)->Unit(benchmark::kMillisecond);

void BM_SettleOmp(benchmark::State& state) {
  const auto& in = settle_input();
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(settle_candidates_omp(database()[0], in.candidates, uniform, 3.0,
                                                   kDefaultSearchBudget, workers));
  }
  state.SetItemsProcessed(state.iterations() * in.candidates.size());
}
BENCHMARK(BM_SettleOmp)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_IndexBuild(benchmark::State& state) {
  const auto& db = database();
  IndexOptions o;
  o.kind = static_cast<IndexKind>(state.range(0));
  for (auto _ : state) {
    MetricSpace space = branch_space(db, uniform);
    benchmark::DoNotOptimize(build_index(space, o));
  }
}
BENCHMARK(BM_IndexBuild)
    ->Arg(static_cast<int>(IndexKind::kVpTree))
    ->Arg(static_cast<int>(IndexKind::kCoverTree))
    ->Unit(benchmark::kMillisecond);

void BM_RangeQuery(benchmark::State& state) {
  const auto& db = database();
  const auto kind = static_cast<IndexKind>(state.range(0));
  MetricSpace space = branch_space(db, uniform);
  IndexOptions o;
  o.kind = kind;
  const auto index = kind == IndexKind::kNone ? nullptr : build_index(space, o);
  const QueryEngine engine(db, uniform, index.get());
  const auto queries = sample_queries(db, 20, 2);
  std::uint64_t evaluations = 0;
  for (auto _ : state) {
    for (const auto& q : queries) evaluations += engine.range(q, 2.0).branch_evaluations;
  }
  state.counters["evaluations/query"] = benchmark::Counter(
      static_cast<double>(evaluations) / (state.iterations() * queries.size()));
}
BENCHMARK(BM_RangeQuery)
    ->Arg(static_cast<int>(IndexKind::kNone))
    ->Arg(static_cast<int>(IndexKind::kVpTree))
    ->Arg(static_cast<int>(IndexKind::kCoverTree))
    ->Unit(benchmark::kMillisecond);

void BM_Hungarian(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> value(0.0, 1.0);
  CostMatrix c(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) c(i, j) = value(rng);
  }
  HungarianSolver solver;
  for (auto _ : state) benchmark::DoNotOptimize(solver.solve(c));
}
BENCHMARK(BM_Hungarian)->RangeMultiplier(2)->Range(8, 128);

}  // namespace

BENCHMARK_MAIN();
