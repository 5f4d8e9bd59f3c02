#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gsim/cost_model.hpp"
#include "gsim/exact_ged.hpp"
#include "gsim/graph.hpp"
#include "gsim/kernels.hpp"
#include "gsim/metric_space.hpp"

namespace gsim {

// Pairwise BRANCH distances over the database, for building indices.
MetricSpace branch_space(const GraphDatabase& db, const CostModel& m);

enum class QueryMode { kRange, kKnn };

const char* to_string(QueryMode mode);

struct ResultItem {
  GraphId id = 0;
  std::optional<double> distance;  // absent when accepted by a loose upper bound
  Stage stage = Stage::kVerifiedWithin;
};

struct QueryReport {
  std::int64_t query_id = 0;
  QueryMode mode = QueryMode::kRange;
  IndexKind index = IndexKind::kNone;
  double r = 0.0;      // range threshold
  std::size_t k = 0;   // kNN

  // Range: graphs passing the lower-bound filter. kNN: graphs drawn from the
  // ascending lower-bound stream before termination.
  std::size_t lb_candidates = 0;
  std::size_t ub_accepted = 0;
  std::size_t rub_accepted = 0;   // accepted by the refined bound, not by the plain one
  std::size_t verified_count = 0; // exact searches started
  std::size_t verified_hits = 0;
  std::size_t result_size = 0;

  std::uint64_t branch_evaluations = 0;
  std::uint64_t exact_ged_calls = 0;
  std::uint64_t search_nodes = 0;

  std::vector<ResultItem> results;
  std::vector<GraphId> unverified;
  bool partial = false;

  // kNN only: final k-th exact distance, results beyond k tied with it, and
  // the lower bound of every graph that was searched exactly.
  std::optional<double> kth_distance;
  std::size_t ties = 0;
  std::vector<std::pair<GraphId, double>> searched;
};

struct EngineConfig {
  std::uint64_t budget = kDefaultSearchBudget;
  int workers = 1;
};

// Filter-and-verify query processing over one database. The index, when
// given, must have been built over branch_space(db, m).
class QueryEngine {
 public:
  QueryEngine(const GraphDatabase& db, const CostModel& m, const MetricIndex* index = nullptr,
              EngineConfig config = {});

  QueryReport range(const Graph& q, double r, std::int64_t query_id = 0) const;
  QueryReport knn(const Graph& q, std::size_t k, std::int64_t query_id = 0) const;

 private:
  const GraphDatabase& db_;
  const CostModel& m_;
  const MetricIndex* index_;
  EngineConfig config_;
};

}  // namespace gsim
