#include "gsim/query_engine.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <stdexcept>

namespace gsim {

MetricSpace branch_space(const GraphDatabase& db, const CostModel& m) {
  auto scratch = std::make_shared<BranchScratch>();
  return MetricSpace(db.size(), [&db, &m, scratch](ObjectId a, ObjectId b) {
    return branch_distance(db[a], db[b], m, scratch.get()).value;
  });
}

const char* to_string(QueryMode mode) {
  return mode == QueryMode::kRange ? "range" : "knn";
}

QueryEngine::QueryEngine(const GraphDatabase& db, const CostModel& m, const MetricIndex* index,
                         EngineConfig config)
    : db_(db), m_(m), index_(index), config_(config) {
  if (index_ && index_->size() != db_.size()) {
    throw std::invalid_argument("index size does not match the database");
  }
}

namespace {

// Lower bounds from q to database graphs, computed on demand through the
// index and kept with their assignments for the upper-bound stage.
struct BoundCache {
  BoundCache(const Graph& q, const GraphDatabase& db, const CostModel& m)
      : bounds(db.size()),
        distance(db.size(), [this, &q, &db, &m](ObjectId id) {
          bounds[id] = branch_distance(q, db[id], m, &scratch);
          return bounds[id]->value;
        }) {}

  BranchScratch scratch;
  std::vector<std::optional<BoundResult>> bounds;
  QueryDistance distance;
};

}  // namespace

QueryReport QueryEngine::range(const Graph& q, double r, std::int64_t query_id) const {
  if (!(r >= 0.0)) throw std::invalid_argument("range threshold must be >= 0");
  QueryReport rep;
  rep.query_id = query_id;
  rep.mode = QueryMode::kRange;
  rep.index = index_ ? index_->kind() : IndexKind::kNone;
  rep.r = r;

  // Stage 1: lower-bound filter.
  std::vector<Candidate> candidates;
  std::vector<BoundResult> scanned;
  std::unique_ptr<BoundCache> cache;
  if (index_) {
    cache = std::make_unique<BoundCache>(q, db_, m_);
    for (ObjectId id : index_->range(cache->distance, r)) {
      candidates.push_back({&db_.graphs[id], &*cache->bounds[id]});
    }
    rep.branch_evaluations = cache->distance.evaluations();
  } else {
    scanned = branch_scan(q, db_.graphs, m_, config_.workers);
    for (std::size_t i = 0; i < scanned.size(); ++i) {
      if (scanned[i].value <= r + kEpsilon) candidates.push_back({&db_.graphs[i], &scanned[i]});
    }
    rep.branch_evaluations = db_.size();
  }
  rep.lb_candidates = candidates.size();

  // Stages 2-4.
  const auto outcomes = settle_candidates(q, candidates, m_, r, config_.budget, config_.workers);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& o = outcomes[i];
    const GraphId id = candidates[i].graph->id();
    rep.search_nodes += o.search_nodes;
    switch (o.stage) {
      case Stage::kAcceptedByUb:
        ++rep.ub_accepted;
        rep.results.push_back({id, o.distance, o.stage});
        break;
      case Stage::kAcceptedByRub:
        ++rep.rub_accepted;
        rep.results.push_back({id, o.distance, o.stage});
        break;
      case Stage::kVerifiedWithin:
        ++rep.verified_count;
        ++rep.verified_hits;
        rep.results.push_back({id, o.distance, o.stage});
        break;
      case Stage::kVerifiedExceeds:
        ++rep.verified_count;
        break;
      case Stage::kUnverified:
        ++rep.verified_count;
        rep.unverified.push_back(id);
        break;
    }
  }
  rep.exact_ged_calls = rep.verified_count;
  std::sort(rep.results.begin(), rep.results.end(),
            [](const ResultItem& a, const ResultItem& b) { return a.id < b.id; });
  std::sort(rep.unverified.begin(), rep.unverified.end());
  rep.result_size = rep.results.size();
  rep.partial = !rep.unverified.empty();
  return rep;
}

QueryReport QueryEngine::knn(const Graph& q, std::size_t k, std::int64_t query_id) const {
  if (k < 1 || k > db_.size()) {
    throw std::invalid_argument("k must lie in [1, " + std::to_string(db_.size()) + "]");
  }
  QueryReport rep;
  rep.query_id = query_id;
  rep.mode = QueryMode::kKnn;
  rep.index = index_ ? index_->kind() : IndexKind::kNone;
  rep.k = k;

  // Ascending lower-bound order, from the index or a sorted scan.
  std::unique_ptr<BoundCache> cache;
  std::unique_ptr<NeighborStream> stream;
  std::vector<Ranked> order;
  std::size_t cursor = 0;
  if (index_) {
    cache = std::make_unique<BoundCache>(q, db_, m_);
    stream = index_->ascending(cache->distance);
  } else {
    const auto scanned = branch_scan(q, db_.graphs, m_, config_.workers);
    for (std::size_t i = 0; i < scanned.size(); ++i) {
      order.push_back({static_cast<ObjectId>(i), scanned[i].value});
    }
    std::sort(order.begin(), order.end(), [](const Ranked& a, const Ranked& b) {
      return a.distance != b.distance ? a.distance < b.distance : a.id < b.id;
    });
    rep.branch_evaluations = db_.size();
  }
  auto next = [&]() -> std::optional<Ranked> {
    if (stream) return stream->next();
    if (cursor < order.size()) return order[cursor++];
    return std::nullopt;
  };

  std::vector<std::pair<double, GraphId>> exact;  // (distance, id)
  auto kth = [&]() {
    std::vector<double> ds;
    for (const auto& e : exact) ds.push_back(e.first);
    std::nth_element(ds.begin(), ds.begin() + (k - 1), ds.end());
    return ds[k - 1];
  };
  std::optional<double> rk;

  while (auto nb = next()) {
    if (rk && nb->distance > *rk + kEpsilon) break;
    ++rep.lb_candidates;
    const Graph& g = db_.graphs[nb->id];
    rep.searched.emplace_back(nb->id, nb->distance);
    ++rep.verified_count;
    SearchStats stats;
    try {
      if (!rk) {
        exact.emplace_back(exact_ged(q, g, m_, config_.budget, &stats), nb->id);
      } else {
        const auto v = verify_threshold(q, g, m_, *rk, config_.budget, &stats);
        if (v.decision == Decision::kWithin) exact.emplace_back(*v.distance, nb->id);
      }
    } catch (const BudgetExhausted&) {
      rep.unverified.push_back(nb->id);
      stats.nodes = config_.budget;
    }
    rep.search_nodes += stats.nodes;
    if (exact.size() >= k) rk = kth();
  }
  if (cache) rep.branch_evaluations = cache->distance.evaluations();
  rep.exact_ged_calls = rep.verified_count;

  if (!rk && !exact.empty()) {
    // Fewer than k exact distances: only possible with unverified pairs.
    rk = std::max_element(exact.begin(), exact.end())->first;
  }
  std::sort(exact.begin(), exact.end());
  for (const auto& [d, id] : exact) {
    if (rk && d <= *rk + kEpsilon) rep.results.push_back({id, d, Stage::kVerifiedWithin});
  }
  rep.kth_distance = rk;
  rep.verified_hits = rep.results.size();
  rep.result_size = rep.results.size();
  rep.ties = rep.result_size > k ? rep.result_size - k : 0;
  std::sort(rep.unverified.begin(), rep.unverified.end());
  rep.partial = !rep.unverified.empty();
  return rep;
}

}  // namespace gsim
