#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "gsim/index_io.hpp"
#include "gsim/query_engine.hpp"
#include "gsim/report.hpp"
#include "gsim/synthetic.hpp"
#include "json.hpp"

using namespace gsim;

namespace {

const UniformCostModel uniform;
using Indexes = std::vector<const MetricIndex*>;

GraphDatabase small_db(std::uint64_t seed, std::size_t n = 60) {
  SyntheticOptions o;
  o.graphs = n;
  o.max_vertices = 8;
  o.clusters = 5;
  o.seed = seed;
  return synthetic_database(o);
}

// Exact distances from q to every database graph.
std::vector<double> exact_row(const GraphDatabase& db, const Graph& q) {
  std::vector<double> d;
  for (const auto& g : db.graphs) d.push_back(exact_ged(q, g, uniform));
  return d;
}

std::vector<GraphId> ids(const QueryReport& rep) {
  std::vector<GraphId> out;
  for (const auto& item : rep.results) out.push_back(item.id);
  return out;
}

struct Indexed {
  explicit Indexed(const GraphDatabase& db) : space(branch_space(db, uniform)) {
    IndexOptions o;
    o.seed = 3;
    o.kind = IndexKind::kVpTree;
    vp = build_index(space, o);
    o.kind = IndexKind::kCoverTree;
    cover = build_index(space, o);
  }
  MetricSpace space;
  std::unique_ptr<MetricIndex> vp, cover;
};

}  // namespace

TEST(Range, SelfHitAtZero) {
  const auto db = small_db(1);
  const QueryEngine engine(db, uniform);
  const auto rep = engine.range(db[11], 0.0);
  ASSERT_FALSE(rep.results.empty());
  const auto self = std::find_if(rep.results.begin(), rep.results.end(),
                                 [](const ResultItem& i) { return i.id == 11; });
  ASSERT_NE(self, rep.results.end());
  EXPECT_EQ(self->distance, 0.0);
  for (const auto& item : rep.results) EXPECT_EQ(item.distance, 0.0);
}

TEST(Range, HugeThresholdReturnsEverything) {
  const auto db = small_db(2);
  const QueryEngine engine(db, uniform);
  const auto rep = engine.range(db[0], 1e6);
  EXPECT_EQ(rep.lb_candidates, db.size());
  EXPECT_EQ(rep.result_size, db.size());
  EXPECT_EQ(rep.ub_accepted, db.size());
  EXPECT_EQ(rep.verified_count, 0u);
}

TEST(Range, NegativeThresholdThrows) {
  const auto db = small_db(3, 5);
  EXPECT_THROW(QueryEngine(db, uniform).range(db[0], -1.0), std::invalid_argument);
}

TEST(Range, SafeAgainstExactDistances) {
  const auto db = small_db(4);
  const Indexed idx(db);
  for (const MetricIndex* index : Indexes{nullptr, idx.vp.get(), idx.cover.get()}) {
    const QueryEngine engine(db, uniform, index);
    for (std::size_t qi : {0u, 7u, 31u}) {
      const auto d = exact_row(db, db[qi]);
      for (double r : {0.0, 1.0, 2.0, 3.0, 5.0}) {
        const auto rep = engine.range(db[qi], r);
        std::vector<GraphId> expected;
        for (std::size_t i = 0; i < db.size(); ++i) {
          if (d[i] <= r + kEpsilon) expected.push_back(GraphId(i));
        }
        EXPECT_EQ(ids(rep), expected) << "query " << qi << " r " << r;
        for (const auto& item : rep.results) {
          if (item.distance) EXPECT_NEAR(*item.distance, d[item.id], 1e-9);
        }
        EXPECT_FALSE(rep.partial);
        EXPECT_EQ(rep.lb_candidates, rep.ub_accepted + rep.rub_accepted + rep.verified_count);
        EXPECT_EQ(rep.result_size, rep.ub_accepted + rep.rub_accepted + rep.verified_hits);
      }
    }
  }
}

TEST(Range, IndexDoesNotChangeReports) {
  const auto db = small_db(5, 120);
  const Indexed idx(db);
  const QueryEngine scan(db, uniform), vp(db, uniform, idx.vp.get()),
      cover(db, uniform, idx.cover.get());
  for (std::size_t qi = 0; qi < db.size(); qi += 9) {
    for (double r : {1.0, 2.0, 4.0}) {
      const auto a = scan.range(db[qi], r), b = vp.range(db[qi], r), c = cover.range(db[qi], r);
      EXPECT_EQ(ids(a), ids(b));
      EXPECT_EQ(ids(a), ids(c));
      EXPECT_EQ(a.lb_candidates, b.lb_candidates);
      EXPECT_EQ(a.ub_accepted, c.ub_accepted);
      EXPECT_EQ(a.verified_hits, c.verified_hits);
      EXPECT_LE(b.branch_evaluations, db.size());
      EXPECT_LE(c.branch_evaluations, db.size());
    }
  }
}

TEST(Range, StageCountsMonotoneInThreshold) {
  const auto db = small_db(6, 120);
  const Indexed idx(db);
  const QueryEngine engine(db, uniform, idx.cover.get());
  for (std::size_t qi = 0; qi < db.size(); qi += 20) {
    QueryReport prev;
    for (double r : {0.0, 1.0, 2.0, 3.0, 4.0, 5.0}) {
      const auto rep = engine.range(db[qi], r);
      EXPECT_GE(rep.lb_candidates, prev.lb_candidates);
      EXPECT_GE(rep.result_size, prev.result_size);
      EXPECT_GE(rep.branch_evaluations, prev.branch_evaluations);
      EXPECT_GE(rep.lb_candidates, rep.result_size);
      prev = rep;
    }
  }
}

TEST(Range, RefinedBoundAcceptsWhatPlainBoundAccepts) {
  const auto db = small_db(7, 100);
  const auto& q = db[13];
  for (std::size_t i = 0; i < db.size(); ++i) {
    const auto lb = branch_distance(q, db[i], uniform);
    const auto ub = branch_upper_bound(q, db[i], uniform, lb);
    const auto rub = refine_upper_bound(q, db[i], uniform, ub);
    EXPECT_LE(rub.value, ub.value + kEpsilon);
    EXPECT_LE(lb.value, rub.value + kEpsilon);
  }
}

TEST(Range, TinyBudgetIsPartial) {
  SyntheticOptions o;
  o.graphs = 40;
  o.min_vertices = 10;
  o.max_vertices = 12;
  o.extra_edge_prob = 0.25;
  o.seed = 8;
  const auto db = synthetic_database(o);
  EngineConfig cfg;
  cfg.budget = 1;
  const QueryEngine engine(db, uniform, nullptr, cfg);
  bool seen = false;
  for (std::size_t qi = 0; qi < 10 && !seen; ++qi) {
    for (double r : {6.0, 9.0, 12.0}) {
      const auto rep = engine.range(db[qi], r);
      if (rep.unverified.empty()) continue;
      seen = true;
      EXPECT_TRUE(rep.partial);
      for (GraphId id : rep.unverified) {
        EXPECT_TRUE(std::none_of(rep.results.begin(), rep.results.end(),
                                 [id](const ResultItem& i) { return i.id == id; }));
      }
      const auto json = nlohmann::json::parse(report_json(rep));
      EXPECT_TRUE(json["partial"].get<bool>());
      EXPECT_EQ(json["unverified"].size(), rep.unverified.size());
    }
  }
  EXPECT_TRUE(seen);
}

TEST(Knn, InvalidK) {
  const auto db = small_db(9, 10);
  const QueryEngine engine(db, uniform);
  EXPECT_THROW(engine.knn(db[0], 0), std::invalid_argument);
  EXPECT_THROW(engine.knn(db[0], 11), std::invalid_argument);
}

TEST(Knn, SelfIsNearest) {
  const auto db = small_db(10, 40);
  const QueryEngine engine(db, uniform);
  const auto rep = engine.knn(db[17], 1);
  ASSERT_GE(rep.results.size(), 1u);
  EXPECT_EQ(rep.kth_distance, 0.0);
  EXPECT_TRUE(std::any_of(rep.results.begin(), rep.results.end(),
                          [](const ResultItem& i) { return i.id == 17; }));
}

TEST(Knn, WholeDatabase) {
  const auto db = small_db(11, 25);
  const QueryEngine engine(db, uniform);
  const auto rep = engine.knn(db[3], db.size());
  EXPECT_EQ(rep.result_size, db.size());
  const auto d = exact_row(db, db[3]);
  EXPECT_NEAR(*rep.kth_distance, *std::max_element(d.begin(), d.end()), 1e-9);
}

TEST(Knn, MatchesBruteForce) {
  const auto db = small_db(12);
  const Indexed idx(db);
  for (const MetricIndex* index : Indexes{nullptr, idx.vp.get(), idx.cover.get()}) {
    const QueryEngine engine(db, uniform, index);
    for (std::size_t qi : {2u, 29u, 50u}) {
      const auto d = exact_row(db, db[qi]);
      for (std::size_t k : {1u, 3u, 5u, 10u}) {
        auto sorted = d;
        std::sort(sorted.begin(), sorted.end());
        const double rk = sorted[k - 1];
        const auto rep = engine.knn(db[qi], k);
        ASSERT_TRUE(rep.kth_distance);
        EXPECT_NEAR(*rep.kth_distance, rk, 1e-9);
        std::vector<GraphId> expected;
        for (std::size_t i = 0; i < db.size(); ++i) {
          if (d[i] <= rk + kEpsilon) expected.push_back(GraphId(i));
        }
        auto got = ids(rep);
        std::sort(got.begin(), got.end());
        EXPECT_EQ(got, expected);
        EXPECT_EQ(rep.ties, expected.size() - k);
        for (std::size_t i = 1; i < rep.results.size(); ++i) {
          EXPECT_LE(*rep.results[i - 1].distance, *rep.results[i].distance);
        }
      }
    }
  }
}

// Every graph that was not searched exactly has a lower bound above r_k, and
// every graph searched had a lower bound no larger than r_k.
TEST(Knn, Certificate) {
  const auto db = small_db(13, 100);
  const Indexed idx(db);
  for (const MetricIndex* index : Indexes{nullptr, idx.cover.get()}) {
    const QueryEngine engine(db, uniform, index);
    for (std::size_t qi : {4u, 44u}) {
      const auto rep = engine.knn(db[qi], 4);
      const double rk = *rep.kth_distance;
      std::set<GraphId> searched;
      for (const auto& [id, lb] : rep.searched) {
        searched.insert(id);
        EXPECT_LE(lb, rk + kEpsilon);
        EXPECT_NEAR(lb, branch_distance(db[qi], db[id], uniform).value, 1e-12);
      }
      for (std::size_t i = 0; i < db.size(); ++i) {
        if (searched.count(GraphId(i))) continue;
        EXPECT_GT(branch_distance(db[qi], db[i], uniform).value, rk) << i;
      }
      EXPECT_EQ(rep.lb_candidates, rep.searched.size());
    }
  }
}

// With all distances distinct, range(q, r_k) returns exactly the k nearest.
TEST(Knn, RangeDuality) {
  const auto db = small_db(14, 80);
  const QueryEngine engine(db, uniform);
  int checked = 0;
  for (std::size_t qi = 0; qi < db.size(); qi += 8) {
    for (std::size_t k : {1u, 2u, 4u}) {
      const auto kn = engine.knn(db[qi], k);
      const auto rg = engine.range(db[qi], *kn.kth_distance);
      auto a = ids(kn);
      std::sort(a.begin(), a.end());
      EXPECT_EQ(a, ids(rg));
      if (kn.ties == 0) ++checked;
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(Report, JsonAndCsvFields) {
  const auto db = small_db(15, 30);
  const QueryEngine engine(db, uniform);
  const auto range = engine.range(db[1], 2.0, 42);
  const auto j = nlohmann::json::parse(report_json(range));
  EXPECT_EQ(j["query"], 42);
  EXPECT_EQ(j["mode"], "range");
  EXPECT_EQ(j["index"], "none");
  EXPECT_EQ(j["r"], 2.0);
  for (const char* key : {"lb_candidates", "ub_accepted", "rub_accepted", "verified_count",
                          "verified_hits", "result_size", "branch_evaluations",
                          "exact_ged_calls", "search_nodes", "partial", "results",
                          "unverified"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["results"].size(), range.result_size);
  EXPECT_EQ(report_json(range), report_json(engine.range(db[1], 2.0, 42)));

  const auto knn = engine.knn(db[1], 3, 7);
  const auto jk = nlohmann::json::parse(report_json(knn));
  EXPECT_EQ(jk["k"], 3);
  EXPECT_EQ(jk["kth_distance"], *knn.kth_distance);

  std::ostringstream csv;
  write_csv_header(csv);
  write_csv_row(csv, range);
  write_csv_row(csv, knn);
  std::istringstream lines(csv.str());
  std::string header, row;
  std::getline(lines, header);
  const auto columns = std::count(header.begin(), header.end(), ',');
  int rows = 0;
  while (std::getline(lines, row)) {
    EXPECT_EQ(std::count(row.begin(), row.end(), ','), columns);
    ++rows;
  }
  EXPECT_EQ(rows, 2);
}
