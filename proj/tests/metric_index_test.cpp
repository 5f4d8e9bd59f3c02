#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <sstream>

#include "gsim/cover_tree.hpp"
#include "gsim/index_io.hpp"
#include "gsim/query_engine.hpp"
#include "gsim/synthetic.hpp"
#include "gsim/vp_tree.hpp"

using namespace gsim;

namespace {

const UniformCostModel uniform;

GraphDatabase random_db(std::size_t n, std::uint64_t seed, std::size_t clusters = 0) {
  SyntheticOptions o;
  o.graphs = n;
  o.max_vertices = 9;
  o.clusters = clusters;
  o.seed = seed;
  return synthetic_database(o);
}

QueryDistance query_of(const GraphDatabase& db, const Graph& q) {
  return QueryDistance(db.size(), [&db, &q](ObjectId id) {
    return branch_distance(q, db[id], uniform).value;
  });
}

std::vector<ObjectId> linear_range(const GraphDatabase& db, const Graph& q, double r) {
  std::vector<ObjectId> out;
  for (std::size_t i = 0; i < db.size(); ++i) {
    if (branch_distance(q, db[i], uniform).value <= r + kEpsilon) out.push_back(ObjectId(i));
  }
  return out;
}

class IndexKinds : public ::testing::TestWithParam<IndexKind> {
 protected:
  std::unique_ptr<MetricIndex> build(const GraphDatabase& db, MetricSpace& space,
                                     std::uint64_t seed = 1) {
    IndexOptions o;
    o.kind = GetParam();
    o.seed = seed;
    return build_index(space, o);
  }
};

}  // namespace

TEST_P(IndexKinds, SingleObject) {
  const auto db = random_db(1, 2);
  MetricSpace space = branch_space(db, uniform);
  const auto index = build(db, space);
  EXPECT_EQ(index->build_evaluations(), 0u);
  EXPECT_TRUE(index->audit(space).ok());
  auto q = query_of(db, db[0]);
  EXPECT_EQ(index->range(q, 0.0), std::vector<ObjectId>{0});
}

TEST_P(IndexKinds, IdenticalObjects) {
  GraphDatabase db = random_db(1, 3);
  for (int i = 1; i < 20; ++i) {
    Graph g = db[0];
    db.graphs.push_back(Graph(i, g.vertices(), g.edges()));
  }
  MetricSpace space = branch_space(db, uniform);
  const auto index = build(db, space);
  EXPECT_TRUE(index->audit(space).ok());
  auto q = query_of(db, db[5]);
  EXPECT_EQ(index->range(q, 0.0).size(), 20u);
  auto stream = index->ascending(q);
  for (int i = 0; i < 20; ++i) {
    const auto next = stream->next();
    ASSERT_TRUE(next);
    EXPECT_EQ(next->id, i);
    EXPECT_EQ(next->distance, 0.0);
  }
  EXPECT_FALSE(stream->next());
}

TEST_P(IndexKinds, AuditAfterBuild) {
  const auto db = random_db(100, 4);
  MetricSpace space = branch_space(db, uniform);
  const auto index = build(db, space);
  const auto report = index->audit(space);
  EXPECT_TRUE(report.ok()) << report.problems.front();
  EXPECT_EQ(index->size(), 100u);
}

TEST_P(IndexKinds, RangeMatchesLinearScan) {
  const auto db = random_db(120, 5);
  MetricSpace space = branch_space(db, uniform);
  const auto index = build(db, space);
  for (std::size_t qi = 0; qi < db.size(); qi += 6) {
    for (double r : {0.0, 1.0, 2.5, 4.0}) {
      auto q = query_of(db, db[qi]);
      EXPECT_EQ(index->range(q, r), linear_range(db, db[qi], r)) << "query " << qi << " r " << r;
    }
  }
}

TEST_P(IndexKinds, RangeExtremes) {
  const auto db = random_db(60, 6);
  MetricSpace space = branch_space(db, uniform);
  const auto index = build(db, space);
  SymbolTable symbols;
  SyntheticOptions o;
  o.seed = 99;
  o.min_vertices = o.max_vertices = 30;
  std::mt19937_64 rng(1);
  const Graph far = random_graph(o, symbols, rng);
  auto q = query_of(db, far);
  EXPECT_EQ(index->range(q, std::numeric_limits<double>::infinity()).size(), db.size());
  double nearest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < db.size(); ++i) nearest = std::min(nearest, q(ObjectId(i)));
  EXPECT_TRUE(index->range(q, nearest - 0.5).empty());
}

TEST_P(IndexKinds, AscendingStreamIsSortedPermutation) {
  const auto db = random_db(80, 7);
  MetricSpace space = branch_space(db, uniform);
  const auto index = build(db, space);
  for (std::size_t qi : {0u, 17u, 42u}) {
    auto q = query_of(db, db[qi]);
    auto stream = index->ascending(q);
    std::vector<std::pair<double, ObjectId>> drained;
    while (auto next = stream->next()) drained.emplace_back(next->distance, next->id);
    ASSERT_EQ(drained.size(), db.size());
    std::vector<std::pair<double, ObjectId>> expected;
    for (std::size_t i = 0; i < db.size(); ++i) {
      expected.emplace_back(branch_distance(db[qi], db[i], uniform).value, ObjectId(i));
    }
    std::sort(expected.begin(), expected.end());
    EXPECT_EQ(drained, expected);
  }
}

TEST_P(IndexKinds, StreamPrefixNeedsFewEvaluations) {
  const auto db = random_db(200, 8, 10);
  MetricSpace space = branch_space(db, uniform);
  const auto index = build(db, space);
  auto q = query_of(db, db[3]);
  auto stream = index->ascending(q);
  const auto first = stream->next();
  ASSERT_TRUE(first);
  EXPECT_EQ(first->distance, 0.0);
  EXPECT_LT(q.evaluations(), db.size());
}

TEST_P(IndexKinds, RangeEconomyOnClusteredData) {
  const auto db = random_db(300, 9, 10);
  MetricSpace space = branch_space(db, uniform);
  const auto index = build(db, space);
  std::uint64_t total = 0;
  for (std::size_t qi = 0; qi < db.size(); qi += 30) {
    auto q = query_of(db, db[qi]);
    index->range(q, 1.0);
    EXPECT_LE(q.evaluations(), db.size());
    total += q.evaluations();
  }
  EXPECT_LT(total, 10 * db.size());
}

TEST_P(IndexKinds, DeterministicForSeed) {
  const auto db = random_db(70, 10);
  MetricSpace s1 = branch_space(db, uniform), s2 = branch_space(db, uniform);
  const auto a = build(db, s1, 5), b = build(db, s2, 5);
  std::ostringstream oa, ob;
  const auto fp = fingerprint(db, uniform);
  save_index(oa, *a, 5, fp);
  save_index(ob, *b, 5, fp);
  EXPECT_EQ(oa.str(), ob.str());
}

TEST_P(IndexKinds, SaveLoadRoundTrip) {
  const auto db = random_db(70, 11);
  MetricSpace space = branch_space(db, uniform);
  const auto index = build(db, space);
  const auto fp = fingerprint(db, uniform);
  std::stringstream buffer;
  save_index(buffer, *index, 1, fp);
  const std::string saved = buffer.str();
  const auto loaded = load_index(buffer, fp, db.size());
  EXPECT_EQ(loaded->kind(), GetParam());
  EXPECT_EQ(loaded->build_evaluations(), index->build_evaluations());
  EXPECT_TRUE(loaded->audit(space).ok());
  std::ostringstream again;
  save_index(again, *loaded, 1, fp);
  EXPECT_EQ(again.str(), saved);
  for (std::size_t qi = 0; qi < db.size(); qi += 10) {
    auto q1 = query_of(db, db[qi]), q2 = query_of(db, db[qi]);
    EXPECT_EQ(loaded->range(q1, 2.0), index->range(q2, 2.0));
  }
}

TEST_P(IndexKinds, LoadRefusesMismatch) {
  const auto db = random_db(30, 12);
  MetricSpace space = branch_space(db, uniform);
  const auto index = build(db, space);
  const auto fp = fingerprint(db, uniform);
  std::stringstream buffer;
  save_index(buffer, *index, 1, fp);
  const std::string saved = buffer.str();

  std::istringstream costs(saved);
  EXPECT_THROW(load_index(costs, fingerprint(db, UniformCostModel(2.0)), db.size()),
               IndexMismatch);
  auto other = random_db(30, 13);
  std::istringstream data(saved);
  EXPECT_THROW(load_index(data, fingerprint(other, uniform), db.size()), IndexMismatch);
  std::istringstream count(saved);
  EXPECT_THROW(load_index(count, fp, db.size() + 1), IndexMismatch);
}

INSTANTIATE_TEST_SUITE_P(Trees, IndexKinds,
                         ::testing::Values(IndexKind::kVpTree, IndexKind::kCoverTree),
                         [](const auto& info) {
                           return info.param == IndexKind::kVpTree ? "VpTree" : "CoverTree";
                         });

TEST(IndexKind, Parse) {
  EXPECT_EQ(parse_index_kind("none"), IndexKind::kNone);
  EXPECT_EQ(parse_index_kind("vp"), IndexKind::kVpTree);
  EXPECT_EQ(parse_index_kind("cover"), IndexKind::kCoverTree);
  EXPECT_THROW(parse_index_kind("kd"), std::invalid_argument);
}

TEST(CoverTree, LevelsAndRadii) {
  const auto db = random_db(90, 14);
  MetricSpace space = branch_space(db, uniform);
  CoverTreeParams p;
  p.seed = 3;
  const auto tree = CoverTree::build(space, p);
  for (const auto& node : tree.nodes()) {
    for (auto child : node.children) EXPECT_LT(tree.nodes()[child].level, node.level);
  }
  EXPECT_NEAR(tree.radius(2), 1.44, 1e-12);
}

TEST(VpTree, ChildRangesBoundSubtrees) {
  const auto db = random_db(90, 15);
  MetricSpace space = branch_space(db, uniform);
  VpTreeParams p;
  p.seed = 4;
  const auto tree = VpTree::build(space, p);
  std::size_t leaves = 0, objects = 0;
  for (const auto& node : tree.nodes()) {
    if (node.leaf()) {
      ++leaves;
      objects += node.bucket.size();
      EXPECT_LE(node.bucket.size(), p.leaf_size);
    } else {
      EXPECT_LE(node.near_lo, node.near_hi);
      EXPECT_LE(node.far_lo, node.far_hi);
      EXPECT_LE(node.near_hi, node.far_lo + kEpsilon);
      ++objects;
    }
  }
  EXPECT_EQ(objects, db.size());
  EXPECT_GT(leaves, 1u);
}
