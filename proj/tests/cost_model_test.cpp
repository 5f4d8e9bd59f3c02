#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gsim/cost_model.hpp"
#include "gsim/synthetic.hpp"
#include "test_util.hpp"

using namespace gsim;
using gsim::test::attr;
using gsim::test::sym;

TEST(UniformCosts, VertexAndEdgeCases) {
  const UniformCostModel m;
  const Label a = sym(0), b = sym(1);
  EXPECT_EQ(vertex_cost(m, &a, &a), 0.0);
  EXPECT_EQ(vertex_cost(m, &a, &b), 1.0);
  EXPECT_EQ(vertex_cost(m, &a, nullptr), 1.0);
  EXPECT_EQ(vertex_cost(m, nullptr, &b), 1.0);
  EXPECT_EQ(edge_cost(m, &a, &a), 0.0);
  EXPECT_EQ(edge_cost(m, &a, nullptr), 1.0);
  EXPECT_EQ(edge_cost(m, nullptr, &b), 1.0);
  EXPECT_THROW(vertex_cost(m, nullptr, nullptr), std::invalid_argument);
  EXPECT_THROW(edge_cost(m, nullptr, nullptr), std::invalid_argument);
  EXPECT_TRUE(m.uniform_edge_costs());
}

TEST(EuclideanCosts, ThreeFourFive) {
  const EuclideanCostModel m(1.0, 1.0, 1);
  const Label a = attr({0, 0}), b = attr({0.3, 0.4});
  EXPECT_NEAR(vertex_cost(m, &a, &b), 0.5, 1e-12);
  EXPECT_EQ(vertex_cost(m, &a, nullptr), 1.0);
  const Label e = attr({0.2}), f = attr({0.7});
  EXPECT_NEAR(edge_cost(m, &e, &f), 0.5, 1e-12);
  EXPECT_EQ(edge_cost(m, nullptr, &f), 1.0);
  EXPECT_FALSE(m.uniform_edge_costs());
}

TEST(EuclideanCosts, UnattributedEdgesAreUniform) {
  EXPECT_TRUE(EuclideanCostModel(1.0, 2.0, 0, false).uniform_edge_costs());
  EXPECT_EQ(EuclideanCostModel(1.0, 2.0, 0, false).edge_gamma(), 2.0);
  // Edge symbols in euclidean mode are ignored... unless mixed with gamma = delta_e.
  EXPECT_FALSE(EuclideanCostModel(1.0, 2.0, 0, true, false).uniform_edge_costs());
  EXPECT_TRUE(EuclideanCostModel(1.0, 2.0, 0, true, true, 2.0).uniform_edge_costs());
}

TEST(MixedCosts, AddsSymbolMismatchToDistance) {
  const EuclideanCostModel m(1.0, 1.0, 0, false, true, 1.0);
  Label a = attr({0, 0}), b = attr({0.3, 0.4});
  a.symbol = 0;
  b.symbol = 1;
  EXPECT_NEAR(vertex_cost(m, &a, &b), 1.5, 1e-12);
  b.symbol = 0;
  EXPECT_NEAR(vertex_cost(m, &a, &b), 0.5, 1e-12);
}

TEST(CostConfig, ParsesKeyValueText) {
  const auto cfg = parse_cost_config("# costs\nmodel = euclidean\ndelta_v = 0.75\n\ndelta_e=2\n");
  EXPECT_EQ(cfg.kind, CostModelKind::kEuclidean);
  EXPECT_EQ(cfg.delta_v, 0.75);
  EXPECT_EQ(cfg.delta_e, 2.0);
  EXPECT_THROW(parse_cost_config("model = levenshtein\n"), std::invalid_argument);
  EXPECT_THROW(parse_cost_config("delta_v = -1\n"), std::invalid_argument);
  EXPECT_THROW(parse_cost_config("colour = red\n"), std::invalid_argument);
}

TEST(CostModel, HashDistinguishesParameters) {
  EXPECT_EQ(UniformCostModel().hash(), UniformCostModel().hash());
  EXPECT_NE(UniformCostModel(1.0).hash(), UniformCostModel(2.0).hash());
  EXPECT_NE(EuclideanCostModel(1.0, 1.0).hash(), EuclideanCostModel(0.5, 1.0).hash());
}

TEST(ReversedCosts, SwapsDirection) {
  const EuclideanCostModel base(0.5, 2.0);
  const ReversedCostModel r(base);
  const Label a = attr({0, 0});
  EXPECT_EQ(r.vertex_deletion(a), base.vertex_insertion(a));
  EXPECT_EQ(r.edge_insertion(a), base.edge_deletion(a));
}

namespace {

GraphDatabase attribute_points(const std::vector<std::vector<double>>& points) {
  GraphDatabase db;
  db.vertex_dim = points.front().size();
  std::vector<Label> vs;
  for (const auto& p : points) vs.push_back(attr(p));
  db.graphs.emplace_back(0, std::move(vs), std::vector<Edge>{});
  return db;
}

// Substitution costs from a table over three symbols.
class TableCosts final : public CostModel {
 public:
  double vertex_substitution(const Label& a, const Label& b) const override {
    static const double t[3][3] = {{0, 1, 5}, {1, 0, 1}, {5, 1, 0}};
    return t[*a.symbol][*b.symbol];
  }
  double vertex_deletion(const Label&) const override { return 10; }
  double vertex_insertion(const Label&) const override { return 10; }
  double edge_substitution(const Label&, const Label&) const override { return 0; }
  double edge_deletion(const Label&) const override { return 1; }
  double edge_insertion(const Label&) const override { return 1; }
  std::string describe() const override { return "table"; }
};

}  // namespace

TEST(Metricity, UniformModelIsAlwaysOk) {
  SyntheticOptions o;
  o.graphs = 30;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    o.seed = seed;
    const auto db = synthetic_database(o);
    EXPECT_TRUE(validate_metricity(UniformCostModel(), db, 500, seed).ok());
  }
}

TEST(Metricity, SmallDeletionCostViolatesSubVsDelIns) {
  const auto db = attribute_points({{0, 0}, {0.3, 0.4}, {1, 1}});
  const auto rep = validate_metricity(EuclideanCostModel(0.05, 1.0), db, 1000);
  ASSERT_FALSE(rep.ok());
  bool found = false;
  for (const auto& v : rep.violations) {
    if (v.rule == MetricRule::kVertexSubVsDelIns && std::abs(v.lhs - 0.5) < 1e-12) {
      found = true;
      EXPECT_NEAR(v.rhs, 0.1, 1e-12);
    }
  }
  EXPECT_TRUE(found);
  EXPECT_TRUE(validate_metricity(EuclideanCostModel(1.0, 1.0), db, 1000).ok());
}

TEST(Metricity, TriangleViolationNamesWitnesses) {
  GraphDatabase db;
  db.graphs.push_back(test::make_graph({0, 1, 2}, {}));
  const auto rep = validate_metricity(TableCosts(), db, 1000);
  ASSERT_FALSE(rep.ok());
  bool found = false;
  for (const auto& v : rep.violations) {
    if (v.rule != MetricRule::kVertexTriangle) continue;
    ASSERT_EQ(v.witnesses.size(), 3u);
    if (v.witnesses[0].symbol == 0 && v.witnesses[1].symbol == 1 && v.witnesses[2].symbol == 2) {
      found = true;
      EXPECT_EQ(v.lhs, 5.0);
      EXPECT_EQ(v.rhs, 2.0);
    }
  }
  EXPECT_TRUE(found);
}

TEST(CostProperty, SubstitutionIsSymmetric) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  const EuclideanCostModel euclid(1.0, 1.0, 2, true, true, 1.0);
  const UniformCostModel uniform;
  for (int t = 0; t < 500; ++t) {
    Label a = attr({u(rng), u(rng)}), b = attr({u(rng), u(rng)});
    a.symbol = t % 3;
    b.symbol = (t / 3) % 3;
    EXPECT_DOUBLE_EQ(vertex_cost(euclid, &a, &b), vertex_cost(euclid, &b, &a));
    EXPECT_DOUBLE_EQ(edge_cost(euclid, &a, &b), edge_cost(euclid, &b, &a));
    EXPECT_EQ(vertex_cost(uniform, &a, &b) == 0.0, a == b);
  }
}
