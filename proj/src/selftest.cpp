#include "gsim/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

#include "gsim/assignment.hpp"
#include "gsim/bounds.hpp"
#include "gsim/exact_ged.hpp"
#include "gsim/index_io.hpp"
#include "gsim/query_engine.hpp"
#include "gsim/synthetic.hpp"

namespace gsim {

namespace {

struct Suite {
  std::ostream& out;
  int failed = 0;

  void report(const std::string& name, bool ok, const std::string& detail) {
    out << (ok ? "[pass] " : "[FAIL] ") << name << ": " << detail << "\n";
    if (!ok) ++failed;
  }
};

SyntheticOptions small_graphs(std::uint64_t seed, int max_vertices) {
  SyntheticOptions o;
  o.min_vertices = 2;
  o.max_vertices = max_vertices;
  o.extra_edge_prob = 0.25;
  o.seed = seed;
  return o;
}

void sandwich(Suite& s, std::uint64_t seed) {
  auto o = small_graphs(seed, 6);
  o.graphs = 60;
  const auto db = synthetic_database(o);
  const UniformCostModel m;
  int bad = 0;
  for (std::size_t i = 0; i + 1 < db.size(); i += 2) {
    const auto lb = branch_distance(db[i], db[i + 1], m);
    const auto ub = branch_upper_bound(db[i], db[i + 1], m, lb);
    const auto rub = refine_upper_bound(db[i], db[i + 1], m, ub);
    const double d = exhaustive_ged_oracle(db[i], db[i + 1], m);
    if (lb.value > d + kEpsilon || d > rub.value + kEpsilon || rub.value > ub.value + kEpsilon) {
      ++bad;
    }
  }
  s.report("bound sandwich", bad == 0, std::to_string(db.size() / 2) + " pairs, " +
                                           std::to_string(bad) + " violations");
}

void pseudo_metric(Suite& s, std::uint64_t seed) {
  auto o = small_graphs(seed + 1, 9);
  o.graphs = 60;
  const auto db = synthetic_database(o);
  const UniformCostModel m;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, db.size() - 1);
  int bad = 0;
  for (int t = 0; t < 200; ++t) {
    const auto &a = db[pick(rng)], &b = db[pick(rng)], &c = db[pick(rng)];
    const double ab = branch_distance(a, b, m).value, ba = branch_distance(b, a, m).value;
    const double bc = branch_distance(b, c, m).value, ac = branch_distance(a, c, m).value;
    if (std::abs(ab - ba) > kEpsilon || ac > ab + bc + kEpsilon ||
        branch_distance(a, a, m).value > kEpsilon) {
      ++bad;
    }
  }
  s.report("pseudo-metric", bad == 0, "200 triples, " + std::to_string(bad) + " violations");
}

void assignment_oracle(Suite& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> cost(0.0, 10.0);
  int bad = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + t % 7;
    CostMatrix c(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) c(i, j) = t % 3 ? cost(rng) : std::floor(cost(rng) / 4);
    }
    if (std::abs(solve_assignment(c).cost - brute_force_assignment(c).cost) > kEpsilon) ++bad;
  }
  s.report("assignment oracle", bad == 0, "100 matrices, " + std::to_string(bad) + " mismatches");
}

bool same_results(const QueryReport& a, const QueryReport& b) {
  if (a.results.size() != b.results.size()) return false;
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    if (a.results[i].id != b.results[i].id) return false;
  }
  return true;
}

void index_equivalence(Suite& s, std::uint64_t seed) {
  SyntheticOptions o;
  o.graphs = 150;
  o.max_vertices = 9;
  o.clusters = 6;
  o.seed = seed;
  const auto db = synthetic_database(o);
  const UniformCostModel m;
  auto space = branch_space(db, m);
  auto vp = build_index(space, {IndexKind::kVpTree, 5, 1.2, 8, seed});
  auto cover = build_index(space, {IndexKind::kCoverTree, 5, 1.2, 8, seed});
  const bool audits = vp->audit(space).ok() && cover->audit(space).ok();
  const QueryEngine scan(db, m), via_vp(db, m, vp.get()), via_cover(db, m, cover.get());
  int bad = 0, checked = 0;
  for (const auto& q : sample_queries(db, 8, seed)) {
    for (double r : {1.0, 2.0, 3.0}) {
      const auto base = scan.range(q, r);
      if (!same_results(base, via_vp.range(q, r)) || !same_results(base, via_cover.range(q, r))) {
        ++bad;
      }
      ++checked;
    }
  }
  s.report("index equivalence", bad == 0 && audits,
           std::to_string(checked) + " range queries, " + std::to_string(bad) +
               " mismatches, audits " + (audits ? "clean" : "failed"));
}

void knn_optimality(Suite& s, std::uint64_t seed) {
  SyntheticOptions o;
  o.graphs = 120;
  o.max_vertices = 8;
  o.clusters = 6;
  o.seed = seed + 7;
  const auto db = synthetic_database(o);
  const UniformCostModel m;
  auto space = branch_space(db, m);
  auto cover = build_index(space, {IndexKind::kCoverTree, 5, 1.2, 8, seed});
  const QueryEngine scan(db, m), via_cover(db, m, cover.get());
  int bad = 0, checked = 0;
  for (const auto& q : sample_queries(db, 5, seed + 1)) {
    for (std::size_t k = 1; k <= 3; ++k) {
      const auto a = scan.knn(q, k), b = via_cover.knn(q, k);
      std::vector<double> da, db_;
      for (const auto& r : a.results) da.push_back(*r.distance);
      for (const auto& r : b.results) db_.push_back(*r.distance);
      bool ok = da == db_ && a.kth_distance && a.result_size >= k;
      for (const auto& [id, lb] : a.searched) ok = ok && lb <= *a.kth_distance + kEpsilon;
      bad += ok ? 0 : 1;
      ++checked;
    }
  }
  s.report("knn optimality", bad == 0,
           std::to_string(checked) + " queries, " + std::to_string(bad) + " failures");
}

void metricity(Suite& s, std::uint64_t seed) {
  SyntheticOptions o;
  o.graphs = 30;
  o.symbols = 0;
  o.vertex_dim = 2;
  o.seed = seed;
  const auto db = synthetic_database(o);
  // Deleting a vertex is far cheaper than moving it: c(u,v) > c(u,e) + c(e,v).
  const EuclideanCostModel broken(0.05, 1.0);
  const auto rep = validate_metricity(broken, db, 20000, seed);
  s.report("metricity validator", !rep.ok(),
           "corrupted model flagged with " + std::to_string(rep.violations.size()) +
               " violations");
}

void budget_path(Suite& s, std::uint64_t seed) {
  SyntheticOptions o;
  o.graphs = 40;
  o.min_vertices = 8;
  o.max_vertices = 10;
  o.seed = seed + 3;
  const auto db = synthetic_database(o);
  const UniformCostModel m;
  const QueryEngine engine(db, m, nullptr, {1, 1});
  std::size_t unverified = 0;
  bool flagged = true;
  for (const auto& q : sample_queries(db, 3, seed)) {
    const auto rep = engine.range(q, 6.0);
    unverified += rep.unverified.size();
    flagged = flagged && rep.partial == !rep.unverified.empty();
  }
  s.report("budget exhaustion", unverified > 0 && flagged,
           std::to_string(unverified) + " unverified pairs reported as partial");
}

}  // namespace

int run_selftest(std::ostream& out, std::uint64_t seed) {
  Suite s{out};
  sandwich(s, seed);
  pseudo_metric(s, seed);
  assignment_oracle(s, seed);
  index_equivalence(s, seed);
  knn_optimality(s, seed);
  metricity(s, seed);
  budget_path(s, seed);
  out << (s.failed == 0 ? "selftest passed" : "selftest FAILED") << "\n";
  return s.failed;
}

}  // namespace gsim
