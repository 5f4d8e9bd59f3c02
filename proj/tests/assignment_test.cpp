#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "gsim/assignment.hpp"

using namespace gsim;

namespace {

// Independent oracle: dynamic program over subsets of used columns.
double subset_dp(const CostMatrix& c) {
  const std::size_t n = c.size();
  std::vector<double> best(std::size_t{1} << n, std::numeric_limits<double>::infinity());
  best[0] = 0.0;
  for (std::size_t mask = 0; mask < best.size(); ++mask) {
    const auto row = static_cast<std::size_t>(__builtin_popcountll(mask));
    if (row >= n || std::isinf(best[mask])) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask & (std::size_t{1} << j)) continue;
      auto& next = best[mask | (std::size_t{1} << j)];
      next = std::min(next, best[mask] + c(row, j));
    }
  }
  return best.back();
}

CostMatrix random_matrix(std::mt19937_64& rng, std::size_t n, bool integral) {
  std::uniform_real_distribution<double> u(0.0, 10.0);
  CostMatrix c(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) c(i, j) = integral ? std::floor(u(rng) / 3) : u(rng);
  }
  return c;
}

}  // namespace

TEST(Assignment, TwoByTwo) {
  const CostMatrix c(2, {1, 2, 3, 0});
  const auto a = solve_assignment(c);
  EXPECT_EQ(a.cost, 1.0);
  EXPECT_EQ(a.mapping, (std::vector<int>{0, 1}));
  EXPECT_EQ(brute_force_assignment(c).cost, 1.0);
}

TEST(Assignment, ZeroDiagonal) {
  CostMatrix c(5, 3.0);
  for (std::size_t i = 0; i < 5; ++i) c(i, i) = 0.0;
  EXPECT_EQ(solve_assignment(c).cost, 0.0);
  EXPECT_EQ(brute_force_assignment(c).cost, 0.0);
}

TEST(Assignment, SevenBySevenMatchesOracles) {
  std::mt19937_64 rng(77);
  const auto c = random_matrix(rng, 7, false);
  const double h = solve_assignment(c).cost;
  EXPECT_NEAR(h, brute_force_assignment(c).cost, 1e-9);
  EXPECT_NEAR(h, subset_dp(c), 1e-9);
}

TEST(Assignment, EmptyMatrix) {
  const auto a = solve_assignment(CostMatrix(0));
  EXPECT_EQ(a.cost, 0.0);
  EXPECT_TRUE(a.mapping.empty());
}

TEST(Assignment, RejectsNonFiniteEntries) {
  CostMatrix c(2, 1.0);
  c(0, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(solve_assignment(c), std::invalid_argument);
  c(0, 1) = std::nan("");
  EXPECT_THROW(solve_assignment(c), std::invalid_argument);
}

TEST(Assignment, BruteForceSizeGuard) {
  EXPECT_THROW(brute_force_assignment(CostMatrix(11)), std::invalid_argument);
}

TEST(Assignment, CostOfMappingValidatesBijection) {
  const CostMatrix c(2, {1, 2, 3, 0});
  EXPECT_EQ(assignment_cost(c, {1, 0}), 5.0);
  EXPECT_THROW(assignment_cost(c, {0, 0}), std::invalid_argument);
  EXPECT_THROW(assignment_cost(c, {0}), std::invalid_argument);
}

TEST(AssignmentProperty, HungarianIsOptimal) {
  std::mt19937_64 rng(1);
  HungarianSolver solver;  // reused across sizes
  for (int t = 0; t < 400; ++t) {
    const std::size_t n = 1 + t % 8;
    const auto c = random_matrix(rng, n, t % 2 == 0);
    const auto a = solver.solve(c);
    EXPECT_NEAR(a.cost, subset_dp(c), 1e-9);
    EXPECT_NEAR(a.cost, assignment_cost(c, a.mapping), 1e-12);
    EXPECT_NEAR(solver.solve_cost(c), a.cost, 1e-12);
  }
}

TEST(AssignmentProperty, ConstantShiftAddsNTimesK) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + t % 8;
    auto c = random_matrix(rng, n, false);
    const double base = solve_assignment(c).cost;
    const double k = 0.25 * (t % 7);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) c(i, j) += k;
    }
    EXPECT_NEAR(solve_assignment(c).cost, base + n * k, 1e-9);
  }
}

TEST(AssignmentProperty, RowPermutationKeepsCost) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + t % 7;
    const auto c = random_matrix(rng, n, false);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    CostMatrix p(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) p(i, j) = c(perm[i], j);
    }
    const auto a = solve_assignment(c), b = solve_assignment(p);
    EXPECT_NEAR(a.cost, b.cost, 1e-9);
    // Row i of p is row perm[i] of c, so b maps it to an optimal column for that row.
    std::vector<int> back(n);
    for (std::size_t i = 0; i < n; ++i) back[perm[i]] = b.mapping[i];
    EXPECT_NEAR(assignment_cost(c, back), a.cost, 1e-9);
  }
}

TEST(AssignmentProperty, Deterministic) {
  std::mt19937_64 rng(4);
  const auto c = random_matrix(rng, 8, true);  // many ties
  const auto a = solve_assignment(c), b = solve_assignment(c);
  EXPECT_EQ(a.mapping, b.mapping);
}
