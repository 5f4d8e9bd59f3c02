#include "gsim/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gsim {

CostMatrix::CostMatrix(std::size_t n, std::vector<double> entries)
    : n_(n), data_(std::move(entries)) {
  if (data_.size() != n * n) throw std::invalid_argument("cost matrix is not square");
}

double assignment_cost(const CostMatrix& c, const std::vector<int>& mapping) {
  const auto n = c.size();
  if (mapping.size() != n) throw std::invalid_argument("mapping size differs from matrix size");
  std::vector<char> seen(n, 0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const int j = mapping[i];
    if (j < 0 || static_cast<std::size_t>(j) >= n || seen[j]) {
      throw std::invalid_argument("mapping is not a bijection");
    }
    seen[j] = 1;
    total += c(i, j);
  }
  return total;
}

namespace {

void check_entries(const CostMatrix& c) {
  for (double x : c.entries()) {
    if (!std::isfinite(x)) throw std::invalid_argument("cost matrix has a non-finite entry");
  }
}

}  // namespace

void HungarianSolver::run(const CostMatrix& c) {
  check_entries(c);
  const int n = static_cast<int>(c.size());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  u_.assign(n + 1, 0.0);
  v_.assign(n + 1, 0.0);
  p_.assign(n + 1, 0);
  way_.assign(n + 1, 0);
  // 1-based; p_[j] is the row matched to column j, column 0 is a sentinel.
  for (int i = 1; i <= n; ++i) {
    p_[0] = i;
    int j0 = 0;
    minv_.assign(n + 1, kInf);
    used_.assign(n + 1, 0);
    do {
      used_[j0] = 1;
      const int i0 = p_[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used_[j]) continue;
        const double cur = c(i0 - 1, j - 1) - u_[i0] - v_[j];
        if (cur < minv_[j]) {
          minv_[j] = cur;
          way_[j] = j0;
        }
        if (minv_[j] < delta) {
          delta = minv_[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used_[j]) {
          u_[p_[j]] += delta;
          v_[j] -= delta;
        } else {
          minv_[j] -= delta;
        }
      }
      j0 = j1;
    } while (p_[j0] != 0);
    do {
      const int j1 = way_[j0];
      p_[j0] = p_[j1];
      j0 = j1;
    } while (j0 != 0);
  }
}

Assignment HungarianSolver::solve(const CostMatrix& c) {
  Assignment a;
  const auto n = c.size();
  a.mapping.assign(n, -1);
  if (n == 0) return a;
  run(c);
  for (std::size_t j = 1; j <= n; ++j) a.mapping[p_[j] - 1] = static_cast<int>(j - 1);
  // Summing the matrix entries avoids drift in the dual variables.
  for (std::size_t i = 0; i < n; ++i) a.cost += c(i, a.mapping[i]);
  return a;
}

double HungarianSolver::solve_cost(const CostMatrix& c) {
  const auto n = c.size();
  if (n == 0) return 0.0;
  run(c);
  double cost = 0.0;
  for (std::size_t j = 1; j <= n; ++j) cost += c(p_[j] - 1, j - 1);
  return cost;
}

Assignment solve_assignment(const CostMatrix& c) {
  HungarianSolver solver;
  return solver.solve(c);
}

Assignment brute_force_assignment(const CostMatrix& c) {
  const auto n = c.size();
  if (n > 10) {
    throw std::invalid_argument("brute_force_assignment supports n <= 10, got " +
                                std::to_string(n));
  }
  check_entries(c);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Assignment best;
  best.mapping = perm;
  best.cost = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += c(i, perm[i]);
    if (total < best.cost) {
      best.cost = total;
      best.mapping = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (n == 0) best.cost = 0.0;
  return best;
}

}  // namespace gsim
