#pragma once

#include <cstddef>
#include <vector>

namespace gsim {

// Dense square cost matrix, row-major.
class CostMatrix {
 public:
  CostMatrix() = default;
  explicit CostMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}
  CostMatrix(std::size_t n, std::vector<double> entries);

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  const std::vector<double>& entries() const { return data_; }

  void resize(std::size_t n, double fill = 0.0) {
    n_ = n;
    data_.assign(n * n, fill);
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct Assignment {
  std::vector<int> mapping;  // mapping[row] = column
  double cost = 0.0;
};

// Sum of c(i, mapping[i]); throws if `mapping` is not a permutation.
double assignment_cost(const CostMatrix& c, const std::vector<int>& mapping);

// Shortest augmenting path Hungarian method, O(n^3). Keeps its scratch
// buffers between calls; one instance per thread.
class HungarianSolver {
 public:
  Assignment solve(const CostMatrix& c);
  // Optimal cost only, skipping the mapping copy.
  double solve_cost(const CostMatrix& c);

 private:
  void run(const CostMatrix& c);

  std::vector<double> u_, v_, minv_;
  std::vector<int> p_, way_;
  std::vector<char> used_;
};

Assignment solve_assignment(const CostMatrix& c);

// Exhaustive search over all n! permutations; n <= 10.
Assignment brute_force_assignment(const CostMatrix& c);

}  // namespace gsim
