#pragma once

#include <vector>

#include "gsim/assignment.hpp"
#include "gsim/cost_model.hpp"
#include "gsim/graph.hpp"

namespace gsim {

enum class BoundKind { kBranchLb, kBranchConstLb, kBranchUb, kBranchRub };

const char* to_string(BoundKind kind);

// Padded vertex assignment convention used throughout: for graphs with n1
// and n2 vertices the assignment has n1 + n2 rows and columns. Rows
// [0, n1) are the vertices of g1, rows [n1, n1+n2) are epsilon; columns
// [0, n2) are the vertices of g2, the rest epsilon.
struct BoundResult {
  double value = 0.0;
  Assignment assignment;
  BoundKind kind = BoundKind::kBranchLb;

  bool is_lower() const {
    return kind == BoundKind::kBranchLb || kind == BoundKind::kBranchConstLb;
  }
};

// Reusable buffers for bound computations; one per thread.
struct BranchScratch {
  HungarianSolver outer;
  HungarianSolver inner;
  CostMatrix inner_matrix;
};

CostMatrix branch_cost_matrix(const Graph& g1, const Graph& g2, const CostModel& m);

// Same matrix with the edge term computed by edge-label multiset
// intersection; requires m.uniform_edge_costs().
CostMatrix branch_const_cost_matrix(const Graph& g1, const Graph& g2, const CostModel& m);

BoundResult branch_lower_bound(const Graph& g1, const Graph& g2, const CostModel& m,
                               BranchScratch* scratch = nullptr);
BoundResult branch_const_lower_bound(const Graph& g1, const Graph& g2, const CostModel& m,
                                     BranchScratch* scratch = nullptr);

// BranchConst when the model has uniform edge costs, general BRANCH otherwise.
BoundResult branch_distance(const Graph& g1, const Graph& g2, const CostModel& m,
                            BranchScratch* scratch = nullptr);

// Cost of the edit path induced by a padded vertex assignment.
double induced_edit_cost(const Graph& g1, const Graph& g2, const CostModel& m,
                         const std::vector<int>& mapping);

BoundResult branch_upper_bound(const Graph& g1, const Graph& g2, const CostModel& m,
                               const BoundResult& lb);

// First-improvement 2-swap local search on the padded assignment of `ub`.
BoundResult refine_upper_bound(const Graph& g1, const Graph& g2, const CostModel& m,
                               const BoundResult& ub);

// Tabulated induced edit cost of one graph pair; evaluating an assignment
// costs O(n1 + n2 + |E1| + |E2|) without calls into the cost model.
class EditPathEvaluator {
 public:
  EditPathEvaluator(const Graph& g1, const Graph& g2, const CostModel& m);

  double cost(const std::vector<int>& mapping) const;

 private:
  const Graph& g1_;
  const Graph& g2_;
  std::size_t n1_, n2_;
  CostMatrix vertex_;                    // padded vertex costs
  std::vector<double> edge_sub_;         // |E1| x |E2|
  std::vector<double> edge_del_, edge_ins_;
  mutable std::vector<int> phi_, pre_;
};

}  // namespace gsim
