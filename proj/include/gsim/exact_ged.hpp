#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "gsim/cost_model.hpp"
#include "gsim/graph.hpp"

namespace gsim {

inline constexpr std::uint64_t kDefaultSearchBudget = 10'000'000;

// Raised when the branch-and-bound search exceeds its node budget. The pair
// is then unverified; no distance is reported for it.
class BudgetExhausted : public std::runtime_error {
 public:
  explicit BudgetExhausted(std::uint64_t budget)
      : std::runtime_error("search budget of " + std::to_string(budget) +
                           " nodes exhausted; pair unverified"),
        budget_(budget) {}
  std::uint64_t budget() const { return budget_; }

 private:
  std::uint64_t budget_;
};

struct SearchStats {
  std::uint64_t nodes = 0;
};

// Exact graph edit distance by depth-first branch-and-bound over partial
// vertex maps. The incumbent starts at the refined BRANCH upper bound.
double exact_ged(const Graph& g1, const Graph& g2, const CostModel& m,
                 std::uint64_t budget = kDefaultSearchBudget, SearchStats* stats = nullptr);

enum class Decision { kWithin, kExceeds };

struct VerifyOutcome {
  Decision decision = Decision::kExceeds;
  std::optional<double> distance;  // exact distance, present iff within
};

// Decides exact_ged(g1, g2) <= tau (with kEpsilon slack). Branches whose
// admissible estimate exceeds tau are cut.
VerifyOutcome verify_threshold(const Graph& g1, const Graph& g2, const CostModel& m, double tau,
                               std::uint64_t budget = kDefaultSearchBudget,
                               SearchStats* stats = nullptr);

// Minimum edit-path cost over every vertex map (injective partial map from
// g1 into g2; the rest deleted/inserted), enumerated without pruning.
// Requires |V1| + |V2| <= 16.
double exhaustive_ged_oracle(const Graph& g1, const Graph& g2, const CostModel& m);

}  // namespace gsim
