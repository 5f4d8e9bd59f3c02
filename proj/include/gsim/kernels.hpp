#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gsim/bounds.hpp"
#include "gsim/exact_ged.hpp"
#include "gsim/graph.hpp"

namespace gsim {

// Two implementations of each hot loop: a plain serial reference and an
// OpenMP version. Both must produce identical output; the dispatchers pick
// the serial one for workers <= 1.

// BRANCH distance (with its assignment) from q to every database graph.
std::vector<BoundResult> branch_scan_serial(const Graph& q, const std::vector<Graph>& db,
                                            const CostModel& m);
std::vector<BoundResult> branch_scan_omp(const Graph& q, const std::vector<Graph>& db,
                                         const CostModel& m, int workers);
std::vector<BoundResult> branch_scan(const Graph& q, const std::vector<Graph>& db,
                                     const CostModel& m, int workers);

// Where the filter pipeline settled one candidate.
enum class Stage {
  kAcceptedByUb,
  kAcceptedByRub,
  kVerifiedWithin,
  kVerifiedExceeds,
  kUnverified,  // search budget exhausted
};

const char* to_string(Stage stage);

struct CandidateOutcome {
  Stage stage = Stage::kUnverified;
  double upper_bound = 0.0;
  std::optional<double> refined_upper_bound;
  std::optional<double> distance;  // exact distance, only after verification
  std::uint64_t search_nodes = 0;
};

struct Candidate {
  const Graph* graph = nullptr;
  const BoundResult* lower_bound = nullptr;
};

// Upper bound, refined upper bound, then threshold verification, stopping at
// the first stage that settles the candidate against r.
CandidateOutcome settle_candidate(const Graph& q, const Candidate& c, const CostModel& m,
                                  double r, std::uint64_t budget);

std::vector<CandidateOutcome> settle_candidates_serial(const Graph& q,
                                                       const std::vector<Candidate>& cs,
                                                       const CostModel& m, double r,
                                                       std::uint64_t budget);
std::vector<CandidateOutcome> settle_candidates_omp(const Graph& q,
                                                    const std::vector<Candidate>& cs,
                                                    const CostModel& m, double r,
                                                    std::uint64_t budget, int workers);
std::vector<CandidateOutcome> settle_candidates(const Graph& q, const std::vector<Candidate>& cs,
                                                const CostModel& m, double r,
                                                std::uint64_t budget, int workers);

}  // namespace gsim
