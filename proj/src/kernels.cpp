#include "gsim/kernels.hpp"

#include <exception>

#include <omp.h>

namespace gsim {

const char* to_string(Stage stage) {
  switch (stage) {
    case Stage::kAcceptedByUb: return "ub";
    case Stage::kAcceptedByRub: return "rub";
    case Stage::kVerifiedWithin: return "verified";
    case Stage::kVerifiedExceeds: return "rejected";
    case Stage::kUnverified: return "unverified";
  }
  return "?";
}

std::vector<BoundResult> branch_scan_serial(const Graph& q, const std::vector<Graph>& db,
                                            const CostModel& m) {
  std::vector<BoundResult> out(db.size());
  BranchScratch scratch;
  for (std::size_t i = 0; i < db.size(); ++i) out[i] = branch_distance(q, db[i], m, &scratch);
  return out;
}

std::vector<BoundResult> branch_scan_omp(const Graph& q, const std::vector<Graph>& db,
                                         const CostModel& m, int workers) {
  std::vector<BoundResult> out(db.size());
  const auto n = static_cast<std::int64_t>(db.size());
  std::exception_ptr error;
#pragma omp parallel num_threads(workers)
  {
    BranchScratch scratch;
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        out[i] = branch_distance(q, db[i], m, &scratch);
      } catch (...) {
#pragma omp critical
        if (!error) error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

std::vector<BoundResult> branch_scan(const Graph& q, const std::vector<Graph>& db,
                                     const CostModel& m, int workers) {
  return workers <= 1 ? branch_scan_serial(q, db, m) : branch_scan_omp(q, db, m, workers);
}

CandidateOutcome settle_candidate(const Graph& q, const Candidate& c, const CostModel& m,
                                  double r, std::uint64_t budget) {
  CandidateOutcome out;
  const double limit = r + kEpsilon;
  const Graph& g = *c.graph;
  const BoundResult ub = branch_upper_bound(q, g, m, *c.lower_bound);
  out.upper_bound = ub.value;
  // A bound that meets the lower bound is the exact distance.
  const double lb = c.lower_bound->value;
  if (ub.value <= limit) {
    out.stage = Stage::kAcceptedByUb;
    if (ub.value <= lb + kEpsilon) out.distance = ub.value;
    return out;
  }
  const BoundResult rub = refine_upper_bound(q, g, m, ub);
  out.refined_upper_bound = rub.value;
  if (rub.value <= limit) {
    out.stage = Stage::kAcceptedByRub;
    if (rub.value <= lb + kEpsilon) out.distance = rub.value;
    return out;
  }
  SearchStats stats;
  try {
    const VerifyOutcome v = verify_threshold(q, g, m, r, budget, &stats);
    out.stage = v.decision == Decision::kWithin ? Stage::kVerifiedWithin : Stage::kVerifiedExceeds;
    out.distance = v.distance;
  } catch (const BudgetExhausted&) {
    out.stage = Stage::kUnverified;
    stats.nodes = budget;
  }
  out.search_nodes = stats.nodes;
  return out;
}

std::vector<CandidateOutcome> settle_candidates_serial(const Graph& q,
                                                       const std::vector<Candidate>& cs,
                                                       const CostModel& m, double r,
                                                       std::uint64_t budget) {
  std::vector<CandidateOutcome> out(cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i) out[i] = settle_candidate(q, cs[i], m, r, budget);
  return out;
}

std::vector<CandidateOutcome> settle_candidates_omp(const Graph& q,
                                                    const std::vector<Candidate>& cs,
                                                    const CostModel& m, double r,
                                                    std::uint64_t budget, int workers) {
  std::vector<CandidateOutcome> out(cs.size());
  const auto n = static_cast<std::int64_t>(cs.size());
  std::exception_ptr error;
  // Verification cost varies by orders of magnitude between candidates.
#pragma omp parallel for num_threads(workers) schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      out[i] = settle_candidate(q, cs[i], m, r, budget);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

std::vector<CandidateOutcome> settle_candidates(const Graph& q, const std::vector<Candidate>& cs,
                                                const CostModel& m, double r,
                                                std::uint64_t budget, int workers) {
  return workers <= 1 ? settle_candidates_serial(q, cs, m, r, budget)
                      : settle_candidates_omp(q, cs, m, r, budget, workers);
}

}  // namespace gsim
