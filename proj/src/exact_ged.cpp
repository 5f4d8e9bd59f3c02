#include "gsim/exact_ged.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "gsim/assignment.hpp"
#include "gsim/bounds.hpp"

namespace gsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Open subproblems up to this many vertices get the assignment-based
// remainder bound; larger ones use row/column minima.
constexpr std::size_t kAssignmentBoundLimit = 64;

constexpr int kUnassigned = -2;
constexpr int kDeleted = -1;

// Depth-first branch-and-bound over maps of the vertices of `a` (the larger
// graph) to vertices of `b` or epsilon.
class BranchAndBound {
 public:
  BranchAndBound(const Graph& a, const Graph& b, const CostModel& m, std::uint64_t budget)
      : a_(a), b_(b), n1_(a.order()), n2_(b.order()), budget_(budget) {
    sub_.resize(n1_ * n2_);
    del_.resize(n1_);
    ins_.resize(n2_);
    for (std::size_t u = 0; u < n1_; ++u) {
      del_[u] = m.vertex_deletion(a.vertex(u));
      for (std::size_t x = 0; x < n2_; ++x) sub_[u * n2_ + x] = m.vertex_substitution(a.vertex(u), b.vertex(x));
    }
    for (std::size_t x = 0; x < n2_; ++x) ins_[x] = m.vertex_insertion(b.vertex(x));
    const std::size_t e1 = a.size(), e2 = b.size();
    esub_.resize(e1 * e2);
    edel_.resize(e1);
    eins_.resize(e2);
    for (std::size_t i = 0; i < e1; ++i) {
      edel_[i] = m.edge_deletion(a.edge(i).label);
      for (std::size_t j = 0; j < e2; ++j) {
        esub_[i * e2 + j] = m.edge_substitution(a.edge(i).label, b.edge(j).label);
      }
    }
    for (std::size_t j = 0; j < e2; ++j) eins_[j] = m.edge_insertion(b.edge(j).label);

    order_.resize(n1_);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](VertexIndex x, VertexIndex y) {
      return a.degree(x) > a.degree(y);
    });
    phi_.assign(n1_, kUnassigned);
    pre_.assign(n2_, -1);
    candidates_.resize(n1_);
  }

  // Searches for edit paths cheaper than `incumbent` (by more than kEpsilon)
  // and not above `cutoff`. Stops once an incumbent reaches `floor`.
  double run(double incumbent, double cutoff, double floor) {
    best_ = incumbent;
    cutoff_ = cutoff;
    floor_ = floor;
    done_ = best_ <= floor_ + kEpsilon;
    if (!done_) {
      const double h = remainder_bound(0);
      if (h <= limit()) dfs(0, 0.0);
    }
    return best_;
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  double limit() const { return std::min(best_ - kEpsilon, cutoff_); }

  double edge_between_cost(EdgeIndex e1, EdgeIndex e2) const {
    return esub_[static_cast<std::size_t>(e1) * b_.size() + e2];
  }

  // Vertex cost of u -> x (x < 0: deletion) plus the cost of all edges
  // between u and already mapped vertices, which this choice decides.
  double local_cost(VertexIndex u, int x) const {
    double c = x >= 0 ? sub_[u * n2_ + x] : del_[u];
    for (const auto& nb : a_.neighbors(u)) {
      const int image = phi_[nb.vertex];
      if (image == kUnassigned) continue;
      if (x >= 0 && image >= 0) {
        const EdgeIndex f = b_.edge_between(x, image);
        if (f >= 0) {
          c += edge_between_cost(nb.edge, f);
          continue;
        }
      }
      c += edel_[nb.edge];
    }
    if (x >= 0) {
      for (const auto& nb : b_.neighbors(x)) {
        const int p = pre_[nb.vertex];
        if (p >= 0 && a_.edge_between(u, p) < 0) c += eins_[nb.edge];
      }
    }
    return c;
  }

  // Cost of inserting x and every edge from x to an already used vertex.
  double insertion_cost(int x) const {
    double c = ins_[x];
    for (const auto& nb : b_.neighbors(x)) {
      if (pre_[nb.vertex] >= 0) c += eins_[nb.edge];
    }
    return c;
  }

  double half_open_deletions(VertexIndex u) const {
    double c = 0.0;
    for (const auto& nb : a_.neighbors(u)) {
      if (phi_[nb.vertex] == kUnassigned) c += 0.5 * edel_[nb.edge];
    }
    return c;
  }

  double half_open_insertions(int x) const {
    double c = 0.0;
    for (const auto& nb : b_.neighbors(x)) {
      if (pre_[nb.vertex] < 0) c += 0.5 * eins_[nb.edge];
    }
    return c;
  }

  // Halved optimal assignment between the edges of u and x that lead to
  // still open vertices.
  double open_edge_assignment(VertexIndex u, int x) {
    open_u_.clear();
    open_x_.clear();
    for (const auto& nb : a_.neighbors(u)) {
      if (phi_[nb.vertex] == kUnassigned) open_u_.push_back(nb.edge);
    }
    for (const auto& nb : b_.neighbors(x)) {
      if (pre_[nb.vertex] < 0) open_x_.push_back(nb.edge);
    }
    const std::size_t p = open_u_.size(), q = open_x_.size();
    if (p == 0 && q == 0) return 0.0;
    if (p == 0) {
      double c = 0.0;
      for (auto f : open_x_) c += 0.5 * eins_[f];
      return c;
    }
    if (q == 0) {
      double c = 0.0;
      for (auto e : open_u_) c += 0.5 * edel_[e];
      return c;
    }
    inner_matrix_.resize(p + q, 0.0);
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < q; ++j) {
        inner_matrix_(i, j) = 0.5 * edge_between_cost(open_u_[i], open_x_[j]);
      }
      for (std::size_t j = q; j < p + q; ++j) inner_matrix_(i, j) = 0.5 * edel_[open_u_[i]];
    }
    for (std::size_t j = 0; j < q; ++j) {
      for (std::size_t i = p; i < p + q; ++i) inner_matrix_(i, j) = 0.5 * eins_[open_x_[j]];
    }
    return inner_solver_.solve_cost(inner_matrix_);
  }

  // Admissible estimate of the cost still to pay once order_[0..k) are mapped.
  double remainder_bound(std::size_t k) {
    open_b_.clear();
    for (std::size_t x = 0; x < n2_; ++x) {
      if (pre_[x] < 0) open_b_.push_back(static_cast<int>(x));
    }
    const std::size_t p = n1_ - k, q = open_b_.size();
    if (p == 0) return leaf_cost();
    if (p + q <= kAssignmentBoundLimit) {
      const std::size_t n = p + q;
      remainder_matrix_.resize(n, 0.0);
      for (std::size_t i = 0; i < p; ++i) {
        const VertexIndex u = order_[k + i];
        for (std::size_t j = 0; j < q; ++j) {
          const int x = open_b_[j];
          remainder_matrix_(i, j) = local_cost(u, x) + open_edge_assignment(u, x);
        }
        const double row = local_cost(u, kDeleted) + half_open_deletions(u);
        for (std::size_t j = q; j < n; ++j) remainder_matrix_(i, j) = row;
      }
      for (std::size_t j = 0; j < q; ++j) {
        const int x = open_b_[j];
        const double col = insertion_cost(x) + half_open_insertions(x);
        for (std::size_t i = p; i < n; ++i) remainder_matrix_(i, j) = col;
      }
      return outer_solver_.solve_cost(remainder_matrix_);
    }
    // Row and column minima of the padded matrix without open-edge terms.
    col_min_.assign(q, kInf);
    double rows = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      const VertexIndex u = order_[k + i];
      double best = local_cost(u, kDeleted);
      for (std::size_t j = 0; j < q; ++j) {
        const double c = local_cost(u, open_b_[j]);
        best = std::min(best, c);
        col_min_[j] = std::min(col_min_[j], c);
      }
      rows += best;
    }
    double cols = 0.0;
    for (std::size_t j = 0; j < q; ++j) cols += std::min(col_min_[j], insertion_cost(open_b_[j]));
    return std::max(rows, cols);
  }

  // Completes the map: unused vertices of b and their open edges are inserted.
  double leaf_cost() const {
    double c = 0.0;
    for (std::size_t x = 0; x < n2_; ++x) {
      if (pre_[x] < 0) c += ins_[x];
    }
    for (EdgeIndex f = 0; f < b_.size(); ++f) {
      const auto& e = b_.edge(f);
      if (pre_[e.u] < 0 || pre_[e.v] < 0) c += eins_[f];
    }
    return c;
  }

  void dfs(std::size_t k, double acc) {
    if (done_) return;
    if (++nodes_ > budget_) throw BudgetExhausted(budget_);
    if (k == n1_) {
      const double total = acc + leaf_cost();
      if (total < best_ - kEpsilon && total <= cutoff_) {
        best_ = total;
        done_ = best_ <= floor_ + kEpsilon;
      }
      return;
    }
    const VertexIndex u = order_[k];
    auto& cand = candidates_[k];
    cand.clear();
    for (std::size_t x = 0; x < n2_; ++x) {
      if (pre_[x] < 0) cand.emplace_back(local_cost(u, static_cast<int>(x)), static_cast<int>(x));
    }
    cand.emplace_back(local_cost(u, kDeleted), static_cast<int>(n2_));  // epsilon sorts last on ties
    std::sort(cand.begin(), cand.end());
    for (const auto& [c, target] : cand) {
      if (done_) return;
      const double g = acc + c;
      if (g > limit()) break;
      const int x = target == static_cast<int>(n2_) ? kDeleted : target;
      phi_[u] = x;
      if (x >= 0) pre_[x] = u;
      const double h = remainder_bound(k + 1);
      if (g + h <= limit()) dfs(k + 1, g);
      if (x >= 0) pre_[x] = -1;
      phi_[u] = kUnassigned;
    }
  }

  const Graph& a_;
  const Graph& b_;
  std::size_t n1_, n2_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;

  std::vector<double> sub_, del_, ins_;
  std::vector<double> esub_, edel_, eins_;
  std::vector<VertexIndex> order_;
  std::vector<int> phi_, pre_;
  std::vector<std::vector<std::pair<double, int>>> candidates_;

  double best_ = kInf, cutoff_ = kInf, floor_ = 0.0;
  bool done_ = false;

  HungarianSolver outer_solver_, inner_solver_;
  CostMatrix remainder_matrix_, inner_matrix_;
  std::vector<int> open_b_;
  std::vector<EdgeIndex> open_u_, open_x_;
  std::vector<double> col_min_;
};

struct Bounds {
  double lower;
  double upper;
};

Bounds initial_bounds(const Graph& g1, const Graph& g2, const CostModel& m) {
  const auto lb = branch_distance(g1, g2, m);
  const auto ub = branch_upper_bound(g1, g2, m, lb);
  const auto rub = refine_upper_bound(g1, g2, m, ub);
  return {lb.value, rub.value};
}

// Runs the search with the larger graph as the mapped side.
double search(const Graph& g1, const Graph& g2, const CostModel& m, double incumbent,
              double cutoff, double floor, std::uint64_t budget, SearchStats* stats) {
  double best;
  std::uint64_t nodes;
  if (g2.order() > g1.order()) {
    ReversedCostModel reversed(m);
    BranchAndBound bnb(g2, g1, reversed, budget);
    best = bnb.run(incumbent, cutoff, floor);
    nodes = bnb.nodes();
  } else {
    BranchAndBound bnb(g1, g2, m, budget);
    best = bnb.run(incumbent, cutoff, floor);
    nodes = bnb.nodes();
  }
  if (stats) stats->nodes += nodes;
  return best;
}

}  // namespace

double exact_ged(const Graph& g1, const Graph& g2, const CostModel& m, std::uint64_t budget,
                 SearchStats* stats) {
  if (g1.order() + g2.order() == 0) return 0.0;
  const auto b = initial_bounds(g1, g2, m);
  if (b.upper <= b.lower + kEpsilon) return b.upper;
  return search(g1, g2, m, b.upper, kInf, b.lower, budget, stats);
}

VerifyOutcome verify_threshold(const Graph& g1, const Graph& g2, const CostModel& m, double tau,
                               std::uint64_t budget, SearchStats* stats) {
  if (!(tau >= 0.0)) throw std::invalid_argument("verify_threshold: tau must be >= 0");
  const double cutoff = tau + kEpsilon;
  VerifyOutcome out;
  double distance;
  if (g1.order() + g2.order() == 0) {
    distance = 0.0;
  } else {
    const auto b = initial_bounds(g1, g2, m);
    if (b.lower > cutoff) return out;
    distance = b.upper <= b.lower + kEpsilon
                   ? b.upper
                   : search(g1, g2, m, b.upper, cutoff, b.lower, budget, stats);
  }
  if (distance <= cutoff) {
    out.decision = Decision::kWithin;
    out.distance = distance;
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

class Enumerator {
 public:
  Enumerator(const Graph& g1, const Graph& g2, const CostModel& m)
      : g1_(g1), g2_(g2), m_(m), phi_(g1.order(), -1), pre_(g2.order(), -1) {}

  double run() {
    extend(0);
    return best_;
  }

 private:
  void extend(VertexIndex u) {
    if (u == g1_.order()) {
      best_ = std::min(best_, path_cost());
      return;
    }
    phi_[u] = -1;
    extend(u + 1);
    for (VertexIndex x = 0; x < g2_.order(); ++x) {
      if (pre_[x] >= 0) continue;
      phi_[u] = x;
      pre_[x] = u;
      extend(u + 1);
      pre_[x] = -1;
    }
    phi_[u] = -1;
  }

  // Straight from the definition: every vertex and every vertex pair of
  // both graphs is classified independently.
  double path_cost() const {
    double c = 0.0;
    for (VertexIndex u = 0; u < g1_.order(); ++u) {
      c += vertex_cost(m_, &g1_.vertex(u), phi_[u] >= 0 ? &g2_.vertex(phi_[u]) : nullptr);
    }
    for (VertexIndex x = 0; x < g2_.order(); ++x) {
      if (pre_[x] < 0) c += vertex_cost(m_, nullptr, &g2_.vertex(x));
    }
    for (VertexIndex u = 0; u < g1_.order(); ++u) {
      for (VertexIndex w = u + 1; w < g1_.order(); ++w) {
        const Label* e = g1_.edge_label(u, w);
        const Label* f = phi_[u] >= 0 && phi_[w] >= 0 ? g2_.edge_label(phi_[u], phi_[w]) : nullptr;
        if (e) c += edge_cost(m_, e, f);
      }
    }
    for (VertexIndex x = 0; x < g2_.order(); ++x) {
      for (VertexIndex y = x + 1; y < g2_.order(); ++y) {
        const Label* f = g2_.edge_label(x, y);
        const Label* e = pre_[x] >= 0 && pre_[y] >= 0 ? g1_.edge_label(pre_[x], pre_[y]) : nullptr;
        if (f && !e) c += edge_cost(m_, nullptr, f);
      }
    }
    return c;
  }

  const Graph& g1_;
  const Graph& g2_;
  const CostModel& m_;
  std::vector<int> phi_, pre_;
  double best_ = kInf;
};

}  // namespace

double exhaustive_ged_oracle(const Graph& g1, const Graph& g2, const CostModel& m) {
  if (g1.order() + g2.order() > 16) {
    throw std::invalid_argument("exhaustive_ged_oracle supports |V1| + |V2| <= 16, got " +
                                std::to_string(g1.order() + g2.order()));
  }
  return Enumerator(g1, g2, m).run();
}

}  // namespace gsim
