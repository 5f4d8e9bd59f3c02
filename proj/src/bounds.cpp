#include "gsim/bounds.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace gsim {

const char* to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::kBranchLb: return "branch_lb";
    case BoundKind::kBranchConstLb: return "branch_const_lb";
    case BoundKind::kBranchUb: return "branch_ub";
    case BoundKind::kBranchRub: return "branch_rub";
  }
  return "?";
}

namespace {

// Half the deletion (g1) or insertion (g2) cost of all edges at each vertex.
std::vector<double> half_edge_deletions(const Graph& g, const CostModel& m) {
  std::vector<double> out(g.order(), 0.0);
  for (VertexIndex v = 0; v < g.order(); ++v) {
    for (const auto& nb : g.neighbors(v)) out[v] += 0.5 * m.edge_deletion(g.edge(nb.edge).label);
  }
  return out;
}

std::vector<double> half_edge_insertions(const Graph& g, const CostModel& m) {
  std::vector<double> out(g.order(), 0.0);
  for (VertexIndex v = 0; v < g.order(); ++v) {
    for (const auto& nb : g.neighbors(v)) out[v] += 0.5 * m.edge_insertion(g.edge(nb.edge).label);
  }
  return out;
}

// Optimal assignment of the incident edges of u and v under halved edge
// costs, padded to deg(u) + deg(v).
double edge_assignment_cost(const Graph& g1, VertexIndex u, const Graph& g2, VertexIndex v,
                            const CostModel& m, double half_del_u, double half_ins_v,
                            BranchScratch& scratch) {
  const auto nu = g1.neighbors(u);
  const auto nv = g2.neighbors(v);
  const std::size_t a = nu.size(), b = nv.size();
  if (a == 0) return half_ins_v;
  if (b == 0) return half_del_u;
  auto& c = scratch.inner_matrix;
  c.resize(a + b, 0.0);
  for (std::size_t i = 0; i < a; ++i) {
    const auto& lu = g1.edge(nu[i].edge).label;
    for (std::size_t j = 0; j < b; ++j) {
      c(i, j) = 0.5 * m.edge_substitution(lu, g2.edge(nv[j].edge).label);
    }
    const double del = 0.5 * m.edge_deletion(lu);
    for (std::size_t j = b; j < a + b; ++j) c(i, j) = del;
  }
  for (std::size_t j = 0; j < b; ++j) {
    const double ins = 0.5 * m.edge_insertion(g2.edge(nv[j].edge).label);
    for (std::size_t i = a; i < a + b; ++i) c(i, j) = ins;
  }
  return scratch.inner.solve_cost(c);
}

// Size of the multiset intersection of the incident edge labels of u and v.
std::size_t common_edge_labels(const Graph& g1, VertexIndex u, const Graph& g2, VertexIndex v) {
  const auto lu = g1.incident_by_label(u);
  const auto lv = g2.incident_by_label(v);
  std::size_t i = 0, j = 0, common = 0;
  while (i < lu.size() && j < lv.size()) {
    const auto& x = g1.edge(lu[i]).label;
    const auto& y = g2.edge(lv[j]).label;
    if (x < y) {
      ++i;
    } else if (y < x) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  return common;
}

template <typename EdgeTerm>
CostMatrix build_matrix(const Graph& g1, const Graph& g2, const CostModel& m, EdgeTerm edge_term) {
  const std::size_t n1 = g1.order(), n2 = g2.order(), n = n1 + n2;
  const auto del = half_edge_deletions(g1, m);
  const auto ins = half_edge_insertions(g2, m);
  CostMatrix c(n, 0.0);
  for (std::size_t i = 0; i < n1; ++i) {
    const auto& lu = g1.vertex(i);
    for (std::size_t j = 0; j < n2; ++j) {
      c(i, j) = m.vertex_substitution(lu, g2.vertex(j)) + edge_term(i, j, del[i], ins[j]);
    }
    const double row = m.vertex_deletion(lu) + del[i];
    for (std::size_t j = n2; j < n; ++j) c(i, j) = row;
  }
  for (std::size_t j = 0; j < n2; ++j) {
    const double col = m.vertex_insertion(g2.vertex(j)) + ins[j];
    for (std::size_t i = n1; i < n; ++i) c(i, j) = col;
  }
  return c;
}

CostMatrix general_matrix(const Graph& g1, const Graph& g2, const CostModel& m,
                          BranchScratch& scratch) {
  return build_matrix(g1, g2, m, [&](std::size_t i, std::size_t j, double del, double ins) {
    return edge_assignment_cost(g1, static_cast<VertexIndex>(i), g2, static_cast<VertexIndex>(j),
                                m, del, ins, scratch);
  });
}

CostMatrix const_matrix(const Graph& g1, const Graph& g2, const CostModel& m) {
  if (!m.uniform_edge_costs()) {
    throw std::logic_error("BranchConst requires uniform edge costs, model is " + m.describe());
  }
  const double gamma = m.edge_gamma();
  return build_matrix(g1, g2, m, [&](std::size_t i, std::size_t j, double, double) {
    const auto u = static_cast<VertexIndex>(i);
    const auto v = static_cast<VertexIndex>(j);
    const std::size_t larger = std::max<std::size_t>(g1.degree(u), g2.degree(v));
    return 0.5 * gamma * static_cast<double>(larger - common_edge_labels(g1, u, g2, v));
  });
}

}  // namespace

CostMatrix branch_cost_matrix(const Graph& g1, const Graph& g2, const CostModel& m) {
  BranchScratch scratch;
  return general_matrix(g1, g2, m, scratch);
}

CostMatrix branch_const_cost_matrix(const Graph& g1, const Graph& g2, const CostModel& m) {
  return const_matrix(g1, g2, m);
}

BoundResult branch_lower_bound(const Graph& g1, const Graph& g2, const CostModel& m,
                               BranchScratch* scratch) {
  BranchScratch local;
  auto& s = scratch ? *scratch : local;
  const auto c = general_matrix(g1, g2, m, s);
  BoundResult r;
  r.assignment = s.outer.solve(c);
  r.value = r.assignment.cost;
  r.kind = BoundKind::kBranchLb;
  return r;
}

BoundResult branch_const_lower_bound(const Graph& g1, const Graph& g2, const CostModel& m,
                                     BranchScratch* scratch) {
  BranchScratch local;
  auto& s = scratch ? *scratch : local;
  const auto c = const_matrix(g1, g2, m);
  BoundResult r;
  r.assignment = s.outer.solve(c);
  r.value = r.assignment.cost;
  r.kind = BoundKind::kBranchConstLb;
  return r;
}

BoundResult branch_distance(const Graph& g1, const Graph& g2, const CostModel& m,
                            BranchScratch* scratch) {
  return m.uniform_edge_costs() ? branch_const_lower_bound(g1, g2, m, scratch)
                                : branch_lower_bound(g1, g2, m, scratch);
}

namespace {

// phi[u] = image of g1 vertex u in g2 (-1 for deletion); pre[x] = preimage
// of g2 vertex x (-1 for insertion).
void split_mapping(std::size_t n1, std::size_t n2, const std::vector<int>& mapping,
                   std::vector<int>& phi, std::vector<int>& pre) {
  const std::size_t n = n1 + n2;
  if (mapping.size() != n) {
    throw std::invalid_argument("padded assignment has size " + std::to_string(mapping.size()) +
                                ", expected " + std::to_string(n));
  }
  std::vector<char> seen(n, 0);
  phi.assign(n1, -1);
  pre.assign(n2, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const int j = mapping[i];
    if (j < 0 || static_cast<std::size_t>(j) >= n || seen[j]) {
      throw std::invalid_argument("padded assignment is not a bijection");
    }
    seen[j] = 1;
    if (static_cast<std::size_t>(j) < n2) {
      if (i < n1) {
        phi[i] = j;
        pre[j] = static_cast<int>(i);
      }
    }
  }
}

}  // namespace

double induced_edit_cost(const Graph& g1, const Graph& g2, const CostModel& m,
                         const std::vector<int>& mapping) {
  std::vector<int> phi, pre;
  split_mapping(g1.order(), g2.order(), mapping, phi, pre);
  double cost = 0.0;
  for (VertexIndex u = 0; u < g1.order(); ++u) {
    cost += phi[u] >= 0 ? m.vertex_substitution(g1.vertex(u), g2.vertex(phi[u]))
                        : m.vertex_deletion(g1.vertex(u));
  }
  for (VertexIndex x = 0; x < g2.order(); ++x) {
    if (pre[x] < 0) cost += m.vertex_insertion(g2.vertex(x));
  }
  for (const auto& e : g1.edges()) {
    const Label* image = nullptr;
    if (phi[e.u] >= 0 && phi[e.v] >= 0) image = g2.edge_label(phi[e.u], phi[e.v]);
    cost += image ? m.edge_substitution(e.label, *image) : m.edge_deletion(e.label);
  }
  for (const auto& e : g2.edges()) {
    const bool matched = pre[e.u] >= 0 && pre[e.v] >= 0 && g1.edge_between(pre[e.u], pre[e.v]) >= 0;
    if (!matched) cost += m.edge_insertion(e.label);
  }
  return cost;
}

BoundResult branch_upper_bound(const Graph& g1, const Graph& g2, const CostModel& m,
                               const BoundResult& lb) {
  if (!lb.is_lower()) throw std::invalid_argument("branch_upper_bound expects a lower bound result");
  if (lb.assignment.mapping.empty() && g1.order() + g2.order() > 0) {
    throw std::invalid_argument("lower bound result carries no assignment");
  }
  BoundResult ub;
  ub.assignment.mapping = lb.assignment.mapping;
  ub.value = induced_edit_cost(g1, g2, m, ub.assignment.mapping);
  ub.assignment.cost = ub.value;
  ub.kind = BoundKind::kBranchUb;
  return ub;
}

EditPathEvaluator::EditPathEvaluator(const Graph& g1, const Graph& g2, const CostModel& m)
    : g1_(g1), g2_(g2), n1_(g1.order()), n2_(g2.order()), vertex_(n1_ + n2_, 0.0) {
  const std::size_t n = n1_ + n2_;
  for (std::size_t i = 0; i < n1_; ++i) {
    for (std::size_t j = 0; j < n2_; ++j) {
      vertex_(i, j) = m.vertex_substitution(g1.vertex(i), g2.vertex(j));
    }
    const double del = m.vertex_deletion(g1.vertex(i));
    for (std::size_t j = n2_; j < n; ++j) vertex_(i, j) = del;
  }
  for (std::size_t j = 0; j < n2_; ++j) {
    const double ins = m.vertex_insertion(g2.vertex(j));
    for (std::size_t i = n1_; i < n; ++i) vertex_(i, j) = ins;
  }
  const std::size_t e1 = g1.size(), e2 = g2.size();
  edge_sub_.resize(e1 * e2);
  edge_del_.resize(e1);
  edge_ins_.resize(e2);
  for (std::size_t a = 0; a < e1; ++a) {
    edge_del_[a] = m.edge_deletion(g1.edge(a).label);
    for (std::size_t b = 0; b < e2; ++b) {
      edge_sub_[a * e2 + b] = m.edge_substitution(g1.edge(a).label, g2.edge(b).label);
    }
  }
  for (std::size_t b = 0; b < e2; ++b) edge_ins_[b] = m.edge_insertion(g2.edge(b).label);
}

double EditPathEvaluator::cost(const std::vector<int>& mapping) const {
  const std::size_t n = n1_ + n2_;
  phi_.assign(n1_, -1);
  pre_.assign(n2_, -1);
  double cost = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const int j = mapping[i];
    cost += vertex_(i, j);
    if (i < n1_ && static_cast<std::size_t>(j) < n2_) {
      phi_[i] = j;
      pre_[j] = static_cast<int>(i);
    }
  }
  const std::size_t e2 = g2_.size();
  for (EdgeIndex a = 0; a < g1_.size(); ++a) {
    const auto& e = g1_.edge(a);
    EdgeIndex b = -1;
    if (phi_[e.u] >= 0 && phi_[e.v] >= 0) b = g2_.edge_between(phi_[e.u], phi_[e.v]);
    cost += b >= 0 ? edge_sub_[a * e2 + b] : edge_del_[a];
  }
  for (EdgeIndex b = 0; b < g2_.size(); ++b) {
    const auto& e = g2_.edge(b);
    if (pre_[e.u] < 0 || pre_[e.v] < 0 || g1_.edge_between(pre_[e.u], pre_[e.v]) < 0) {
      cost += edge_ins_[b];
    }
  }
  return cost;
}

BoundResult refine_upper_bound(const Graph& g1, const Graph& g2, const CostModel& m,
                               const BoundResult& ub) {
  if (ub.kind != BoundKind::kBranchUb && ub.kind != BoundKind::kBranchRub) {
    throw std::invalid_argument("refine_upper_bound expects an upper bound result");
  }
  const std::size_t n1 = g1.order(), n2 = g2.order(), n = n1 + n2;
  BoundResult out;
  out.kind = BoundKind::kBranchRub;
  auto mapping = ub.assignment.mapping;
  {
    std::vector<int> phi, pre;
    split_mapping(n1, n2, mapping, phi, pre);
  }
  EditPathEvaluator eval(g1, g2, m);
  double current = eval.cost(mapping);
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i < n && !improved; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        // Two epsilon rows, or two rows both mapped to epsilon, are
        // interchangeable: the swap leaves the edit path unchanged.
        if (i >= n1) break;
        if (static_cast<std::size_t>(mapping[i]) >= n2 &&
            static_cast<std::size_t>(mapping[j]) >= n2) {
          continue;
        }
        std::swap(mapping[i], mapping[j]);
        const double c = eval.cost(mapping);
        if (c < current - kEpsilon) {
          current = c;
          improved = true;
          break;
        }
        std::swap(mapping[i], mapping[j]);
      }
    }
  }
  out.value = current;
  out.assignment.mapping = std::move(mapping);
  out.assignment.cost = current;
  return out;
}

}  // namespace gsim
