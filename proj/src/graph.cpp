#include "gsim/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "gsim/hash.hpp"

namespace gsim {

Graph::Graph(GraphId id, std::vector<Label> vertices, std::vector<Edge> edges)
    : id_(id), vertices_(std::move(vertices)), edges_(std::move(edges)) {
  const auto n = static_cast<VertexIndex>(vertices_.size());
  adjacency_.assign(vertices_.size(), {});
  edge_at_.assign(vertices_.size() * vertices_.size(), -1);
  for (EdgeIndex e = 0; e < size(); ++e) {
    auto& edge = edges_[e];
    if (edge.u < 0 || edge.u >= n || edge.v < 0 || edge.v >= n) {
      throw GraphError("graph " + std::to_string(id) + ": edge " +
                       std::to_string(edge.u) + "-" + std::to_string(edge.v) +
                       " has an endpoint outside 0.." + std::to_string(n - 1));
    }
    if (edge.u == edge.v) {
      throw GraphError("graph " + std::to_string(id) + ": self-loop at vertex " +
                       std::to_string(edge.u));
    }
    if (edge.u > edge.v) std::swap(edge.u, edge.v);
    auto& slot = edge_at_[static_cast<std::size_t>(edge.u) * n + edge.v];
    if (slot >= 0) {
      throw GraphError("graph " + std::to_string(id) + ": parallel edge " +
                       std::to_string(edge.u) + "-" + std::to_string(edge.v));
    }
    slot = e;
    edge_at_[static_cast<std::size_t>(edge.v) * n + edge.u] = e;
    adjacency_[edge.u].push_back({edge.v, e});
    adjacency_[edge.v].push_back({edge.u, e});
  }
  for (auto& list : adjacency_) {
    std::sort(list.begin(), list.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
  }
  rebuild_label_order();
}

void Graph::rebuild_label_order() {
  incident_sorted_.assign(vertices_.size(), {});
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    auto& list = incident_sorted_[v];
    for (const auto& nb : adjacency_[v]) list.push_back(nb.edge);
    std::sort(list.begin(), list.end(), [this](EdgeIndex a, EdgeIndex b) {
      return edges_[a].label < edges_[b].label;
    });
  }
}

VertexIndex Graph::max_degree() const {
  VertexIndex d = 0;
  for (VertexIndex v = 0; v < order(); ++v) d = std::max(d, degree(v));
  return d;
}

bool Graph::validate() const {
  const auto n = order();
  std::size_t degree_sum = 0;
  for (VertexIndex v = 0; v < n; ++v) {
    degree_sum += adjacency_[v].size();
    for (const auto& nb : adjacency_[v]) {
      if (nb.vertex == v || nb.edge < 0 || nb.edge >= size()) return false;
      const auto& e = edges_[nb.edge];
      if (!((e.u == v && e.v == nb.vertex) || (e.v == v && e.u == nb.vertex))) return false;
      if (edge_between(nb.vertex, v) != nb.edge) return false;
    }
  }
  return degree_sum == 2 * edges_.size();
}

std::vector<std::pair<VertexIndex, const Label*>> neighbors(const Graph& g,
                                                            VertexIndex v) {
  if (v < 0 || v >= g.order()) {
    throw std::out_of_range("vertex " + std::to_string(v) + " out of range for graph " +
                            std::to_string(g.id()));
  }
  std::vector<std::pair<VertexIndex, const Label*>> out;
  for (const auto& nb : g.neighbors(v)) out.emplace_back(nb.vertex, &g.edge(nb.edge).label);
  return out;
}

SymbolId SymbolTable::intern(const std::string& name) {
  auto [it, inserted] = ids_.try_emplace(name, static_cast<SymbolId>(names_.size()));
  if (inserted) names_.push_back(name);
  return it->second;
}

std::optional<SymbolId> SymbolTable::find(const std::string& name) const {
  auto it = ids_.find(name);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t NormalizationRecord::hash() const {
  Fnv1a h;
  for (const auto* v : {&vertex_min, &vertex_max, &edge_min, &edge_max}) {
    h.u64(v->size());
    for (double x : *v) h.f64(x);
  }
  return h.value();
}

namespace {

void hash_label(Fnv1a& h, const Label& l) {
  h.u64(l.symbol ? static_cast<std::uint64_t>(*l.symbol) + 1 : 0);
  h.u64(l.attributes.size());
  for (double x : l.attributes) h.f64(x);
}

struct Range {
  std::vector<double> lo, hi;
};

void widen(Range& r, const std::vector<double>& x) {
  if (x.empty()) return;
  if (r.lo.empty()) {
    r.lo = x;
    r.hi = x;
    return;
  }
  for (std::size_t d = 0; d < x.size(); ++d) {
    r.lo[d] = std::min(r.lo[d], x[d]);
    r.hi[d] = std::max(r.hi[d], x[d]);
  }
}

void map_attributes(std::vector<double>& x, const std::vector<double>& lo,
                    const std::vector<double>& hi) {
  for (std::size_t d = 0; d < x.size() && d < lo.size(); ++d) {
    const double span = hi[d] - lo[d];
    x[d] = span > 0.0 ? (x[d] - lo[d]) / span : 0.0;
  }
}

// Record mapping raw values through `first` and then `second`.
void compose(std::vector<double>& lo, std::vector<double>& hi,
             const std::vector<double>& lo2, const std::vector<double>& hi2) {
  if (lo.empty()) {
    lo = lo2;
    hi = hi2;
    return;
  }
  for (std::size_t d = 0; d < lo.size(); ++d) {
    const double span = hi[d] - lo[d];
    if (span <= 0.0) continue;
    const double new_lo = lo[d] + lo2[d] * span;
    const double new_hi = lo[d] + hi2[d] * span;
    lo[d] = new_lo;
    hi[d] = new_hi;
  }
}

}  // namespace

std::uint64_t GraphDatabase::content_hash() const {
  Fnv1a h;
  h.u64(graphs.size());
  for (const auto& g : graphs) {
    h.u64(static_cast<std::uint64_t>(g.order()));
    for (const auto& l : g.vertices()) hash_label(h, l);
    h.u64(static_cast<std::uint64_t>(g.size()));
    for (const auto& e : g.edges()) {
      h.u64(static_cast<std::uint64_t>(e.u));
      h.u64(static_cast<std::uint64_t>(e.v));
      hash_label(h, e.label);
    }
  }
  return h.value();
}

DatabaseStats stats(const GraphDatabase& db) {
  DatabaseStats s;
  s.graphs = db.size();
  if (db.graphs.empty()) return s;
  double nv = 0.0, ne = 0.0;
  for (const auto& g : db.graphs) {
    nv += g.order();
    ne += g.size();
  }
  s.mean_vertices = nv / static_cast<double>(db.size());
  s.mean_edges = ne / static_cast<double>(db.size());
  return s;
}

void normalize_attributes(GraphDatabase& db) {
  Range vr, er;
  for (const auto& g : db.graphs) {
    for (const auto& l : g.vertices()) widen(vr, l.attributes);
    for (const auto& e : g.edges()) widen(er, e.label.attributes);
  }
  for (auto& g : db.graphs) {
    for (auto& l : g.mutable_vertices()) map_attributes(l.attributes, vr.lo, vr.hi);
    for (auto& e : g.mutable_edges()) map_attributes(e.label.attributes, er.lo, er.hi);
    g.rebuild_label_order();
  }
  auto& rec = db.normalization;
  compose(rec.vertex_min, rec.vertex_max, vr.lo, vr.hi);
  compose(rec.edge_min, rec.edge_max, er.lo, er.hi);
}

void apply_normalization(Graph& g, const NormalizationRecord& record) {
  for (auto& l : g.mutable_vertices()) {
    map_attributes(l.attributes, record.vertex_min, record.vertex_max);
  }
  for (auto& e : g.mutable_edges()) {
    map_attributes(e.label.attributes, record.edge_min, record.edge_max);
  }
  g.rebuild_label_order();
}

}  // namespace gsim
