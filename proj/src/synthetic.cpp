#include "gsim/synthetic.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace gsim {

namespace {

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

Label random_label(const SyntheticOptions& o, SymbolTable& symbols, std::mt19937_64& rng,
                   bool edge) {
  Label l;
  if (o.symbols > 0 && (!edge || o.edge_symbols)) {
    l.symbol = symbols.intern("s" + std::to_string(uniform_int(rng, 0, o.symbols - 1)));
  }
  if (!edge) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t d = 0; d < o.vertex_dim; ++d) l.attributes.push_back(unit(rng));
  }
  return l;
}

}  // namespace

Graph random_graph(const SyntheticOptions& o, SymbolTable& symbols, std::mt19937_64& rng,
                   GraphId id) {
  const int n = uniform_int(rng, o.min_vertices, o.max_vertices);
  std::vector<Label> vertices;
  for (int v = 0; v < n; ++v) vertices.push_back(random_label(o, symbols, rng, false));
  std::vector<Edge> edges;
  std::set<std::pair<int, int>> present;
  auto add = [&](int u, int v) {
    if (u > v) std::swap(u, v);
    if (u == v || !present.insert({u, v}).second) return;
    edges.push_back({u, v, random_label(o, symbols, rng, true)});
  };
  for (int v = 1; v < n; ++v) add(uniform_int(rng, 0, v - 1), v);
  std::bernoulli_distribution extra(o.extra_edge_prob);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (extra(rng)) add(u, v);
    }
  }
  return Graph(id, std::move(vertices), std::move(edges));
}

Graph perturb(const Graph& g, int edits, const SyntheticOptions& o, SymbolTable& symbols,
              std::mt19937_64& rng) {
  std::vector<Label> vertices = g.vertices();
  std::vector<Edge> edges = g.edges();
  for (int step = 0; step < edits; ++step) {
    const int n = static_cast<int>(vertices.size());
    switch (uniform_int(rng, 0, 4)) {
      case 0:  // relabel a vertex
        if (n > 0) vertices[uniform_int(rng, 0, n - 1)] = random_label(o, symbols, rng, false);
        break;
      case 1: {  // insert an edge
        if (n < 2) break;
        int u = uniform_int(rng, 0, n - 1), v = uniform_int(rng, 0, n - 1);
        if (u > v) std::swap(u, v);
        const bool exists = std::any_of(edges.begin(), edges.end(),
                                        [&](const Edge& e) { return e.u == u && e.v == v; });
        if (u != v && !exists) edges.push_back({u, v, random_label(o, symbols, rng, true)});
        break;
      }
      case 2:  // delete an edge
        if (!edges.empty()) {
          edges.erase(edges.begin() + uniform_int(rng, 0, static_cast<int>(edges.size()) - 1));
        }
        break;
      case 3:  // insert a vertex attached to an existing one
        vertices.push_back(random_label(o, symbols, rng, false));
        if (n > 0) edges.push_back({uniform_int(rng, 0, n - 1), n, random_label(o, symbols, rng, true)});
        break;
      default: {  // delete a vertex with its edges
        if (n <= 1) break;
        const int x = uniform_int(rng, 0, n - 1);
        vertices.erase(vertices.begin() + x);
        std::vector<Edge> kept;
        for (auto e : edges) {
          if (e.u == x || e.v == x) continue;
          if (e.u > x) --e.u;
          if (e.v > x) --e.v;
          kept.push_back(std::move(e));
        }
        edges = std::move(kept);
        break;
      }
    }
  }
  return Graph(g.id(), std::move(vertices), std::move(edges));
}

GraphDatabase synthetic_database(const SyntheticOptions& o) {
  GraphDatabase db;
  db.vertex_dim = o.vertex_dim;
  std::mt19937_64 rng(o.seed);
  std::vector<Graph> bases;
  for (std::size_t c = 0; c < o.clusters; ++c) bases.push_back(random_graph(o, db.symbols, rng));
  for (std::size_t i = 0; i < o.graphs; ++i) {
    const auto id = static_cast<GraphId>(i);
    if (bases.empty()) {
      db.graphs.push_back(random_graph(o, db.symbols, rng, id));
    } else {
      Graph g = perturb(bases[i % bases.size()], uniform_int(rng, 1, std::max(1, o.max_edits)), o,
                        db.symbols, rng);
      g.set_id(id);
      db.graphs.push_back(std::move(g));
    }
  }
  return db;
}

std::vector<Graph> sample_queries(const GraphDatabase& db, std::size_t count,
                                  std::uint64_t seed) {
  std::vector<std::size_t> ids(db.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::mt19937_64 rng(seed);
  count = std::min(count, ids.size());
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, ids.size() - 1);
    std::swap(ids[i], ids[pick(rng)]);
  }
  std::vector<Graph> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(db.graphs[ids[i]]);
  return out;
}

}  // namespace gsim
