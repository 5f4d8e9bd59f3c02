#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace gsim {

using VertexIndex = std::int32_t;
using EdgeIndex = std::int32_t;
using SymbolId = std::int32_t;
using GraphId = std::int32_t;

// Label of a vertex or edge. An element may carry a categorical symbol,
// an attribute vector, both, or neither (unlabeled elements compare equal).
struct Label {
  std::optional<SymbolId> symbol;
  std::vector<double> attributes;

  friend bool operator==(const Label&, const Label&) = default;
  friend auto operator<=>(const Label&, const Label&) = default;
};

struct Edge {
  VertexIndex u = 0;
  VertexIndex v = 0;
  Label label;
};

struct Neighbor {
  VertexIndex vertex = 0;
  EdgeIndex edge = 0;
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Undirected, simple, attributed graph. Immutable after construction; the
// constructor validates the edge set and builds adjacency structures.
class Graph {
 public:
  Graph() = default;
  Graph(GraphId id, std::vector<Label> vertices, std::vector<Edge> edges);

  GraphId id() const { return id_; }
  void set_id(GraphId id) { id_ = id; }

  VertexIndex order() const { return static_cast<VertexIndex>(vertices_.size()); }
  EdgeIndex size() const { return static_cast<EdgeIndex>(edges_.size()); }

  const Label& vertex(VertexIndex v) const { return vertices_[v]; }
  const std::vector<Label>& vertices() const { return vertices_; }
  const Edge& edge(EdgeIndex e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }

  // Neighbors in ascending vertex order.
  std::span<const Neighbor> neighbors(VertexIndex v) const {
    return adjacency_[v];
  }
  VertexIndex degree(VertexIndex v) const {
    return static_cast<VertexIndex>(adjacency_[v].size());
  }
  VertexIndex max_degree() const;

  // -1 when u and v are not adjacent.
  EdgeIndex edge_between(VertexIndex u, VertexIndex v) const {
    return edge_at_[static_cast<std::size_t>(u) * vertices_.size() + v];
  }
  const Label* edge_label(VertexIndex u, VertexIndex v) const {
    EdgeIndex e = edge_between(u, v);
    return e < 0 ? nullptr : &edges_[e].label;
  }

  // Incident edges of v sorted by label, for multiset intersections.
  std::span<const EdgeIndex> incident_by_label(VertexIndex v) const {
    return incident_sorted_[v];
  }

  // Structural self-check: adjacency symmetric and consistent with edges.
  bool validate() const;

  // Vertex labels are mutable only through normalization.
  std::vector<Label>& mutable_vertices() { return vertices_; }
  std::vector<Edge>& mutable_edges() { return edges_; }
  void rebuild_label_order();

 private:
  GraphId id_ = 0;
  std::vector<Label> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<EdgeIndex> edge_at_;
  std::vector<std::vector<EdgeIndex>> incident_sorted_;
};

// Bounds-checked neighbor listing with edge labels.
std::vector<std::pair<VertexIndex, const Label*>> neighbors(const Graph& g,
                                                            VertexIndex v);

class SymbolTable {
 public:
  SymbolId intern(const std::string& name);
  std::optional<SymbolId> find(const std::string& name) const;
  const std::string& name(SymbolId id) const { return names_.at(id); }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, SymbolId> ids_;
};

// Per-dimension affine map x -> (x - min) / (max - min); constant dimensions
// map to 0.
struct NormalizationRecord {
  std::vector<double> vertex_min, vertex_max;
  std::vector<double> edge_min, edge_max;

  bool empty() const { return vertex_min.empty() && edge_min.empty(); }
  std::uint64_t hash() const;
  friend bool operator==(const NormalizationRecord&,
                         const NormalizationRecord&) = default;
};

struct GraphDatabase {
  std::vector<Graph> graphs;
  std::size_t vertex_dim = 0;
  std::size_t edge_dim = 0;
  NormalizationRecord normalization;
  SymbolTable symbols;

  std::size_t size() const { return graphs.size(); }
  const Graph& operator[](std::size_t i) const { return graphs[i]; }

  // Fingerprint of graph contents, used to tie persisted indices to data.
  std::uint64_t content_hash() const;
};

struct DatabaseStats {
  std::size_t graphs = 0;
  double mean_vertices = 0.0;
  double mean_edges = 0.0;
};

DatabaseStats stats(const GraphDatabase& db);

// Computes a record over the whole database, rewrites all attributes into
// [0,1] and composes the new record with any record already stored.
void normalize_attributes(GraphDatabase& db);

// Maps a graph (e.g. a query) with an existing record.
void apply_normalization(Graph& g, const NormalizationRecord& record);

}  // namespace gsim
