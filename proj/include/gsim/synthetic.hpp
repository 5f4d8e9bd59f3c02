#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "gsim/graph.hpp"

namespace gsim {

struct SyntheticOptions {
  std::size_t graphs = 500;
  int min_vertices = 4;
  int max_vertices = 12;
  int symbols = 3;              // categorical labels; 0 for none
  std::size_t vertex_dim = 0;   // attribute dimensions in [0,1]
  bool edge_symbols = true;
  double extra_edge_prob = 0.12;  // on top of a random spanning tree
  // With clusters > 0, each graph is a random base graph of its cluster
  // after 1..max_edits random edit operations.
  std::size_t clusters = 0;
  int max_edits = 3;
  std::uint64_t seed = 0;
};

GraphDatabase synthetic_database(const SyntheticOptions& options);

Graph random_graph(const SyntheticOptions& options, SymbolTable& symbols, std::mt19937_64& rng,
                   GraphId id = 0);

// Applies `edits` random vertex/edge edit operations.
Graph perturb(const Graph& g, int edits, const SyntheticOptions& options, SymbolTable& symbols,
              std::mt19937_64& rng);

// `count` distinct database graphs (count capped at the database size).
std::vector<Graph> sample_queries(const GraphDatabase& db, std::size_t count, std::uint64_t seed);

}  // namespace gsim
