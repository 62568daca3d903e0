#pragma once

#include <vector>

#include "corelab/numerics.hpp"

namespace corelab {

struct Edge {
  int id = 0;
  int source = 0;
  int range = 0;
};

class DirectedGraph {
 public:
  DirectedGraph() = default;
  // Validates: endpoints < vertex_count, ids dense and unique 0..E-1.
  DirectedGraph(int vertex_count, std::vector<Edge> edges);

  int vertex_count() const { return vertices_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int id) const { return edges_[static_cast<size_t>(id)]; }

  // counts(r, s) = number of edges from s to r.
  Eigen::MatrixXd adjacency_counts() const;

 private:
  int vertices_ = 0;
  std::vector<Edge> edges_;  // indexed by id
};

// Edge ids stored leading-first: edge_ids[0] is the last edge traversed, so
// the path operator is the left-to-right product of the edge operators.
// A length-0 path is a vertex (empty edge list, source == range).
struct GraphPath {
  std::vector<int> edge_ids;
  int source = 0;
  int range = 0;
  int length() const { return static_cast<int>(edge_ids.size()); }
};

// Simple directed cycle; edge ids in traversal order, rotated to the
// lexicographically smallest edge-id sequence.
struct Cycle {
  std::vector<int> edge_ids;
};

std::vector<Cycle> enumerate_simple_cycles(const DirectedGraph& g);

// Vertices visited by a cycle (sources of its edges in traversal order).
std::vector<int> cycle_vertices(const DirectedGraph& g, const Cycle& c);

// True iff every vertex has a directed path (length >= 0) to a vertex lying
// on at least two distinct simple cycles.
bool has_strong_double_cycle(const DirectedGraph& g);

// All composable edge sequences of length n, ordered lexicographically by
// the leading-first edge-id sequence. n = 0 yields one vertex path per vertex.
std::vector<GraphPath> paths_of_length(const DirectedGraph& g, int n);

}  // namespace corelab
