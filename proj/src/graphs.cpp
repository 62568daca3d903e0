#include "corelab/graphs.hpp"

#include <algorithm>
#include <queue>
#include <set>

namespace corelab {

DirectedGraph::DirectedGraph(int vertex_count, std::vector<Edge> edges)
    : vertices_(vertex_count) {
  if (vertex_count <= 0) throw ParseError("graph needs at least one vertex");
  std::vector<Edge> sorted(edges.size());
  std::vector<bool> seen(edges.size(), false);
  for (const Edge& e : edges) {
    if (e.id < 0 || e.id >= static_cast<int>(edges.size()) ||
        seen[static_cast<size_t>(e.id)])
      throw ParseError("edge ids must be unique and dense 0..E-1");
    if (e.source < 0 || e.source >= vertex_count || e.range < 0 ||
        e.range >= vertex_count)
      throw ParseError("edge endpoint out of range");
    seen[static_cast<size_t>(e.id)] = true;
    sorted[static_cast<size_t>(e.id)] = e;
  }
  edges_ = std::move(sorted);
}

Eigen::MatrixXd DirectedGraph::adjacency_counts() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(vertices_, vertices_);
  for (const Edge& e : edges_) m(e.range, e.source) += 1.0;
  return m;
}

namespace {

void cycle_search(const DirectedGraph& g, int start, int current,
                  std::vector<bool>& on_path, std::vector<int>& trail,
                  std::vector<Cycle>& out) {
  for (const Edge& e : g.edges()) {
    if (e.source != current) continue;
    if (e.range == start) {
      trail.push_back(e.id);
      out.push_back(Cycle{trail});
      trail.pop_back();
      continue;
    }
    // only vertices above the start may appear inside (one canonical start
    // per cycle: its minimal vertex)
    if (e.range < start || on_path[static_cast<size_t>(e.range)]) continue;
    on_path[static_cast<size_t>(e.range)] = true;
    trail.push_back(e.id);
    cycle_search(g, start, e.range, on_path, trail, out);
    trail.pop_back();
    on_path[static_cast<size_t>(e.range)] = false;
  }
}

std::vector<int> canonical_rotation(const std::vector<int>& ids) {
  std::vector<int> best = ids;
  std::vector<int> rot = ids;
  for (size_t k = 1; k < ids.size(); ++k) {
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    if (rot < best) best = rot;
  }
  return best;
}

}  // namespace

std::vector<Cycle> enumerate_simple_cycles(const DirectedGraph& g) {
  std::vector<Cycle> out;
  for (int start = 0; start < g.vertex_count(); ++start) {
    std::vector<bool> on_path(static_cast<size_t>(g.vertex_count()), false);
    on_path[static_cast<size_t>(start)] = true;
    std::vector<int> trail;
    cycle_search(g, start, start, on_path, trail, out);
  }
  for (Cycle& c : out) c.edge_ids = canonical_rotation(c.edge_ids);
  std::sort(out.begin(), out.end(), [](const Cycle& a, const Cycle& b) {
    if (a.edge_ids.size() != b.edge_ids.size())
      return a.edge_ids.size() < b.edge_ids.size();
    return a.edge_ids < b.edge_ids;
  });
  return out;
}

std::vector<int> cycle_vertices(const DirectedGraph& g, const Cycle& c) {
  std::vector<int> vs;
  vs.reserve(c.edge_ids.size());
  for (int id : c.edge_ids) vs.push_back(g.edge(id).source);
  return vs;
}

bool has_strong_double_cycle(const DirectedGraph& g) {
  std::vector<int> cycles_through(static_cast<size_t>(g.vertex_count()), 0);
  for (const Cycle& c : enumerate_simple_cycles(g))
    for (int v : cycle_vertices(g, c)) ++cycles_through[static_cast<size_t>(v)];

  std::vector<bool> good(static_cast<size_t>(g.vertex_count()), false);
  std::queue<int> frontier;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (cycles_through[static_cast<size_t>(v)] >= 2) {
      good[static_cast<size_t>(v)] = true;
      frontier.push(v);
    }
  // walk edges backwards: if the head of an edge reaches a double-cycle
  // vertex, so does its tail
  while (!frontier.empty()) {
    int v = frontier.front();
    frontier.pop();
    for (const Edge& e : g.edges())
      if (e.range == v && !good[static_cast<size_t>(e.source)]) {
        good[static_cast<size_t>(e.source)] = true;
        frontier.push(e.source);
      }
  }
  for (bool b : good)
    if (!b) return false;
  return true;
}

std::vector<GraphPath> paths_of_length(const DirectedGraph& g, int n) {
  if (n < 0) throw AnalysisError("path length must be nonnegative");
  std::vector<GraphPath> level;
  for (int v = 0; v < g.vertex_count(); ++v)
    level.push_back(GraphPath{{}, v, v});
  for (int step = 0; step < n; ++step) {
    std::vector<GraphPath> next;
    // prepend a leading edge; iterating edges in the outer loop keeps the
    // leading-first id sequences in lexicographic order
    for (const Edge& e : g.edges()) {
      for (const GraphPath& p : level) {
        if (p.range != e.source) continue;
        GraphPath q;
        q.edge_ids.reserve(p.edge_ids.size() + 1);
        q.edge_ids.push_back(e.id);
        q.edge_ids.insert(q.edge_ids.end(), p.edge_ids.begin(),
                          p.edge_ids.end());
        q.source = p.source;
        q.range = e.range;
        next.push_back(std::move(q));
      }
    }
    level = std::move(next);
  }
  return level;
}

}  // namespace corelab
