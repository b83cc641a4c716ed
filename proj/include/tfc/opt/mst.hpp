#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "tfc/opt/relation.hpp"

namespace tfc::opt {

struct GraphEdge {
  int a = 0, b = 0; // a < b
  int weight = 0;
};

/// Weighted relation graph over the retained contraction vectors, with the
/// selected minimum-spanning-tree edges. Kruskal with deterministic
/// tie-breaking: lexicographic on (weight, min vertex, max vertex).
struct RelationGraph {
  int num_vertices = 0;
  std::vector<GraphEdge> tree_edges;
  std::int64_t tree_weight = 0;
};

inline RelationGraph minimum_spanning_tree(const ContractionVectors& cv) {
  const int n = cv.num_vectors();
  if (n < 1) throw user_error("minimum_spanning_tree: no vectors");
  RelationGraph graph;
  graph.num_vertices = n;

  std::vector<GraphEdge> edges;
  edges.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) edges.push_back({a, b, relation_weight(cv, a, b)});
  std::sort(edges.begin(), edges.end(), [](const GraphEdge& x, const GraphEdge& y) {
    if (x.weight != y.weight) return x.weight < y.weight;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });

  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (const auto& e : edges) {
    const int ra = find(e.a), rb = find(e.b);
    if (ra == rb) continue;
    parent[static_cast<std::size_t>(ra)] = rb;
    graph.tree_edges.push_back(e);
    graph.tree_weight += e.weight;
    if (static_cast<int>(graph.tree_edges.size()) == n - 1) break;
  }
  return graph;
}

} // namespace tfc::opt
