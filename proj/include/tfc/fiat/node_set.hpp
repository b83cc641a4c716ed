#pragma once

#include <cstddef>
#include <vector>

#include "tfc/errors.hpp"
#include "tfc/fiat/reference_cell.hpp"

namespace tfc::fiat {

/// Point-evaluation node: location on K0 plus a component index for
/// vector-valued spaces (0 for scalar).
struct Node {
  Point point{};
  int component = 0;
};

/// Which sub-entity a node belongs to and its position within that
/// entity's node tuple.
struct EntityRef {
  int dim = 0;
  int entity = 0;
  int pos = 0;
};

struct NodeSet {
  std::vector<Node> nodes;
  std::vector<EntityRef> grouping; // parallel to nodes
  /// nodes per single entity of each topological dimension
  std::vector<int> per_entity;

  int size() const { return static_cast<int>(nodes.size()); }
};

namespace detail {

/// Interior lattice multi-indices of a k-simplex at degree q: barycentric
/// tuples (b_0..b_k) with all b_i >= 1 and sum q, enumerated in
/// lexicographic order of (b_1, ..., b_k). Shared between node placement
/// and dofmap orientation tables.
inline std::vector<std::vector<int>> interior_lattice(int simplex_dim, int q) {
  std::vector<std::vector<int>> out;
  if (simplex_dim == 1) {
    for (int b1 = 1; b1 <= q - 1; ++b1) out.push_back({q - b1, b1});
  } else if (simplex_dim == 2) {
    for (int b1 = 1; b1 <= q - 2; ++b1)
      for (int b2 = 1; b2 <= q - 1 - b1; ++b2) out.push_back({q - b1 - b2, b1, b2});
  } else if (simplex_dim == 3) {
    for (int b1 = 1; b1 <= q - 3; ++b1)
      for (int b2 = 1; b2 <= q - 2 - b1; ++b2)
        for (int b3 = 1; b3 <= q - 1 - b1 - b2; ++b3)
          out.push_back({q - b1 - b2 - b3, b1, b2, b3});
  }
  return out;
}

} // namespace detail

/// Equispaced Lagrange nodes grouped by entity: one node per vertex, then
/// per edge / face / cell the interior lattice points, each entity's nodes
/// ordered along its ascending vertex tuple. For discontinuous elements all
/// nodes are grouped with the cell itself.
inline NodeSet lagrange_node_set(const ReferenceCell& cell, int degree, bool continuous) {
  if (degree < 0 || (continuous && degree < 1))
    throw user_error("unsupported Lagrange degree");
  NodeSet ns;
  const int d = cell.dim;
  ns.per_entity.assign(static_cast<std::size_t>(d) + 1, 0);
  if (degree == 0) {
    Point bary{};
    for (const auto& v : cell.vertices)
      for (int c = 0; c < d; ++c) bary[static_cast<std::size_t>(c)] += v[static_cast<std::size_t>(c)] / (d + 1.0);
    ns.nodes.push_back({bary, 0});
    ns.grouping.push_back({d, 0, 0});
    ns.per_entity[static_cast<std::size_t>(d)] = 1;
    return ns;
  }
  for (int dim = 0; dim <= d; ++dim) {
    const auto& ents = cell.entities[static_cast<std::size_t>(dim)];
    for (int e = 0; e < static_cast<int>(ents.size()); ++e) {
      const auto& verts = ents[static_cast<std::size_t>(e)];
      std::vector<std::vector<int>> lattice;
      if (dim == 0) {
        lattice.push_back({degree});
      } else {
        lattice = detail::interior_lattice(dim, degree);
      }
      int pos = 0;
      for (const auto& bary : lattice) {
        Point p{};
        for (std::size_t k = 0; k < verts.size(); ++k) {
          const auto& v = cell.vertices[static_cast<std::size_t>(verts[k])];
          for (int c = 0; c < d; ++c)
            p[static_cast<std::size_t>(c)] += bary[k] * v[static_cast<std::size_t>(c)] / degree;
        }
        ns.nodes.push_back({p, 0});
        ns.grouping.push_back({dim, e, pos++});
      }
      ns.per_entity[static_cast<std::size_t>(dim)] = pos;
    }
  }
  if (!continuous) {
    // Same points, but nothing is shared between cells.
    for (std::size_t i = 0; i < ns.grouping.size(); ++i)
      ns.grouping[i] = {d, 0, static_cast<int>(i)};
    for (int dim = 0; dim < d; ++dim) ns.per_entity[static_cast<std::size_t>(dim)] = 0;
    ns.per_entity[static_cast<std::size_t>(d)] = ns.size();
  }
  return ns;
}

} // namespace tfc::fiat
