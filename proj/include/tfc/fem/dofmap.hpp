#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "tfc/fem/mesh.hpp"
#include "tfc/fiat/node_set.hpp"
#include "tfc/form/element.hpp"

namespace tfc::fem {

/// Per-element description of how nodes attach to mesh entities, plus the
/// orientation-correction tables: edge_reordering[2][k] (identity and
/// reversal) and face_reordering[6][m] (one row per face orientation code).
struct DofMapSpec {
  form::ElementSpec element;
  fiat::NodeSet nodes; // scalar node set
  std::vector<std::vector<int>> edge_reordering;
  std::vector<std::vector<int>> face_reordering;
};

namespace detail {

inline int lattice_index(const std::vector<std::vector<int>>& lattice, const std::vector<int>& b) {
  for (std::size_t k = 0; k < lattice.size(); ++k)
    if (lattice[k] == b) return static_cast<int>(k);
  return -1;
}

inline std::vector<std::vector<int>> make_edge_reordering(int degree) {
  const auto lattice = fiat::detail::interior_lattice(1, degree);
  const int k = static_cast<int>(lattice.size());
  std::vector<std::vector<int>> table(2, std::vector<int>(static_cast<std::size_t>(k)));
  for (int t = 0; t < k; ++t) {
    table[0][static_cast<std::size_t>(t)] = t;
    const auto& b = lattice[static_cast<std::size_t>(t)];
    table[1][static_cast<std::size_t>(t)] = lattice_index(lattice, {b[1], b[0]});
  }
  return table;
}

inline std::vector<std::vector<int>> make_face_reordering(int degree) {
  const auto lattice = fiat::detail::interior_lattice(2, degree);
  const int m = static_cast<int>(lattice.size());
  std::vector<std::vector<int>> table(6, std::vector<int>(static_cast<std::size_t>(m)));
  for (int a = 0; a < 6; ++a)
    for (int t = 0; t < m; ++t) {
      const auto& b = lattice[static_cast<std::size_t>(t)];
      // Barycentric weights seen in the sorted-global vertex order.
      std::vector<int> canonical = {b[static_cast<std::size_t>(face_permutations[a][0])],
                                    b[static_cast<std::size_t>(face_permutations[a][1])],
                                    b[static_cast<std::size_t>(face_permutations[a][2])]};
      table[static_cast<std::size_t>(a)][static_cast<std::size_t>(t)] =
          lattice_index(lattice, canonical);
    }
  return table;
}

} // namespace detail

inline DofMapSpec make_dofmap_spec(const form::ElementSpec& element) {
  DofMapSpec spec;
  spec.element = element;
  spec.nodes = fiat::lagrange_node_set(fiat::make_reference_cell(element.shape), element.degree,
                                       element.family != fiat::Family::DiscontinuousLagrange);
  spec.edge_reordering = detail::make_edge_reordering(element.degree);
  spec.face_reordering = detail::make_face_reordering(element.degree);
  return spec;
}

/// Generated local-to-global mapping for one function space on one mesh.
/// Global scalar numbering: vertices, then edges (k per edge), then faces
/// (m per face, 3D), then cell interiors. Vector-valued dofs are blocked
/// by node: global dof = scalar dof * ncomp + component.
class DofMap {
public:
  DofMap() = default;
  DofMap(DofMapSpec spec, const SimplicialMesh* mesh) : spec_(std::move(spec)), mesh_(mesh) {
    const int d = mesh_->dim;
    if (spec_.element.dim() != d) throw user_error("element/mesh cell shape mismatch");
    offsets_.assign(static_cast<std::size_t>(d) + 1, 0);
    int running = 0;
    for (int k = 0; k <= d; ++k) {
      offsets_[static_cast<std::size_t>(k)] = running;
      running += num_entities(k) * spec_.nodes.per_entity[static_cast<std::size_t>(k)];
    }
    scalar_dim_ = running;
  }

  const DofMapSpec& spec() const { return spec_; }
  const SimplicialMesh& mesh() const { return *mesh_; }
  int ncomp() const { return spec_.element.components(); }
  int scalar_dimension() const { return scalar_dim_; }
  int global_dimension() const { return scalar_dim_ * ncomp(); }
  int local_dimension() const { return spec_.nodes.size() * ncomp(); }

  /// Scalar global node tuple of one cell, in node-set order.
  std::vector<int> cell_nodes(int cell) const {
    const int d = mesh_->dim;
    std::vector<int> out;
    out.reserve(spec_.nodes.nodes.size());
    for (const auto& g : spec_.nodes.grouping) {
      int id = 0;
      if (g.dim == 0) {
        id = mesh_->vertex_id(cell, g.entity);
      } else if (g.dim == d) {
        const int per = spec_.nodes.per_entity[static_cast<std::size_t>(d)];
        id = offsets_[static_cast<std::size_t>(d)] + per * cell + g.pos;
      } else if (g.dim == 1) {
        const int per = spec_.nodes.per_entity[1];
        const int align = mesh_->edge_alignment(cell, g.entity);
        id = offsets_[1] + per * mesh_->edge_id(cell, g.entity) +
             spec_.edge_reordering[static_cast<std::size_t>(align)][static_cast<std::size_t>(g.pos)];
      } else { // g.dim == 2, d == 3
        const int per = spec_.nodes.per_entity[2];
        const int align = mesh_->face_alignment(cell, g.entity);
        id = offsets_[2] + per * mesh_->face_id(cell, g.entity) +
             spec_.face_reordering[static_cast<std::size_t>(align)][static_cast<std::size_t>(g.pos)];
      }
      out.push_back(id);
    }
    return out;
  }

  /// Full local-to-global dof tuple (components blocked by node).
  std::vector<int> cell_dofs(int cell) const {
    const auto nodes = cell_nodes(cell);
    const int nc = ncomp();
    std::vector<int> out;
    out.reserve(nodes.size() * static_cast<std::size_t>(nc));
    for (int n : nodes)
      for (int c = 0; c < nc; ++c) out.push_back(n * nc + c);
    return out;
  }

  /// Geometric coordinates of every scalar global node.
  std::vector<std::array<double, 3>> node_coordinates() const {
    std::vector<std::array<double, 3>> coords(static_cast<std::size_t>(scalar_dim_));
    for (int c = 0; c < mesh_->num_cells(); ++c) {
      const auto nodes = cell_nodes(c);
      for (std::size_t k = 0; k < nodes.size(); ++k)
        coords[static_cast<std::size_t>(nodes[k])] =
            mesh_->map_point(c, spec_.nodes.nodes[k].point);
    }
    return coords;
  }

  /// Scalar nodes lying on the mesh boundary (on some boundary facet).
  std::vector<int> boundary_nodes() const {
    const int d = mesh_->dim;
    std::vector<bool> flag(static_cast<std::size_t>(scalar_dim_), false);
    for (const auto& [cell, lf] : mesh_->boundary_facets) {
      const auto nodes = cell_nodes(cell);
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        // The node lies on facet lf iff its barycentric coordinate with
        // respect to the opposite vertex vanishes.
        const auto& X = spec_.nodes.nodes[k].point;
        double lambda;
        const int opp = opposite_vertex(lf);
        if (opp == 0) {
          lambda = 1.0;
          for (int cc = 0; cc < d; ++cc) lambda -= X[static_cast<std::size_t>(cc)];
        } else {
          lambda = X[static_cast<std::size_t>(opp - 1)];
        }
        if (std::abs(lambda) < 1e-12) flag[static_cast<std::size_t>(nodes[k])] = true;
      }
    }
    std::vector<int> out;
    for (int n = 0; n < scalar_dim_; ++n)
      if (flag[static_cast<std::size_t>(n)]) out.push_back(n);
    return out;
  }

private:
  int num_entities(int k) const {
    const int d = mesh_->dim;
    if (k == 0) return mesh_->num_vertices();
    if (k == d) return mesh_->num_cells();
    if (k == 1) return mesh_->num_edges();
    return mesh_->num_faces();
  }

  /// Local vertex opposite a codim-1 facet: with the complement entity
  /// ordering, facet i is opposite vertex i.
  int opposite_vertex(int facet) const { return facet; }

  DofMapSpec spec_;
  const SimplicialMesh* mesh_ = nullptr;
  std::vector<int> offsets_;
  int scalar_dim_ = 0;
};

inline DofMap generate_dofmap(const form::ElementSpec& element, const SimplicialMesh& mesh) {
  return DofMap(make_dofmap_spec(element), &mesh);
}

} // namespace tfc::fem
