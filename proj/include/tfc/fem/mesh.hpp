#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tfc/errors.hpp"
#include "tfc/fiat/reference_cell.hpp"
#include "tfc/rep/geometry.hpp"

namespace tfc::fem {

/// The six permutations of three items in lexicographic order; the face
/// alignment code of a cell-local face is the index of the permutation
/// mapping sorted-global positions to cell-local positions.
inline constexpr int face_permutations[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                                {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

/// Conforming simplicial mesh with deterministic global numbering of
/// derived entities: edge/face keys are sorted vertex tuples, numbered in
/// lexicographic order. Alignment codes relate each cell's local entity
/// vertex order to the sorted global order.
struct SimplicialMesh {
  int dim = 2;
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::vector<int>> cells; // d+1 vertex ids, positive orientation
  fiat::ReferenceCell ref_cell;

  std::vector<std::array<int, 2>> edges; // d >= 2
  std::vector<std::array<int, 3>> faces; // d == 3
  std::vector<std::vector<int>> cell_edges, cell_edge_align;
  std::vector<std::vector<int>> cell_faces, cell_face_align;
  std::vector<std::pair<int, int>> boundary_facets; // (cell, local facet)

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_faces() const { return static_cast<int>(faces.size()); }
  int num_cells() const { return static_cast<int>(cells.size()); }

  int vertex_id(int cell, int local) const {
    return cells[static_cast<std::size_t>(cell)][static_cast<std::size_t>(local)];
  }
  int edge_id(int cell, int local) const {
    return cell_edges[static_cast<std::size_t>(cell)][static_cast<std::size_t>(local)];
  }
  int edge_alignment(int cell, int local) const {
    return cell_edge_align[static_cast<std::size_t>(cell)][static_cast<std::size_t>(local)];
  }
  int face_id(int cell, int local) const {
    return cell_faces[static_cast<std::size_t>(cell)][static_cast<std::size_t>(local)];
  }
  int face_alignment(int cell, int local) const {
    return cell_face_align[static_cast<std::size_t>(cell)][static_cast<std::size_t>(local)];
  }

  std::vector<std::array<double, 3>> cell_vertices(int cell) const {
    std::vector<std::array<double, 3>> out;
    for (int v : cells[static_cast<std::size_t>(cell)])
      out.push_back(vertices[static_cast<std::size_t>(v)]);
    return out;
  }

  rep::CellGeometry geometry(int cell) const {
    return rep::cell_geometry(cell_vertices(cell), dim);
  }

  /// Map a reference point onto a cell.
  std::array<double, 3> map_point(int cell, const fiat::Point& X) const {
    const auto verts = cell_vertices(cell);
    std::array<double, 3> x{};
    for (int c = 0; c < dim; ++c) {
      double acc = verts[0][static_cast<std::size_t>(c)];
      for (int k = 0; k < dim; ++k)
        acc += (verts[static_cast<std::size_t>(k + 1)][static_cast<std::size_t>(c)] -
                verts[0][static_cast<std::size_t>(c)]) *
               X[static_cast<std::size_t>(k)];
      x[static_cast<std::size_t>(c)] = acc;
    }
    return x;
  }
};

namespace detail {

inline void derive_entities(SimplicialMesh& mesh) {
  const int d = mesh.dim;
  mesh.ref_cell = fiat::make_reference_cell(d == 1 ? fiat::Shape::interval
                                            : d == 2 ? fiat::Shape::triangle
                                                     : fiat::Shape::tetrahedron);
  // Normalize orientation: positive signed volume.
  for (auto& cell : mesh.cells) {
    std::vector<std::array<double, 3>> verts;
    for (int v : cell) verts.push_back(mesh.vertices[static_cast<std::size_t>(v)]);
    rep::CellGeometry g;
    try {
      g = rep::cell_geometry(verts, d);
    } catch (const user_error&) {
      throw user_error("zero-volume cell");
    }
    if (g.det < 0) std::swap(cell[static_cast<std::size_t>(d - 1)], cell[static_cast<std::size_t>(d)]);
  }

  // Edges (d >= 2), numbered by lexicographic sorted tuple.
  if (d >= 2) {
    const auto& local_edges = mesh.ref_cell.entities[1];
    std::map<std::array<int, 2>, int> edge_ids;
    for (const auto& cell : mesh.cells)
      for (const auto& le : local_edges) {
        std::array<int, 2> key = {cell[static_cast<std::size_t>(le[0])],
                                  cell[static_cast<std::size_t>(le[1])]};
        if (key[0] > key[1]) std::swap(key[0], key[1]);
        edge_ids.emplace(key, 0);
      }
    int next = 0;
    for (auto& [key, id] : edge_ids) {
      id = next++;
      mesh.edges.push_back(key);
    }
    for (const auto& cell : mesh.cells) {
      std::vector<int> ids, aligns;
      for (const auto& le : local_edges) {
        const int a = cell[static_cast<std::size_t>(le[0])], b = cell[static_cast<std::size_t>(le[1])];
        std::array<int, 2> key = {std::min(a, b), std::max(a, b)};
        ids.push_back(edge_ids.at(key));
        aligns.push_back(a < b ? 0 : 1);
      }
      mesh.cell_edges.push_back(std::move(ids));
      mesh.cell_edge_align.push_back(std::move(aligns));
    }
  }

  // Faces (d == 3).
  if (d == 3) {
    const auto& local_faces = mesh.ref_cell.entities[2];
    std::map<std::array<int, 3>, int> face_ids;
    for (const auto& cell : mesh.cells)
      for (const auto& lf : local_faces) {
        std::array<int, 3> key = {cell[static_cast<std::size_t>(lf[0])],
                                  cell[static_cast<std::size_t>(lf[1])],
                                  cell[static_cast<std::size_t>(lf[2])]};
        std::sort(key.begin(), key.end());
        face_ids.emplace(key, 0);
      }
    int next = 0;
    for (auto& [key, id] : face_ids) {
      id = next++;
      mesh.faces.push_back(key);
    }
    for (const auto& cell : mesh.cells) {
      std::vector<int> ids, aligns;
      for (const auto& lf : local_faces) {
        std::array<int, 3> g = {cell[static_cast<std::size_t>(lf[0])],
                                cell[static_cast<std::size_t>(lf[1])],
                                cell[static_cast<std::size_t>(lf[2])]};
        std::array<int, 3> key = g;
        std::sort(key.begin(), key.end());
        ids.push_back(face_ids.at(key));
        int code = -1;
        for (int a = 0; a < 6; ++a) {
          bool ok = true;
          for (int k = 0; k < 3; ++k)
            if (g[static_cast<std::size_t>(face_permutations[a][k])] != key[static_cast<std::size_t>(k)])
              ok = false;
          if (ok) {
            code = a;
            break;
          }
        }
        aligns.push_back(code);
      }
      mesh.cell_faces.push_back(std::move(ids));
      mesh.cell_face_align.push_back(std::move(aligns));
    }
  }

  // Boundary facets: codim-1 entities incident to exactly one cell.
  const auto& local_facets = mesh.ref_cell.entities[static_cast<std::size_t>(d - 1)];
  std::map<std::vector<int>, std::pair<int, int>> facet_count; // key -> (count, (cell,local))
  std::map<std::vector<int>, std::pair<int, int>> facet_owner;
  for (int c = 0; c < mesh.num_cells(); ++c)
    for (int lf = 0; lf < static_cast<int>(local_facets.size()); ++lf) {
      std::vector<int> key;
      for (int lv : local_facets[static_cast<std::size_t>(lf)])
        key.push_back(mesh.cells[static_cast<std::size_t>(c)][static_cast<std::size_t>(lv)]);
      std::sort(key.begin(), key.end());
      auto it = facet_count.find(key);
      if (it == facet_count.end())
        facet_count[key] = {1, 0};
      else
        ++it->second.first;
      facet_owner[key] = {c, lf};
    }
  for (const auto& [key, cnt] : facet_count)
    if (cnt.first == 1) mesh.boundary_facets.push_back(facet_owner.at(key));

  // Dangling vertices are allowed but worth a warning.
  std::vector<bool> used(mesh.vertices.size(), false);
  for (const auto& cell : mesh.cells)
    for (int v : cell) used[static_cast<std::size_t>(v)] = true;
  for (std::size_t v = 0; v < used.size(); ++v)
    if (!used[v]) {
      std::cerr << "tfc: warning: dangling vertex " << v << "\n";
      break;
    }
}

} // namespace detail

inline SimplicialMesh build_mesh(std::vector<std::array<double, 3>> vertices,
                                 std::vector<std::vector<int>> cells, int dim) {
  SimplicialMesh mesh;
  mesh.dim = dim;
  mesh.vertices = std::move(vertices);
  mesh.cells = std::move(cells);
  std::map<std::vector<int>, int> seen;
  for (const auto& cell : mesh.cells) {
    if (static_cast<int>(cell.size()) != dim + 1) throw user_error("cell arity mismatch");
    for (int v : cell)
      if (v < 0 || v >= mesh.num_vertices()) throw user_error("cell references invalid vertex");
    std::vector<int> key = cell;
    std::sort(key.begin(), key.end());
    if (++seen[key] > 1) throw user_error("duplicate cell");
  }
  detail::derive_entities(mesh);
  return mesh;
}

/// Uniform n x n triangulation of the unit square (2 n^2 triangles).
inline SimplicialMesh unit_square(int n) {
  std::vector<std::array<double, 3>> verts;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      verts.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n, 0.0});
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::vector<int>> cells;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      cells.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  return build_mesh(std::move(verts), std::move(cells), 2);
}

/// Uniform n x n x n Freudenthal (six-tetrahedra) subdivision of the unit
/// cube (6 n^3 tetrahedra).
inline SimplicialMesh unit_cube(int n) {
  std::vector<std::array<double, 3>> verts;
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i)
        verts.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n,
                         static_cast<double>(k) / n});
  auto vid = [n](int i, int j, int k) { return (k * (n + 1) + j) * (n + 1) + i; };
  std::vector<std::vector<int>> cells;
  static const int tets[6][4][3] = {
      {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {1, 1, 1}}, {{0, 0, 0}, {1, 0, 0}, {1, 0, 1}, {1, 1, 1}},
      {{0, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, 1, 1}}, {{0, 0, 0}, {0, 1, 0}, {0, 1, 1}, {1, 1, 1}},
      {{0, 0, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}}, {{0, 0, 0}, {0, 0, 1}, {0, 1, 1}, {1, 1, 1}}};
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (const auto& tet : tets) {
          std::vector<int> cell;
          for (const auto& off : tet) cell.push_back(vid(i + off[0], j + off[1], k + off[2]));
          cells.push_back(std::move(cell));
        }
  return build_mesh(std::move(verts), std::move(cells), 3);
}

/// Plain-text mesh format: header "d nv nc", nv coordinate lines, nc cell
/// lines of 0-based vertex ids.
inline SimplicialMesh read_mesh(std::istream& in) {
  int d = 0, nv = 0, nc = 0;
  if (!(in >> d >> nv >> nc)) throw user_error("mesh file: bad header");
  std::vector<std::array<double, 3>> verts(static_cast<std::size_t>(nv));
  for (auto& p : verts)
    for (int c = 0; c < d; ++c)
      if (!(in >> p[static_cast<std::size_t>(c)])) throw user_error("mesh file: bad vertex line");
  std::vector<std::vector<int>> cells(static_cast<std::size_t>(nc));
  for (auto& cell : cells) {
    cell.resize(static_cast<std::size_t>(d) + 1);
    for (auto& v : cell)
      if (!(in >> v)) throw user_error("mesh file: bad cell line");
  }
  return build_mesh(std::move(verts), std::move(cells), d);
}

inline SimplicialMesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw user_error("cannot open mesh file: " + path);
  return read_mesh(in);
}

inline void write_mesh(const SimplicialMesh& mesh, std::ostream& out) {
  out << mesh.dim << " " << mesh.num_vertices() << " " << mesh.num_cells() << "\n";
  out.precision(17);
  for (const auto& p : mesh.vertices) {
    for (int c = 0; c < mesh.dim; ++c) out << (c ? " " : "") << p[static_cast<std::size_t>(c)];
    out << "\n";
  }
  for (const auto& cell : mesh.cells) {
    for (std::size_t k = 0; k < cell.size(); ++k) out << (k ? " " : "") << cell[k];
    out << "\n";
  }
}

} // namespace tfc::fem
