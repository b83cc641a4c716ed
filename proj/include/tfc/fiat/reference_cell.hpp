#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "tfc/errors.hpp"

namespace tfc::fiat {

enum class Shape { interval, triangle, tetrahedron };

inline std::string shape_name(Shape s) {
  switch (s) {
    case Shape::interval: return "interval";
    case Shape::triangle: return "triangle";
    case Shape::tetrahedron: return "tetrahedron";
  }
  return "?";
}

inline Shape shape_from_name(const std::string& name) {
  if (name == "interval") return Shape::interval;
  if (name == "triangle") return Shape::triangle;
  if (name == "tetrahedron") return Shape::tetrahedron;
  throw user_error("unsupported cell: " + name);
}

using Point = std::array<double, 3>;

/// Reference simplex: interval [0,1], triangle (0,0),(1,0),(0,1),
/// tetrahedron (0,0,0),(1,0,0),(0,1,0),(0,0,1).
///
/// Sub-entities of dimension k are the (k+1)-subsets of vertices, each
/// listed as an ascending tuple, and ordered by ascending sorted
/// complement. For codimension one this is "entity i opposite vertex i":
/// triangle edges (1,2),(0,2),(0,1); tetrahedron faces (1,2,3),(0,2,3),
/// (0,1,3),(0,1,2); tetrahedron edges (2,3),(1,3),(1,2),(0,3),(0,2),(0,1).
struct ReferenceCell {
  Shape shape = Shape::interval;
  int dim = 1;
  std::vector<Point> vertices;
  /// entities[k][e] = ascending vertex tuple of entity e of dimension k.
  std::vector<std::vector<std::vector<int>>> entities;

  int num_entities(int topdim) const {
    return static_cast<int>(entities.at(static_cast<std::size_t>(topdim)).size());
  }

  /// Reference measure |K0| = 1/d!.
  double measure() const {
    double m = 1.0;
    for (int k = 2; k <= dim; ++k) m /= k;
    return m;
  }
};

namespace detail {

inline std::vector<std::vector<int>> subsets_by_complement(int nverts, int size) {
  // All `size`-subsets of [0, nverts), ordered by ascending sorted complement.
  std::vector<std::vector<int>> complements;
  std::vector<int> idx(static_cast<std::size_t>(nverts - size));
  // Enumerate complements (sets of nverts-size vertices) in lexicographic order.
  std::vector<int> comb(idx.size());
  for (std::size_t i = 0; i < comb.size(); ++i) comb[i] = static_cast<int>(i);
  std::vector<std::vector<int>> out;
  const int csize = nverts - size;
  if (csize == 0) {
    std::vector<int> all(static_cast<std::size_t>(nverts));
    for (int i = 0; i < nverts; ++i) all[static_cast<std::size_t>(i)] = i;
    return {all};
  }
  while (true) {
    std::vector<int> entity;
    for (int v = 0; v < nverts; ++v)
      if (std::find(comb.begin(), comb.end(), v) == comb.end()) entity.push_back(v);
    out.push_back(entity);
    // next combination
    int i = csize - 1;
    while (i >= 0 && comb[static_cast<std::size_t>(i)] == nverts - csize + i) --i;
    if (i < 0) break;
    ++comb[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < csize; ++j)
      comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

} // namespace detail

inline ReferenceCell make_reference_cell(Shape shape) {
  ReferenceCell cell;
  cell.shape = shape;
  switch (shape) {
    case Shape::interval:
      cell.dim = 1;
      cell.vertices = {{0, 0, 0}, {1, 0, 0}};
      break;
    case Shape::triangle:
      cell.dim = 2;
      cell.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
      break;
    case Shape::tetrahedron:
      cell.dim = 3;
      cell.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
      break;
  }
  const int nv = cell.dim + 1;
  cell.entities.resize(static_cast<std::size_t>(cell.dim) + 1);
  for (int v = 0; v < nv; ++v) cell.entities[0].push_back({v});
  for (int k = 1; k <= cell.dim; ++k)
    cell.entities[static_cast<std::size_t>(k)] = detail::subsets_by_complement(nv, k + 1);
  return cell;
}

} // namespace tfc::fiat
