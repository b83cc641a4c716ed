#pragma once

#include <string>

#include "tfc/fiat/nodal_basis.hpp"
#include "tfc/fiat/reference_cell.hpp"

namespace tfc::form {

/// A finite element identified by family, cell shape and degree.
struct ElementSpec {
  fiat::Family family = fiat::Family::Lagrange;
  fiat::Shape shape = fiat::Shape::triangle;
  int degree = 1;

  int dim() const {
    switch (shape) {
      case fiat::Shape::interval: return 1;
      case fiat::Shape::triangle: return 2;
      case fiat::Shape::tetrahedron: return 3;
    }
    return 0;
  }
  int components() const { return family == fiat::Family::VectorLagrange ? dim() : 1; }

  int scalar_dimension() const {
    int n = 1;
    for (int k = 1; k <= dim(); ++k) n = n * (degree + k) / k;
    return n;
  }
  int local_dimension() const { return scalar_dimension() * components(); }

  std::string str() const {
    return fiat::family_name(family) + "(" + fiat::shape_name(shape) + "," +
           std::to_string(degree) + ")";
  }

  friend bool operator==(const ElementSpec& a, const ElementSpec& b) {
    return a.family == b.family && a.shape == b.shape && a.degree == b.degree;
  }
};

inline fiat::NodalBasis build_basis(const ElementSpec& spec) {
  return fiat::build_nodal_basis(fiat::make_reference_cell(spec.shape), spec.family, spec.degree);
}

} // namespace tfc::form
