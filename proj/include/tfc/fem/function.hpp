#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "tfc/fem/dofmap.hpp"
#include "tfc/fiat/quadrature.hpp"

namespace tfc::fem {

/// A discrete function: global coefficient vector over a function space,
/// restricted per cell through the dofmap.
struct CoefficientFunction {
  const DofMap* dofmap = nullptr;
  std::vector<double> values; // length = dofmap->global_dimension()

  std::vector<double> restrict_to(int cell) const {
    const auto dofs = dofmap->cell_dofs(cell);
    std::vector<double> out(dofs.size());
    for (std::size_t k = 0; k < dofs.size(); ++k)
      out[k] = values[static_cast<std::size_t>(dofs[k])];
    return out;
  }
};

/// Pointwise function of space and component.
using SpatialFn = std::function<double(const std::array<double, 3>&, int)>;

/// Nodal interpolation onto a (vector) Lagrange space.
inline CoefficientFunction interpolate(const DofMap& dofmap, const SpatialFn& f) {
  CoefficientFunction u;
  u.dofmap = &dofmap;
  u.values.assign(static_cast<std::size_t>(dofmap.global_dimension()), 0.0);
  const auto coords = dofmap.node_coordinates();
  const int nc = dofmap.ncomp();
  for (int n = 0; n < dofmap.scalar_dimension(); ++n)
    for (int c = 0; c < nc; ++c)
      u.values[static_cast<std::size_t>(n * nc + c)] = f(coords[static_cast<std::size_t>(n)], c);
  return u;
}

/// L2 norm of (u_h - exact) over the mesh, by quadrature of the stated
/// degree on every cell.
inline double error_l2(const CoefficientFunction& u, const SpatialFn& exact, int quad_degree) {
  const DofMap& dofmap = *u.dofmap;
  const SimplicialMesh& mesh = dofmap.mesh();
  const fiat::NodalBasis basis = form::build_basis(dofmap.spec().element);
  const auto rule =
      fiat::make_quadrature(fiat::make_reference_cell(dofmap.spec().element.shape), quad_degree);
  const fiat::Tabulation tab = basis.tabulate(rule.points, 0);
  const int nc = basis.ncomp;
  double acc = 0.0;
  for (int cell = 0; cell < mesh.num_cells(); ++cell) {
    const auto geom = mesh.geometry(cell);
    const auto local = u.restrict_to(cell);
    for (int pt = 0; pt < rule.num_points(); ++pt) {
      const auto x = mesh.map_point(cell, rule.points[static_cast<std::size_t>(pt)]);
      for (int c = 0; c < nc; ++c) {
        double uh = 0.0;
        for (int i = 0; i < basis.dimension(); ++i) uh += local[static_cast<std::size_t>(i)] * tab.value(i, pt, c);
        const double diff = uh - exact(x, c);
        acc += rule.weights[static_cast<std::size_t>(pt)] * std::abs(geom.det) * diff * diff;
      }
    }
  }
  return std::sqrt(acc);
}

} // namespace tfc::fem
