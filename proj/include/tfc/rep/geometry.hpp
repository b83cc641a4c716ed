#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "tfc/errors.hpp"
#include "tfc/form/canonical.hpp"

namespace tfc::rep {

/// Affine geometry of one simplicial cell: x = F_K(X) = F' X + b with
/// F' columns the vertex differences. invJ(r, c) = dX_r / dx_c.
struct CellGeometry {
  int dim = 0;
  std::array<double, 9> jacobian{};  // row-major F'
  std::array<double, 9> inverse{};   // row-major (F')^{-1}
  double det = 1.0;                  // signed det F'

  double J(int r, int c) const { return jacobian[static_cast<std::size_t>(r * dim + c)]; }
  double invJ(int r, int c) const { return inverse[static_cast<std::size_t>(r * dim + c)]; }
};

/// Build cell geometry from d+1 vertex coordinate tuples.
inline CellGeometry cell_geometry(const std::vector<std::array<double, 3>>& verts, int dim) {
  CellGeometry g;
  g.dim = dim;
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r)
      g.jacobian[static_cast<std::size_t>(r * dim + c)] =
          verts[static_cast<std::size_t>(c + 1)][static_cast<std::size_t>(r)] -
          verts[0][static_cast<std::size_t>(r)];
  auto& a = g.jacobian;
  auto& inv = g.inverse;
  if (dim == 1) {
    g.det = a[0];
    if (g.det != 0.0) inv[0] = 1.0 / g.det;
  } else if (dim == 2) {
    g.det = a[0] * a[3] - a[1] * a[2];
    if (g.det != 0.0) {
      inv[0] = a[3] / g.det;
      inv[1] = -a[1] / g.det;
      inv[2] = -a[2] / g.det;
      inv[3] = a[0] / g.det;
    }
  } else {
    g.det = a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
            a[2] * (a[3] * a[7] - a[4] * a[6]);
    if (g.det != 0.0) {
      inv[0] = (a[4] * a[8] - a[5] * a[7]) / g.det;
      inv[1] = (a[2] * a[7] - a[1] * a[8]) / g.det;
      inv[2] = (a[1] * a[5] - a[2] * a[4]) / g.det;
      inv[3] = (a[5] * a[6] - a[3] * a[8]) / g.det;
      inv[4] = (a[0] * a[8] - a[2] * a[6]) / g.det;
      inv[5] = (a[2] * a[3] - a[0] * a[5]) / g.det;
      inv[6] = (a[3] * a[7] - a[4] * a[6]) / g.det;
      inv[7] = (a[1] * a[6] - a[0] * a[7]) / g.det;
      inv[8] = (a[0] * a[4] - a[1] * a[3]) / g.det;
    }
  }
  if (g.det == 0.0 || !std::isfinite(1.0 / g.det)) throw user_error("degenerate cell");
  return g;
}

/// How a monomial's secondary axes, auxiliary sums and internal geometry
/// sums are laid out. Shared by the reference-tensor construction and the
/// geometry plan so both sides flatten identically (row-major, spatial
/// axes before coefficient axes).
struct SecondaryAxis {
  enum class Kind { derivative, spatial, coefficient };
  Kind kind = Kind::derivative;
  int size = 0;
  int factor = -1;   // derivative: owning factor; coefficient: owning factor
  int bound_id = -1; // spatial/coefficient: the monomial bound index
};

struct FactorAccess {
  // Component of the factor's basis function: one of
  //   fixed >= 0, aux slot, secondary axis, or none.
  int comp_fixed = -1, comp_aux = -1, comp_axis = -1;
  // For the (single) physical derivative direction, if any:
  bool has_derivative = false;
  int ref_axis = -1;                                    // secondary axis of the reference direction
  int phys_fixed = -1, phys_internal = -1, phys_axis = -1; // physical direction resolution
};

struct MonomialLayout {
  std::vector<SecondaryAxis> secondary;
  std::vector<int> aux_ranges;      // auxiliary (reference-side) sums, each of range d
  std::vector<int> internal_ranges; // geometry-side sums B', each of range d
  std::vector<FactorAccess> access; // per factor
  std::size_t num_secondary() const {
    std::size_t n = 1;
    for (const auto& ax : secondary) n *= static_cast<std::size_t>(ax.size);
    return n;
  }
};

/// Classify each bound index of a monomial by sidedness: reference-only
/// occurrences are summed inside A0 (auxiliary), geometry-only occurrences
/// are summed inside G_K per cell (internal), and both-sided occurrences
/// plus per-derivative reference directions and coefficient expansion
/// indices become secondary axes.
inline MonomialLayout analyze_monomial(const form::Monomial& m, int dim) {
  MonomialLayout layout;
  const int nb = static_cast<int>(m.bounds.size());
  std::vector<bool> ref_side(static_cast<std::size_t>(nb), false);
  std::vector<bool> geo_side(static_cast<std::size_t>(nb), false);
  for (const auto& f : m.factors) {
    if (f.component.is_bound()) ref_side[static_cast<std::size_t>(f.component.value)] = true;
    for (const auto& dref : f.derivatives)
      if (dref.is_bound()) geo_side[static_cast<std::size_t>(dref.value)] = true;
    if (f.basis_bound >= 0) {
      ref_side[static_cast<std::size_t>(f.basis_bound)] = true;
      geo_side[static_cast<std::size_t>(f.basis_bound)] = true;
    }
  }

  // Secondary axes: derivative reference directions in factor order...
  for (std::size_t j = 0; j < m.factors.size(); ++j)
    if (!m.factors[j].derivatives.empty())
      layout.secondary.push_back(
          {SecondaryAxis::Kind::derivative, dim, static_cast<int>(j), -1});
  // ...then both-sided spatial bounds in bound order...
  std::vector<int> bound_to_axis(static_cast<std::size_t>(nb), -1);
  std::vector<int> bound_to_aux(static_cast<std::size_t>(nb), -1);
  std::vector<int> bound_to_internal(static_cast<std::size_t>(nb), -1);
  for (int b = 0; b < nb; ++b) {
    const auto& bi = m.bounds[static_cast<std::size_t>(b)];
    if (bi.coefficient_expansion) continue;
    const bool r = ref_side[static_cast<std::size_t>(b)], g = geo_side[static_cast<std::size_t>(b)];
    if (r && g) {
      bound_to_axis[static_cast<std::size_t>(b)] = static_cast<int>(layout.secondary.size());
      layout.secondary.push_back({SecondaryAxis::Kind::spatial, bi.range, -1, b});
    } else if (r) {
      bound_to_aux[static_cast<std::size_t>(b)] = static_cast<int>(layout.aux_ranges.size());
      layout.aux_ranges.push_back(bi.range);
    } else if (g) {
      bound_to_internal[static_cast<std::size_t>(b)] = static_cast<int>(layout.internal_ranges.size());
      layout.internal_ranges.push_back(bi.range);
    }
    // A bound index with no occurrence cannot arise from lowering.
  }
  // ...then coefficient expansion axes in factor order.
  for (std::size_t j = 0; j < m.factors.size(); ++j) {
    const auto& f = m.factors[j];
    if (f.basis_bound >= 0) {
      bound_to_axis[static_cast<std::size_t>(f.basis_bound)] =
          static_cast<int>(layout.secondary.size());
      layout.secondary.push_back({SecondaryAxis::Kind::coefficient,
                                  m.bounds[static_cast<std::size_t>(f.basis_bound)].range,
                                  static_cast<int>(j), f.basis_bound});
    }
  }

  // Per-factor access paths.
  int deriv_axis = 0;
  for (std::size_t j = 0; j < m.factors.size(); ++j) {
    const auto& f = m.factors[j];
    FactorAccess acc;
    if (f.component.is_fixed()) acc.comp_fixed = f.component.value;
    if (f.component.is_bound()) {
      const int b = f.component.value;
      if (bound_to_axis[static_cast<std::size_t>(b)] >= 0)
        acc.comp_axis = bound_to_axis[static_cast<std::size_t>(b)];
      else
        acc.comp_aux = bound_to_aux[static_cast<std::size_t>(b)];
    }
    if (!f.derivatives.empty()) {
      acc.has_derivative = true;
      acc.ref_axis = deriv_axis++;
      const auto& dref = f.derivatives.front();
      if (dref.is_fixed()) {
        acc.phys_fixed = dref.value;
      } else {
        const int b = dref.value;
        if (bound_to_axis[static_cast<std::size_t>(b)] >= 0)
          acc.phys_axis = bound_to_axis[static_cast<std::size_t>(b)];
        else
          acc.phys_internal = bound_to_internal[static_cast<std::size_t>(b)];
      }
    }
    layout.access.push_back(acc);
  }
  return layout;
}

/// Symbolic per-cell recipe for one term's geometry tensor: a prefactor,
/// det F' once, one inverse-Jacobian entry per derivative occurrence, the
/// outer product of coefficient weights, and a sum over internal indices.
struct GeometryTerm {
  double prefactor = 1.0;
  MonomialLayout layout;
  std::vector<int> coefficient_slots; // user slot per coefficient factor, factor order
};

struct GeometryPlan {
  int dim = 0;
  std::vector<GeometryTerm> terms;
};

/// Evaluate one term's geometry tensor, flattened row-major over the
/// secondary axes. `coefficients` are per-user-slot local dof tuples.
inline std::vector<double> evaluate_geometry_term(
    const GeometryTerm& term, const CellGeometry& geom,
    const std::vector<std::vector<double>>& coefficients) {
  const auto& layout = term.layout;
  const std::size_t total = layout.num_secondary();
  std::vector<double> g(total, 0.0);
  std::vector<int> alpha(layout.secondary.size(), 0);
  const std::size_t ninternal = layout.internal_ranges.size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    // decode row-major alpha
    std::size_t rem = flat;
    for (std::size_t k = layout.secondary.size(); k-- > 0;) {
      alpha[k] = static_cast<int>(rem % static_cast<std::size_t>(layout.secondary[k].size));
      rem /= static_cast<std::size_t>(layout.secondary[k].size);
    }
    // coefficient weights
    double weight = term.prefactor * geom.det;
    std::size_t coef_pos = 0;
    for (std::size_t ax = 0; ax < layout.secondary.size(); ++ax) {
      if (layout.secondary[ax].kind != SecondaryAxis::Kind::coefficient) continue;
      const int slot = term.coefficient_slots[coef_pos++];
      weight *= coefficients.at(static_cast<std::size_t>(slot))
                    .at(static_cast<std::size_t>(alpha[ax]));
    }
    // sum over internal (B') assignments of the inverse-Jacobian products
    double sum = 0.0;
    std::vector<int> beta(ninternal, 0);
    while (true) {
      double prod = 1.0;
      for (std::size_t j = 0; j < layout.access.size(); ++j) {
        const auto& acc = layout.access[j];
        if (!acc.has_derivative) continue;
        const int row = alpha[static_cast<std::size_t>(acc.ref_axis)];
        int col = acc.phys_fixed;
        if (acc.phys_axis >= 0) col = alpha[static_cast<std::size_t>(acc.phys_axis)];
        if (acc.phys_internal >= 0) col = beta[static_cast<std::size_t>(acc.phys_internal)];
        prod *= geom.invJ(row, col);
      }
      sum += prod;
      std::size_t k = 0;
      for (; k < ninternal; ++k) {
        if (++beta[k] < layout.internal_ranges[k]) break;
        beta[k] = 0;
      }
      if (k == ninternal) break;
    }
    g[flat] = weight * sum;
  }
  return g;
}

} // namespace tfc::rep
