#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <iostream>
#include <string>
#include <vector>

#include "tfc/errors.hpp"
#include "tfc/fiat/node_set.hpp"
#include "tfc/fiat/prime_basis.hpp"
#include "tfc/fiat/quadrature.hpp"
#include "tfc/fiat/reference_cell.hpp"

namespace tfc::fiat {

enum class Family { Lagrange, DiscontinuousLagrange, VectorLagrange };

inline std::string family_name(Family f) {
  switch (f) {
    case Family::Lagrange: return "Lagrange";
    case Family::DiscontinuousLagrange: return "Discontinuous Lagrange";
    case Family::VectorLagrange: return "Vector Lagrange";
  }
  return "?";
}

/// Dense point tabulation of a nodal basis. Layout (documented in
/// docs/formats.md): values[(i*npoints + pt)*ncomp + c] and
/// grads[((i*npoints + pt)*ncomp + c)*dim + l] = d Phi_i[c] / d X_l.
struct Tabulation {
  int nfuncs = 0;
  int npoints = 0;
  int ncomp = 1;
  int dim = 0;
  int order = 0;
  std::vector<double> values;
  std::vector<double> grads;

  double value(int f, int pt, int c = 0) const {
    return values[(static_cast<std::size_t>(f) * static_cast<std::size_t>(npoints) +
                   static_cast<std::size_t>(pt)) *
                      static_cast<std::size_t>(ncomp) +
                  static_cast<std::size_t>(c)];
  }
  double grad(int f, int pt, int l) const { return grad_c(f, pt, 0, l); }
  double grad_c(int f, int pt, int c, int l) const {
    return grads[((static_cast<std::size_t>(f) * static_cast<std::size_t>(npoints) +
                   static_cast<std::size_t>(pt)) *
                      static_cast<std::size_t>(ncomp) +
                  static_cast<std::size_t>(c)) *
                     static_cast<std::size_t>(dim) +
                 static_cast<std::size_t>(l)];
  }
};

/// Nodal basis Phi_i = sum_j alpha_ij Psi_j obtained by solving the
/// Vandermonde system V alpha^T = I with V_ij = nu_i(Psi_j). Vector
/// elements are built componentwise from the scalar element, dofs blocked
/// by node: local index = node * ncomp + component.
struct NodalBasis {
  ReferenceCell cell;
  Family family = Family::Lagrange;
  int degree = 1;
  int ncomp = 1;
  PrimeBasis prime;
  std::vector<double> alpha; // row-major n_scalar x n_scalar
  NodeSet nodes;             // scalar node set
  double condition_number = 1.0;

  int scalar_dimension() const { return nodes.size(); }
  int dimension() const { return nodes.size() * ncomp; }

  /// All nodes including per-component copies (blocked by node).
  std::vector<Node> value_nodes() const {
    std::vector<Node> out;
    for (const auto& n : nodes.nodes)
      for (int c = 0; c < ncomp; ++c) out.push_back({n.point, c});
    return out;
  }

  Tabulation tabulate(const std::vector<Point>& points, int order = 1) const {
    if (order < 0 || order > 1) throw user_error("unsupported derivative order");
    const int ns = scalar_dimension();
    const int npts = static_cast<int>(points.size());
    const int d = cell.dim;
    const ScalarTabulation prime_tab = prime.tabulate(points);
    // scalar nodal values: Phi = alpha * Psi
    std::vector<double> sval(static_cast<std::size_t>(ns) * static_cast<std::size_t>(npts), 0.0);
    std::vector<double> sgrad(
        static_cast<std::size_t>(ns) * static_cast<std::size_t>(npts) * static_cast<std::size_t>(d),
        0.0);
    for (int i = 0; i < ns; ++i)
      for (int j = 0; j < ns; ++j) {
        const double a = alpha[static_cast<std::size_t>(i) * static_cast<std::size_t>(ns) +
                               static_cast<std::size_t>(j)];
        if (a == 0.0) continue;
        for (int pt = 0; pt < npts; ++pt) {
          sval[static_cast<std::size_t>(i) * static_cast<std::size_t>(npts) +
               static_cast<std::size_t>(pt)] += a * prime_tab.value(j, pt);
          for (int l = 0; l < d; ++l)
            sgrad[(static_cast<std::size_t>(i) * static_cast<std::size_t>(npts) +
                   static_cast<std::size_t>(pt)) *
                      static_cast<std::size_t>(d) +
                  static_cast<std::size_t>(l)] += a * prime_tab.grad(j, pt, l);
        }
      }
    Tabulation tab;
    tab.nfuncs = dimension();
    tab.npoints = npts;
    tab.ncomp = ncomp;
    tab.dim = d;
    tab.order = order;
    tab.values.assign(static_cast<std::size_t>(tab.nfuncs) * static_cast<std::size_t>(npts) *
                          static_cast<std::size_t>(ncomp),
                      0.0);
    tab.grads.assign(static_cast<std::size_t>(tab.nfuncs) * static_cast<std::size_t>(npts) *
                         static_cast<std::size_t>(ncomp) * static_cast<std::size_t>(d),
                     0.0);
    for (int n = 0; n < ns; ++n)
      for (int c = 0; c < ncomp; ++c) {
        const int f = n * ncomp + c;
        for (int pt = 0; pt < npts; ++pt) {
          tab.values[(static_cast<std::size_t>(f) * static_cast<std::size_t>(npts) +
                      static_cast<std::size_t>(pt)) *
                         static_cast<std::size_t>(ncomp) +
                     static_cast<std::size_t>(c)] =
              sval[static_cast<std::size_t>(n) * static_cast<std::size_t>(npts) +
                   static_cast<std::size_t>(pt)];
          for (int l = 0; l < d; ++l)
            tab.grads[((static_cast<std::size_t>(f) * static_cast<std::size_t>(npts) +
                        static_cast<std::size_t>(pt)) *
                           static_cast<std::size_t>(ncomp) +
                       static_cast<std::size_t>(c)) *
                          static_cast<std::size_t>(d) +
                      static_cast<std::size_t>(l)] =
                sgrad[(static_cast<std::size_t>(n) * static_cast<std::size_t>(npts) +
                       static_cast<std::size_t>(pt)) *
                          static_cast<std::size_t>(d) +
                      static_cast<std::size_t>(l)];
        }
      }
    return tab;
  }
};

inline constexpr int max_lagrange_degree = 8;

inline NodalBasis build_nodal_basis(const ReferenceCell& cell, Family family, int degree) {
  const bool continuous = family != Family::DiscontinuousLagrange;
  if (degree > max_lagrange_degree)
    throw user_error("unsupported Lagrange degree " + std::to_string(degree) +
                     " (cap is " + std::to_string(max_lagrange_degree) + ")");
  NodalBasis basis;
  basis.cell = cell;
  basis.family = family;
  basis.degree = degree;
  basis.ncomp = family == Family::VectorLagrange ? cell.dim : 1;
  basis.prime = build_prime_basis(cell, degree);
  basis.nodes = lagrange_node_set(cell, degree, continuous);
  const int n = basis.nodes.size();
  if (n != basis.prime.dimension())
    throw user_error("degenerate node set: node count does not match space dimension");

  std::vector<Point> pts;
  for (const auto& nd : basis.nodes.nodes) pts.push_back(nd.point);
  const ScalarTabulation psi = basis.prime.tabulate(pts);
  Eigen::MatrixXd V(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) V(i, j) = psi.value(j, i);

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(V);
  basis.condition_number = 1.0 / std::max(lu.rcond(), 1e-300);
  if (basis.condition_number > 1e8)
    std::cerr << "tfc: Vandermonde condition number " << basis.condition_number << " for "
              << family_name(family) << " degree " << degree << " on " << shape_name(cell.shape)
              << "\n";
  const Eigen::MatrixXd alphaT = lu.solve(Eigen::MatrixXd::Identity(n, n));
  const double residual = (V * alphaT - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!std::isfinite(residual) || residual > 1e-10)
    throw user_error("degenerate node set: Vandermonde residual " + std::to_string(residual));
  basis.alpha.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      basis.alpha[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                  static_cast<std::size_t>(j)] = alphaT(j, i);
  return basis;
}

/// Convenience overload used by tests and the CLI.
inline Tabulation tabulate(const NodalBasis& basis, const std::vector<Point>& points,
                           int derivative_order = 0) {
  return basis.tabulate(points, derivative_order);
}

} // namespace tfc::fiat
