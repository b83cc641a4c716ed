#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tfc/errors.hpp"
#include "tfc/fiat/jacobi.hpp"
#include "tfc/fiat/reference_cell.hpp"

namespace tfc::fiat {

struct QuadratureRule {
  ReferenceCell cell;
  std::vector<Point> points;
  std::vector<double> weights;
  int degree = 0; // verified exactness degree

  int num_points() const { return static_cast<int>(points.size()); }
};

namespace detail {

/// Exact integral of X^a over the unit d-simplex: prod(a_i!) / (|a| + d)!.
inline double simplex_monomial_integral(int dim, const std::vector<int>& a) {
  double val = 1.0;
  int total = 0;
  for (int i = 0; i < dim; ++i) {
    for (int k = 2; k <= a[static_cast<std::size_t>(i)]; ++k) val *= k;
    total += a[static_cast<std::size_t>(i)];
  }
  for (int k = 2; k <= total + dim; ++k) val /= k;
  return val;
}

inline bool verify_exactness(const QuadratureRule& rule, int degree) {
  const int d = rule.cell.dim;
  std::vector<int> a(static_cast<std::size_t>(d), 0);
  // Iterate all monomials with total degree <= degree.
  while (true) {
    int total = 0;
    for (int i = 0; i < d; ++i) total += a[static_cast<std::size_t>(i)];
    if (total <= degree) {
      double sum = 0.0;
      for (std::size_t k = 0; k < rule.points.size(); ++k) {
        double term = rule.weights[k];
        for (int i = 0; i < d; ++i)
          for (int p = 0; p < a[static_cast<std::size_t>(i)]; ++p)
            term *= rule.points[k][static_cast<std::size_t>(i)];
        sum += term;
      }
      const double exact = simplex_monomial_integral(d, a);
      if (std::abs(sum - exact) > 1e-12 * std::max(1.0, std::abs(exact))) return false;
    }
    // next multi-index with entries <= degree
    int i = 0;
    while (i < d) {
      if (++a[static_cast<std::size_t>(i)] <= degree) break;
      a[static_cast<std::size_t>(i)] = 0;
      ++i;
    }
    if (i == d) break;
  }
  return true;
}

inline QuadratureRule collapsed_rule(const ReferenceCell& cell, int m) {
  QuadratureRule rule;
  rule.cell = cell;
  const auto [px, wx] = gauss_jacobi_rule(0.0, m);
  if (cell.dim == 1) {
    for (int i = 0; i < m; ++i) {
      rule.points.push_back({0.5 * (1.0 + px[static_cast<std::size_t>(i)]), 0, 0});
      rule.weights.push_back(0.5 * wx[static_cast<std::size_t>(i)]);
    }
  } else if (cell.dim == 2) {
    const auto [py, wy] = gauss_jacobi_rule(1.0, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const double xi = px[static_cast<std::size_t>(i)], yj = py[static_cast<std::size_t>(j)];
        rule.points.push_back({0.25 * (1.0 + xi) * (1.0 - yj), 0.5 * (1.0 + yj), 0});
        rule.weights.push_back(0.125 * wx[static_cast<std::size_t>(i)] * wy[static_cast<std::size_t>(j)]);
      }
  } else {
    const auto [py, wy] = gauss_jacobi_rule(1.0, m);
    const auto [pz, wz] = gauss_jacobi_rule(2.0, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
          const double xi = px[static_cast<std::size_t>(i)], yj = py[static_cast<std::size_t>(j)],
                       zk = pz[static_cast<std::size_t>(k)];
          rule.points.push_back({0.125 * (1.0 + xi) * (1.0 - yj) * (1.0 - zk),
                                 0.25 * (1.0 + yj) * (1.0 - zk), 0.5 * (1.0 + zk)});
          rule.weights.push_back(0.015625 * wx[static_cast<std::size_t>(i)] *
                                 wy[static_cast<std::size_t>(j)] * wz[static_cast<std::size_t>(k)]);
        }
  }
  return rule;
}

} // namespace detail

/// Tensor-product Gauss-Jacobi rule on collapsed coordinates, exact for all
/// polynomials of total degree <= `degree`. Exactness is verified against
/// closed-form simplex monomial integrals at construction.
inline QuadratureRule make_quadrature(const ReferenceCell& cell, int degree) {
  if (degree < 0) throw user_error("quadrature degree must be nonnegative");
  constexpr int max_points_per_dir = 30;
  int m = degree / 2 + 1;
  for (; m <= max_points_per_dir; ++m) {
    QuadratureRule rule = detail::collapsed_rule(cell, m);
    if (detail::verify_exactness(rule, degree)) {
      rule.degree = degree;
      return rule;
    }
  }
  throw user_error("degree unsupported: " + std::to_string(degree));
}

} // namespace tfc::fiat
