#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tfc/errors.hpp"
#include "tfc/fem/sparse.hpp"

namespace tfc::fem {

struct CgResult {
  std::vector<double> x;
  int iterations = 0;
  double residual = 0.0;
};

/// Conjugate gradients with Jacobi preconditioning. A must be symmetric
/// positive definite after boundary conditions (documented, not verified).
/// Converged when ||Ax - b|| <= rtol ||b||.
inline CgResult solve_cg(const CsrMatrix& A, const std::vector<double>& b, double rtol = 1e-10,
                         int max_iter = 0, bool jacobi = true) {
  const int n = A.n;
  if (max_iter <= 0) max_iter = 10 * n + 100;
  CgResult result;
  result.x.assign(static_cast<std::size_t>(n), 0.0);

  std::vector<double> diag(static_cast<std::size_t>(n), 1.0);
  if (jacobi)
    for (int r = 0; r < n; ++r) {
      const double d = A.entry(r, r);
      if (d != 0.0) diag[static_cast<std::size_t>(r)] = 1.0 / d;
    }

  double bnorm = 0.0;
  for (double v : b) bnorm += v * v;
  bnorm = std::sqrt(bnorm);
  if (bnorm == 0.0) {
    result.residual = 0.0;
    return result;
  }

  std::vector<double> res = b; // x0 = 0
  std::vector<double> z(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    z[static_cast<std::size_t>(i)] = diag[static_cast<std::size_t>(i)] * res[static_cast<std::size_t>(i)];
  std::vector<double> p = z;
  double rz = 0.0;
  for (int i = 0; i < n; ++i) rz += res[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];

  for (int it = 0; it < max_iter; ++it) {
    const std::vector<double> Ap = A.multiply(p);
    double pAp = 0.0;
    for (int i = 0; i < n; ++i) pAp += p[static_cast<std::size_t>(i)] * Ap[static_cast<std::size_t>(i)];
    if (pAp == 0.0) break;
    const double alpha = rz / pAp;
    double rnorm = 0.0;
    for (int i = 0; i < n; ++i) {
      result.x[static_cast<std::size_t>(i)] += alpha * p[static_cast<std::size_t>(i)];
      res[static_cast<std::size_t>(i)] -= alpha * Ap[static_cast<std::size_t>(i)];
      rnorm += res[static_cast<std::size_t>(i)] * res[static_cast<std::size_t>(i)];
    }
    result.iterations = it + 1;
    result.residual = std::sqrt(rnorm);
    if (result.residual <= rtol * bnorm) return result;
    double rz_next = 0.0;
    for (int i = 0; i < n; ++i) {
      z[static_cast<std::size_t>(i)] = diag[static_cast<std::size_t>(i)] * res[static_cast<std::size_t>(i)];
      rz_next += res[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
    }
    const double beta = rz_next / rz;
    rz = rz_next;
    for (int i = 0; i < n; ++i)
      p[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)] + beta * p[static_cast<std::size_t>(i)];
  }
  throw verify_error("CG did not converge: residual " + std::to_string(result.residual) + " after " +
                     std::to_string(result.iterations) + " iterations");
}

} // namespace tfc::fem
