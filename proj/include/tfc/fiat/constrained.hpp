#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "tfc/errors.hpp"
#include "tfc/fiat/prime_basis.hpp"

namespace tfc::fiat {

/// A linear functional evaluable on prime basis functions: given the basis
/// and a function index j, returns l(Psi_j).
using Constraint = std::function<double(const PrimeBasis&, int)>;

/// Prime basis of the constrained subspace {v : l_i(v) = 0}. The nullspace
/// of L_ij = l_i(Psi_j) is computed by SVD; singular values below
/// 1e-10 * sigma_max count as zero. The returned functions are orthonormal
/// combinations of the (orthonormal) input basis.
inline PrimeBasis constrained_prime_basis(const PrimeBasis& prime,
                                          const std::vector<Constraint>& constraints) {
  const int n = prime.dimension();
  const int nc = static_cast<int>(constraints.size());
  if (nc == 0) return prime;

  Eigen::MatrixXd L(nc, n);
  for (int i = 0; i < nc; ++i)
    for (int j = 0; j < n; ++j) L(i, j) = constraints[static_cast<std::size_t>(i)](prime, j);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(L, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const double cutoff = 1e-10 * (sigma.size() > 0 ? sigma(0) : 0.0);
  int rank = 0;
  for (int i = 0; i < sigma.size(); ++i)
    if (sigma(i) > cutoff) ++rank;
  if (rank < nc)
    throw user_error("dependent constraints: rank " + std::to_string(rank) + " < " +
                     std::to_string(nc));

  if (prime.constrained()) throw user_error("nested constrained bases are not supported");
  const int n0 = n - rank;
  const Eigen::MatrixXd nullspace = svd.matrixV().rightCols(n0); // n x n0, orthonormal columns
  std::vector<double> coeffs(static_cast<std::size_t>(n0) * static_cast<std::size_t>(n));
  for (int f = 0; f < n0; ++f)
    for (int j = 0; j < n; ++j)
      coeffs[static_cast<std::size_t>(f) * static_cast<std::size_t>(n) +
             static_cast<std::size_t>(j)] = nullspace(j, f);
  return prime.with_coefficients(std::move(coeffs));
}

} // namespace tfc::fiat
