#pragma once

#include <functional>
#include <iostream>
#include <vector>

#include "tfc/fem/dofmap.hpp"
#include "tfc/fem/function.hpp"
#include "tfc/fem/sparse.hpp"

namespace tfc::fem {

struct DirichletBC {
  std::vector<int> dofs;
  std::vector<double> values;
};

/// Constrain all components at boundary nodes selected by the predicate.
inline DirichletBC dirichlet_bc(
    const DofMap& dofmap, const SpatialFn& value,
    const std::function<bool(const std::array<double, 3>&)>& predicate = nullptr) {
  DirichletBC bc;
  const auto coords = dofmap.node_coordinates();
  const int nc = dofmap.ncomp();
  for (int n : dofmap.boundary_nodes()) {
    const auto& x = coords[static_cast<std::size_t>(n)];
    if (predicate && !predicate(x)) continue;
    for (int c = 0; c < nc; ++c) {
      bc.dofs.push_back(n * nc + c);
      bc.values.push_back(value(x, c));
    }
  }
  if (bc.dofs.empty()) std::cerr << "tfc: warning: boundary predicate selected no dofs\n";
  return bc;
}

/// Row replacement: constrained rows become identity rows with the
/// boundary value on the right-hand side. With `symmetric`, the matching
/// columns are eliminated into b so the system stays symmetric.
inline void apply_dirichlet(CsrMatrix& A, std::vector<double>& b, const DirichletBC& bc,
                            bool symmetric = true) {
  std::vector<char> constrained(static_cast<std::size_t>(A.n), 0);
  std::vector<double> value(static_cast<std::size_t>(A.n), 0.0);
  for (std::size_t k = 0; k < bc.dofs.size(); ++k) {
    constrained[static_cast<std::size_t>(bc.dofs[k])] = 1;
    value[static_cast<std::size_t>(bc.dofs[k])] = bc.values[k];
  }
  if (symmetric) {
    for (int r = 0; r < A.n; ++r) {
      if (constrained[static_cast<std::size_t>(r)]) continue;
      for (std::size_t k = A.row_ptr[static_cast<std::size_t>(r)];
           k < A.row_ptr[static_cast<std::size_t>(r) + 1]; ++k) {
        const int c = A.cols[k];
        if (constrained[static_cast<std::size_t>(c)]) {
          b[static_cast<std::size_t>(r)] -= A.vals[k] * value[static_cast<std::size_t>(c)];
          A.vals[k] = 0.0;
        }
      }
    }
  }
  for (int r = 0; r < A.n; ++r) {
    if (!constrained[static_cast<std::size_t>(r)]) continue;
    for (std::size_t k = A.row_ptr[static_cast<std::size_t>(r)];
         k < A.row_ptr[static_cast<std::size_t>(r) + 1]; ++k)
      A.vals[k] = A.cols[k] == r ? 1.0 : 0.0;
    b[static_cast<std::size_t>(r)] = value[static_cast<std::size_t>(r)];
  }
}

} // namespace tfc::fem
