#pragma once

#include <cstdint>

#include "tfc/fiat/quadrature.hpp"
#include "tfc/rep/reference_tensor.hpp"

namespace tfc::rep {

/// Exact integer multiply-add models for the evaluation paths.
///   direct / matvec:  sum_k |I_K| * |A_k|   (one MAP per matrix entry)
///   quadrature_model: N_q * |I_K| * d for forms with derivatives,
///                     N_q * |I_K| otherwise (the leading N_q n0^2 d term)
///   quadrature_full:  N_q |I_K| (d+2) + N_q n_max d^2 (adds the cost of
///                     mapping reference gradients to the cell)
struct FlopCount {
  std::int64_t direct = 0;
  std::int64_t matvec = 0;
  std::int64_t geometry = 0;
  std::int64_t quadrature_model = 0;
  std::int64_t quadrature_full = 0;
  int quadrature_points = 0;
};

inline FlopCount flop_count(const ReferenceTensor& ref, const form::CanonicalForm& cf) {
  FlopCount fc;
  std::size_t rows = 1;
  for (int d : ref.primary_dims) rows *= static_cast<std::size_t>(d);
  for (const auto& t : ref.terms)
    fc.direct += static_cast<std::int64_t>(rows) * static_cast<std::int64_t>(t.num_secondary());
  fc.matvec = fc.direct;

  for (const auto& t : ref.terms) {
    // per-cell geometry work: internal sums of Jacobian products plus
    // coefficient outer products, per secondary entry
    int jac_factors = 0, coef_factors = 0;
    for (const auto& acc : t.layout.access)
      if (acc.has_derivative) ++jac_factors;
    for (const auto& ax : t.layout.secondary)
      if (ax.kind == SecondaryAxis::Kind::coefficient) ++coef_factors;
    std::int64_t internal = 1;
    for (int r : t.layout.internal_ranges) internal *= r;
    fc.geometry += static_cast<std::int64_t>(t.num_secondary()) *
                   (internal * jac_factors + coef_factors + 1);
  }

  if (!cf.monomials.empty()) {
    const int d = cf.dim();
    int degree = 0;
    bool has_derivatives = false;
    int n_max = 0;
    for (const auto& m : cf.monomials) {
      int dsum = 0;
      for (const auto& f : m.factors) {
        dsum += f.element.degree;
        if (!f.derivatives.empty()) has_derivatives = true;
        n_max = std::max(n_max, f.element.local_dimension());
      }
      degree = std::max(degree, dsum);
    }
    const auto rule = fiat::make_quadrature(
        fiat::make_reference_cell(cf.arguments.front().shape), degree);
    fc.quadrature_points = rule.num_points();
    const std::int64_t nq = fc.quadrature_points;
    fc.quadrature_model =
        nq * static_cast<std::int64_t>(rows) * (has_derivatives ? d : 1);
    fc.quadrature_full = nq * static_cast<std::int64_t>(rows) * (d + 2) +
                         (has_derivatives ? nq * n_max * d * d : 0);
  }
  return fc;
}

} // namespace tfc::rep
