#pragma once

#include <cstddef>
#include <vector>

#include "tfc/errors.hpp"
#include "tfc/rep/reference_tensor.hpp"

namespace tfc::rep {

/// The reference tensor flattened to a |I_K| x sum_k |A_k| matrix with
/// terms concatenated column-wise: a^K = A0bar g_K (Poisson P2 on the
/// triangle: 36 x 4).
struct FlattenedKernel {
  int rank = 0;
  std::vector<int> primary_dims;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> term_offsets; // column offset of each term
  std::vector<double> matrix;            // row-major rows x cols

  double at(std::size_t r, std::size_t c) const { return matrix[r * cols + c]; }
};

inline FlattenedKernel build_flattened(const ReferenceTensor& ref) {
  FlattenedKernel k;
  k.rank = ref.rank;
  k.primary_dims = ref.primary_dims;
  k.rows = 1;
  for (int d : ref.primary_dims) k.rows *= static_cast<std::size_t>(d);
  k.cols = 0;
  for (const auto& t : ref.terms) {
    k.term_offsets.push_back(k.cols);
    k.cols += t.num_secondary();
  }
  k.matrix.assign(k.rows * k.cols, 0.0);
  for (std::size_t ti = 0; ti < ref.terms.size(); ++ti) {
    const auto& t = ref.terms[ti];
    const std::size_t na = t.num_secondary();
    for (std::size_t r = 0; r < k.rows; ++r)
      for (std::size_t c = 0; c < na; ++c)
        k.matrix[r * k.cols + k.term_offsets[ti] + c] = t.values[r * na + c];
  }
  return k;
}

/// Concatenate per-term geometry vectors in term order.
inline std::vector<double> flatten_geometry(const std::vector<std::vector<double>>& g) {
  std::vector<double> out;
  for (const auto& gt : g) out.insert(out.end(), gt.begin(), gt.end());
  return out;
}

/// a^K = A0bar g_K as a plain matrix-vector product.
inline std::vector<double> element_tensor_affine(const FlattenedKernel& kernel,
                                                 const std::vector<double>& g) {
  if (g.size() != kernel.cols) throw std::logic_error("flattened geometry size mismatch");
  std::vector<double> a(kernel.rows, 0.0);
  for (std::size_t r = 0; r < kernel.rows; ++r) {
    const double* row = kernel.matrix.data() + r * kernel.cols;
    double sum = 0.0;
    for (std::size_t c = 0; c < kernel.cols; ++c) sum += row[c] * g[c];
    a[r] = sum;
  }
  return a;
}

/// Batched multi-cell evaluation: one matrix-matrix product over a cell
/// block. G is column-major cols x ncells (cell k's flattened geometry in
/// column k); the result is row-major rows x ncells.
inline std::vector<double> element_tensors_batched(const FlattenedKernel& kernel,
                                                   const std::vector<double>& G,
                                                   std::size_t ncells) {
  if (G.size() != kernel.cols * ncells) throw std::logic_error("geometry block size mismatch");
  std::vector<double> A(kernel.rows * ncells, 0.0);
  for (std::size_t r = 0; r < kernel.rows; ++r) {
    const double* row = kernel.matrix.data() + r * kernel.cols;
    for (std::size_t c = 0; c < kernel.cols; ++c) {
      const double v = row[c];
      if (v == 0.0) continue;
      const double* gcol = G.data() + c * ncells;
      double* arow = A.data() + r * ncells;
      for (std::size_t k = 0; k < ncells; ++k) arow[k] += v * gcol[k];
    }
  }
  return A;
}

/// Direct contraction, one inner product per entry (the simple
/// ComputeElementTensor loop). Serves as the reference path for the
/// optimizer and the benchmarks.
inline std::vector<double> element_tensor_direct(const ReferenceTensor& ref,
                                                 const std::vector<std::vector<double>>& g) {
  std::size_t rows = 1;
  for (int d : ref.primary_dims) rows *= static_cast<std::size_t>(d);
  std::vector<double> a(rows, 0.0);
  for (std::size_t ti = 0; ti < ref.terms.size(); ++ti) {
    const auto& t = ref.terms[ti];
    const auto& gt = g[ti];
    const std::size_t na = t.num_secondary();
    for (std::size_t r = 0; r < rows; ++r) {
      double sum = 0.0;
      for (std::size_t c = 0; c < na; ++c) sum += t.values[r * na + c] * gt[c];
      a[r] += sum;
    }
  }
  return a;
}

/// Quadrature-based tensor representation: the reference side gains a
/// quadrature-point axis (w_q times pointwise factor products, auxiliary
/// indices summed) and the geometry side gains per-point Jacobian data.
/// For affine cells the per-point geometry tensors are constant and the
/// result agrees with the affine path whenever the rule is exact.
struct QuadratureKernel {
  fiat::QuadratureRule rule;
  GeometryPlan plan;
  std::vector<int> primary_dims;
  std::size_t rows = 0;
  // per term: row-major [point][rows x |A_term|]
  std::vector<std::vector<double>> point_matrices;
  std::vector<std::size_t> term_cols;
};

inline QuadratureKernel build_quadrature_kernel(const form::CanonicalForm& cf,
                                                const FormBases& bases,
                                                const fiat::QuadratureRule& rule) {
  QuadratureKernel qk;
  qk.rule = rule;
  qk.plan = build_geometry_plan(cf);
  for (const auto& e : cf.arguments) qk.primary_dims.push_back(e.local_dimension());
  qk.rows = 1;
  for (int d : qk.primary_dims) qk.rows *= static_cast<std::size_t>(d);

  const int npts = rule.num_points();
  for (const auto& m : cf.monomials) {
    const MonomialLayout layout = analyze_monomial(m, cf.dim());
    std::size_t na = 1;
    for (const auto& ax : layout.secondary) na *= static_cast<std::size_t>(ax.size);
    qk.term_cols.push_back(na);

    std::map<const fiat::NodalBasis*, fiat::Tabulation> cache;
    std::vector<const fiat::Tabulation*> tabs;
    for (const auto& f : m.factors) {
      const fiat::NodalBasis* b = &bases.of(f);
      auto it = cache.find(b);
      if (it == cache.end()) it = cache.emplace(b, b->tabulate(rule.points, 1)).first;
      tabs.push_back(&it->second);
    }

    std::vector<double> mats(static_cast<std::size_t>(npts) * qk.rows * na, 0.0);
    detail::accumulate_term(m, layout, bases, rule.points, rule.weights, tabs, cf.arity, mats,
                            qk.rows * na);
    qk.point_matrices.push_back(std::move(mats));
  }
  return qk;
}

/// Evaluate A^K through the quadrature representation: contract each
/// per-point reference slice against that point's geometry tensor.
inline std::vector<double> element_tensor_quadrature(
    const QuadratureKernel& qk, const CellGeometry& geom,
    const std::vector<std::vector<double>>& coefficients) {
  std::vector<double> a(qk.rows, 0.0);
  const int npts = qk.rule.num_points();
  for (std::size_t ti = 0; ti < qk.point_matrices.size(); ++ti) {
    const std::size_t na = qk.term_cols[ti];
    // Per-point geometry data; constant across points for affine cells.
    const std::vector<double> g = evaluate_geometry_term(qk.plan.terms[ti], geom, coefficients);
    const auto& mats = qk.point_matrices[ti];
    for (int pt = 0; pt < npts; ++pt) {
      const double* slice = mats.data() + static_cast<std::size_t>(pt) * qk.rows * na;
      for (std::size_t r = 0; r < qk.rows; ++r) {
        double sum = 0.0;
        for (std::size_t c = 0; c < na; ++c) sum += slice[r * na + c] * g[c];
        a[r] += sum;
      }
    }
  }
  return a;
}

/// Convenience wrapper matching the operation signature: builds the
/// kernel, evaluates one cell.
inline std::vector<double> element_tensor_quadrature(
    const form::CanonicalForm& cf, const FormBases& bases, const fiat::QuadratureRule& rule,
    const CellGeometry& geom, const std::vector<std::vector<double>>& coefficients) {
  return element_tensor_quadrature(build_quadrature_kernel(cf, bases, rule), geom, coefficients);
}

} // namespace tfc::rep
