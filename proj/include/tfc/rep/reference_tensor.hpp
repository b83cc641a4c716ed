#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <vector>

#include "tfc/errors.hpp"
#include "tfc/fiat/nodal_basis.hpp"
#include "tfc/fiat/quadrature.hpp"
#include "tfc/form/canonical.hpp"
#include "tfc/rational.hpp"
#include "tfc/rep/geometry.hpp"

namespace tfc::rep {

/// Nodal bases backing the function slots of a form.
struct FormBases {
  std::vector<fiat::NodalBasis> arguments;
  std::vector<fiat::NodalBasis> coefficients;

  const fiat::NodalBasis& of(const form::Factor& f) const {
    return f.is_coefficient ? coefficients.at(static_cast<std::size_t>(f.slot))
                            : arguments.at(static_cast<std::size_t>(f.slot));
  }
};

inline FormBases build_bases(const form::CanonicalForm& cf) {
  FormBases b;
  for (const auto& e : cf.arguments) b.arguments.push_back(form::build_basis(e));
  for (const auto& e : cf.coefficients) b.coefficients.push_back(form::build_basis(e));
  return b;
}

/// One term of the reference tensor: a dense rank-(r+|alpha|) array with
/// primary dims first, then the secondary dims of the monomial's layout.
/// Auxiliary indices are summed away during construction. When every entry
/// matches a small rational within 1e-12 the exact values are kept
/// alongside for table comparison and for the optimizer.
struct Term {
  form::Monomial monomial;
  MonomialLayout layout;
  std::vector<int> primary_dims;
  std::vector<int> secondary_dims;
  std::vector<double> values; // row-major [primary..., secondary...]
  std::vector<Rational> rationals;

  bool rational() const { return !rationals.empty(); }
  std::size_t num_primary() const {
    std::size_t n = 1;
    for (int dp : primary_dims) n *= static_cast<std::size_t>(dp);
    return n;
  }
  std::size_t num_secondary() const {
    std::size_t n = 1;
    for (int ds : secondary_dims) n *= static_cast<std::size_t>(ds);
    return n;
  }
};

struct ReferenceTensor {
  int rank = 0;
  std::vector<int> primary_dims;
  std::vector<Term> terms;
};

namespace detail {

/// Accumulate one monomial's contribution at the given quadrature points
/// into a dense [primary..., secondary...] array. Derivative and spatial
/// secondary axes are enumerated pointwise; primary and coefficient axes
/// are filled by outer products of per-factor value vectors; auxiliary
/// indices are summed. A nonzero `point_stride` directs each point's
/// contribution into its own slice of `out` (the quadrature-point axis of
/// the quadrature representation).
inline void accumulate_term(const form::Monomial& m, const MonomialLayout& layout,
                            const FormBases& bases, const std::vector<fiat::Point>& points,
                            const std::vector<double>& weights,
                            const std::vector<const fiat::Tabulation*>& tabs, int rank,
                            std::vector<double>& out, std::size_t point_stride = 0) {
  const std::size_t nfac = m.factors.size();

  // Axis bookkeeping: strides in the output array.
  std::vector<int> dims;
  for (int j = 0; j < rank; ++j) {
    // primary dim of argument slot j
    for (const auto& f : m.factors)
      if (!f.is_coefficient && f.slot == j) dims.push_back(bases.of(f).dimension());
  }
  for (const auto& ax : layout.secondary) dims.push_back(ax.size);
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;)
    strides[k - 1] = strides[k] * static_cast<std::size_t>(dims[k]);

  // Vector axes (outer product): argument factors map to their primary
  // axis; coefficient factors to their coefficient secondary axis.
  struct VecAxis {
    std::size_t stride;
    int length;
    const fiat::Tabulation* tab;
    std::size_t factor;
  };
  std::vector<VecAxis> vec_axes;
  for (std::size_t j = 0; j < nfac; ++j) {
    const auto& f = m.factors[j];
    if (!f.is_coefficient) {
      vec_axes.push_back({strides[static_cast<std::size_t>(f.slot)],
                          bases.of(f).dimension(), tabs[j], j});
    } else {
      for (std::size_t ax = 0; ax < layout.secondary.size(); ++ax)
        if (layout.secondary[ax].kind == SecondaryAxis::Kind::coefficient &&
            layout.secondary[ax].factor == static_cast<int>(j))
          vec_axes.push_back({strides[static_cast<std::size_t>(rank) + ax],
                              layout.secondary[ax].size, tabs[j], j});
    }
  }

  // Enumerate the pointwise axes: derivative + spatial secondary axes.
  std::vector<std::size_t> pointwise;
  for (std::size_t ax = 0; ax < layout.secondary.size(); ++ax)
    if (layout.secondary[ax].kind != SecondaryAxis::Kind::coefficient) pointwise.push_back(ax);

  std::vector<int> alpha(layout.secondary.size(), 0);
  std::vector<int> aux(layout.aux_ranges.size(), 0);
  std::vector<std::vector<double>> fvec(nfac);

  const int npts = static_cast<int>(points.size());
  for (int pt = 0; pt < npts; ++pt) {
    // loop over pointwise secondary assignments
    std::vector<std::size_t> pw(pointwise.size(), 0);
    while (true) {
      std::size_t base_offset = static_cast<std::size_t>(pt) * point_stride;
      for (std::size_t k = 0; k < pointwise.size(); ++k) {
        alpha[pointwise[k]] = static_cast<int>(pw[k]);
        base_offset += pw[k] * strides[static_cast<std::size_t>(rank) + pointwise[k]];
      }
      // loop over auxiliary assignments
      std::fill(aux.begin(), aux.end(), 0);
      while (true) {
        // per-factor vectors
        for (std::size_t j = 0; j < nfac; ++j) {
          const auto& acc = layout.access[j];
          const fiat::Tabulation& tab = *tabs[j];
          int comp = 0;
          if (acc.comp_fixed >= 0) comp = acc.comp_fixed;
          if (acc.comp_aux >= 0) comp = aux[static_cast<std::size_t>(acc.comp_aux)];
          if (acc.comp_axis >= 0) comp = alpha[static_cast<std::size_t>(acc.comp_axis)];
          auto& v = fvec[j];
          v.resize(static_cast<std::size_t>(tab.nfuncs));
          if (acc.has_derivative) {
            const int dir = alpha[static_cast<std::size_t>(acc.ref_axis)];
            for (int i = 0; i < tab.nfuncs; ++i)
              v[static_cast<std::size_t>(i)] = tab.grad_c(i, pt, comp, dir);
          } else {
            for (int i = 0; i < tab.nfuncs; ++i)
              v[static_cast<std::size_t>(i)] = tab.value(i, pt, comp);
          }
        }
        // outer-product accumulation over vec_axes
        const double w = weights[static_cast<std::size_t>(pt)];
        std::function<void(std::size_t, std::size_t, double)> rec =
            [&](std::size_t axis, std::size_t offset, double prod) {
              if (axis == vec_axes.size()) {
                out[offset] += w * prod;
                return;
              }
              const auto& va = vec_axes[axis];
              const auto& v = fvec[va.factor];
              for (int i = 0; i < va.length; ++i)
                rec(axis + 1, offset + static_cast<std::size_t>(i) * va.stride,
                    prod * v[static_cast<std::size_t>(i)]);
            };
        rec(0, base_offset, 1.0);
        std::size_t k = 0;
        for (; k < aux.size(); ++k) {
          if (++aux[k] < layout.aux_ranges[k]) break;
          aux[k] = 0;
        }
        if (k == aux.size()) break;
      }
      std::size_t k = 0;
      for (; k < pointwise.size(); ++k) {
        if (++pw[k] < static_cast<std::size_t>(
                          layout.secondary[pointwise[k]].size))
          break;
        pw[k] = 0;
      }
      if (k == pointwise.size()) break;
    }
  }
}

inline void try_snap(Term& term) {
  std::vector<Rational> rats;
  rats.reserve(term.values.size());
  for (double v : term.values) {
    auto r = snap_to_rational(v);
    if (!r) return;
    rats.push_back(*r);
  }
  term.rationals = std::move(rats);
}

} // namespace detail

/// Precompute the reference tensor of a canonical form: one term per
/// monomial, entries computed by quadrature whose exactness covers the
/// integrand's total polynomial degree (exact for affine elements).
inline ReferenceTensor compute_reference_tensor(const form::CanonicalForm& cf,
                                                const FormBases& bases) {
  ReferenceTensor ref;
  ref.rank = cf.arity;
  for (const auto& e : cf.arguments) ref.primary_dims.push_back(e.local_dimension());
  if (cf.monomials.empty()) return ref;

  const fiat::ReferenceCell cell = fiat::make_reference_cell(cf.arguments.empty()
                                                                 ? cf.coefficients.front().shape
                                                                 : cf.arguments.front().shape);
  const int dim = cell.dim;

  for (const auto& m : cf.monomials) {
    Term term;
    term.monomial = m;
    term.layout = analyze_monomial(m, dim);
    term.primary_dims = ref.primary_dims;
    for (const auto& ax : term.layout.secondary) term.secondary_dims.push_back(ax.size);

    int degree = 0;
    for (const auto& f : m.factors) degree += f.element.degree;
    const fiat::QuadratureRule rule = fiat::make_quadrature(cell, degree);

    // Tabulate each factor's basis at the rule points (cached per basis).
    std::map<const fiat::NodalBasis*, fiat::Tabulation> cache;
    std::vector<const fiat::Tabulation*> tabs;
    for (const auto& f : m.factors) {
      const fiat::NodalBasis* b = &bases.of(f);
      auto it = cache.find(b);
      if (it == cache.end()) it = cache.emplace(b, b->tabulate(rule.points, 1)).first;
      tabs.push_back(&it->second);
    }

    term.values.assign(term.num_primary() * term.num_secondary(), 0.0);
    detail::accumulate_term(m, term.layout, bases, rule.points, rule.weights, tabs, ref.rank,
                            term.values);
    detail::try_snap(term);
    ref.terms.push_back(std::move(term));
  }
  return ref;
}

/// Symbolic per-cell geometry recipe matching the reference tensor's
/// secondary enumeration. The monomial's scalar constant becomes the
/// term prefactor.
inline GeometryPlan build_geometry_plan(const form::CanonicalForm& cf) {
  GeometryPlan plan;
  plan.dim = cf.dim();
  for (const auto& m : cf.monomials) {
    GeometryTerm t;
    t.prefactor = m.coefficient;
    t.layout = analyze_monomial(m, plan.dim);
    for (const auto& f : m.factors)
      if (f.is_coefficient) t.coefficient_slots.push_back(f.slot);
    plan.terms.push_back(std::move(t));
  }
  return plan;
}

/// Numeric geometry tensors for one cell, flattened per term in the
/// documented secondary order.
inline std::vector<std::vector<double>> evaluate_geometry(
    const GeometryPlan& plan, const CellGeometry& geom,
    const std::vector<std::vector<double>>& coefficients) {
  std::vector<std::vector<double>> out;
  out.reserve(plan.terms.size());
  for (const auto& t : plan.terms)
    out.push_back(evaluate_geometry_term(t, geom, coefficients));
  return out;
}

} // namespace tfc::rep
