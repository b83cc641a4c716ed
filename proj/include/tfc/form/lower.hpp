#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "tfc/errors.hpp"
#include "tfc/form/canonical.hpp"
#include "tfc/form/expr.hpp"

namespace tfc::form {

namespace detail {

struct RawFactor {
  ExprKind kind = ExprKind::argument; // argument or coefficient
  int slot = 0;
  ElementSpec element;
  IndexExpr component{};                 // invalid if none
  bool has_component = false;
  std::vector<IndexExpr> derivatives;
};

struct RawTerm {
  double coeff = 1.0;
  std::vector<RawFactor> factors;
};

/// Expand an integrand into a flat sum of products of (derivatives of
/// components of) terminals. Division by functions, derivatives of
/// products and similar non-polynomial constructs are rejected.
inline std::vector<RawTerm> expand(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::constant: {
      if (e->constant == 0.0) return {};
      RawTerm t;
      t.coeff = e->constant;
      return {t};
    }
    case ExprKind::argument:
    case ExprKind::coefficient: {
      RawTerm t;
      RawFactor f;
      f.kind = e->kind;
      f.slot = e->slot;
      f.element = e->element;
      t.factors.push_back(f);
      return {t};
    }
    case ExprKind::component: {
      const auto& base = e->children.front();
      if (base->kind != ExprKind::argument && base->kind != ExprKind::coefficient)
        throw user_error("not lowerable: component of a compound expression");
      RawTerm t;
      RawFactor f;
      f.kind = base->kind;
      f.slot = base->slot;
      f.element = base->element;
      f.component = e->index;
      f.has_component = true;
      t.factors.push_back(f);
      return {t};
    }
    case ExprKind::derivative: {
      auto inner = expand(e->children.front());
      for (auto& t : inner) {
        if (t.factors.size() != 1)
          throw user_error("not lowerable: derivative of a product");
        t.factors.front().derivatives.push_back(e->index);
      }
      return inner;
    }
    case ExprKind::sum: {
      std::vector<RawTerm> out;
      for (const auto& c : e->children) {
        auto sub = expand(c);
        out.insert(out.end(), sub.begin(), sub.end());
      }
      return out;
    }
    case ExprKind::product: {
      std::vector<RawTerm> acc = {RawTerm{}};
      for (const auto& c : e->children) {
        auto sub = expand(c);
        std::vector<RawTerm> next;
        for (const auto& a : acc)
          for (const auto& b : sub) {
            RawTerm t;
            t.coeff = a.coeff * b.coeff;
            t.factors = a.factors;
            t.factors.insert(t.factors.end(), b.factors.begin(), b.factors.end());
            next.push_back(t);
          }
        acc = std::move(next);
      }
      return acc;
    }
  }
  throw user_error("not lowerable");
}

inline Monomial bind_term(const RawTerm& term, int arity, int dim) {
  // Canonical factor order: argument slots ascending, then coefficient
  // factors in order of appearance.
  std::vector<RawFactor> ordered;
  std::vector<int> slot_count(static_cast<std::size_t>(arity), 0);
  for (int s = 0; s < arity; ++s)
    for (const auto& f : term.factors)
      if (f.kind == ExprKind::argument && f.slot == s) {
        ordered.push_back(f);
        ++slot_count[static_cast<std::size_t>(s)];
      }
  for (const auto& f : term.factors)
    if (f.kind == ExprKind::coefficient) ordered.push_back(f);
  for (int s = 0; s < arity; ++s)
    if (slot_count[static_cast<std::size_t>(s)] != 1)
      throw user_error("argument " + std::to_string(s) +
                       " must appear exactly once in each monomial");

  // Symbol occurrences must come in Einstein pairs.
  std::map<int, int> occurrences;
  auto count = [&occurrences](const IndexExpr& ix) {
    if (ix.is_symbol()) ++occurrences[ix.symbol];
  };
  for (const auto& f : ordered) {
    if (f.has_component) count(f.component);
    for (const auto& d : f.derivatives) count(d);
  }
  for (const auto& [sym, n] : occurrences) {
    if (n == 1) throw user_error("index appears once");
    if (n > 2) throw user_error("index appears more than twice");
  }

  Monomial m;
  m.coefficient = term.coeff;
  std::map<int, int> symbol_to_bound; // first-use order over canonical factors
  auto bind = [&](const IndexExpr& ix) -> Ref {
    if (ix.is_fixed()) return Ref::fixed(ix.fixed);
    auto it = symbol_to_bound.find(ix.symbol);
    if (it == symbol_to_bound.end()) {
      const int id = static_cast<int>(m.bounds.size());
      m.bounds.push_back({dim, false});
      it = symbol_to_bound.emplace(ix.symbol, id).first;
    }
    return Ref::bound(it->second);
  };
  for (const auto& rf : ordered) {
    Factor f;
    f.is_coefficient = rf.kind == ExprKind::coefficient;
    f.slot = rf.slot;
    f.element = rf.element;
    if (rf.element.components() > 1 && !rf.has_component)
      throw user_error("incompatible value shapes: vector-valued function used without component");
    if (rf.element.components() == 1 && rf.has_component)
      throw user_error("incompatible value shapes: component of a scalar function");
    if (rf.has_component) f.component = bind(rf.component);
    for (const auto& d : rf.derivatives) f.derivatives.push_back(bind(d));
    if (static_cast<int>(f.derivatives.size()) > 1)
      throw user_error("unsupported derivative order");
    if (f.is_coefficient) {
      // Expand the coefficient in its nodal basis: one bound index over the
      // local dimension; the per-cell weight enters the geometry tensor.
      const int id = static_cast<int>(m.bounds.size());
      m.bounds.push_back({rf.element.local_dimension(), true});
      f.basis_bound = id;
    }
    m.factors.push_back(std::move(f));
  }
  return m;
}

} // namespace detail

/// Lower a form expression to its canonical monomial representation.
/// Monomials are sorted by their stable text encoding, making the
/// representation (and hence the signature) canonical.
inline CanonicalForm lower(const FormExpr& form) {
  CanonicalForm out;

  // Discover arity, argument elements, coefficient elements.
  std::map<int, ElementSpec> args, coefs;
  int dim = 0;
  std::function<void(const ExprPtr&)> scan = [&](const ExprPtr& e) {
    if (e->kind == ExprKind::argument || e->kind == ExprKind::coefficient) {
      auto& table = e->kind == ExprKind::argument ? args : coefs;
      auto it = table.find(e->slot);
      if (it != table.end() && !(it->second == e->element))
        throw user_error("conflicting elements for function slot");
      table.emplace(e->slot, e->element);
      if (dim == 0)
        dim = e->element.dim();
      else if (dim != e->element.dim())
        throw user_error("mixed cell shapes in one form");
    }
    for (const auto& c : e->children) scan(c);
  };
  scan(form.integrand);

  out.arity = args.empty() ? 0 : args.rbegin()->first + 1;
  for (int s = 0; s < out.arity; ++s) {
    auto it = args.find(s);
    if (it == args.end()) throw user_error("argument slot " + std::to_string(s) + " unused");
    out.arguments.push_back(it->second);
  }
  const int ncoef = coefs.empty() ? 0 : coefs.rbegin()->first + 1;
  for (int s = 0; s < ncoef; ++s) {
    auto it = coefs.find(s);
    if (it == coefs.end()) throw user_error("coefficient slot " + std::to_string(s) + " unused");
    out.coefficients.push_back(it->second);
  }

  for (const auto& term : detail::expand(form.integrand)) {
    if (term.factors.empty() && term.coeff != 0.0)
      throw user_error("not lowerable: constant integrand outside any function factor");
    Monomial m = detail::bind_term(term, out.arity, dim);
    if (m.coefficient != 0.0) out.monomials.push_back(std::move(m));
  }

  std::sort(out.monomials.begin(), out.monomials.end(), [](const Monomial& a, const Monomial& b) {
    return detail::encode_monomial(a) < detail::encode_monomial(b);
  });
  return out;
}

} // namespace tfc::form
