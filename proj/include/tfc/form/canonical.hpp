#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "tfc/form/element.hpp"

namespace tfc::form {

/// Index reference inside a monomial: absent, a fixed direction, or one of
/// the monomial's bound indices.
struct Ref {
  enum class Kind { none, fixed, bound };
  Kind kind = Kind::none;
  int value = -1;

  static Ref none() { return {}; }
  static Ref fixed(int v) { return {Kind::fixed, v}; }
  static Ref bound(int b) { return {Kind::bound, b}; }
  bool is_none() const { return kind == Kind::none; }
  bool is_fixed() const { return kind == Kind::fixed; }
  bool is_bound() const { return kind == Kind::bound; }
  friend bool operator==(const Ref& a, const Ref& b) {
    return a.kind == b.kind && a.value == b.value;
  }
};

/// One function factor of a monomial: which function slot it refers to, a
/// component map, a derivative multi-index map and a basis-index binding
/// (the primary index of an argument slot, or a bound expansion index for
/// coefficient factors).
struct Factor {
  bool is_coefficient = false;
  int slot = 0; // argument slot or coefficient slot (both 0-based)
  ElementSpec element;
  Ref component;                // none for scalar-valued functions
  std::vector<Ref> derivatives; // physical derivative directions
  int basis_bound = -1;         // bound index id for coefficients, -1 = primary
};

struct BoundIndex {
  int range = 0;
  bool coefficient_expansion = false;
};

struct Monomial {
  double coefficient = 1.0;
  std::vector<Factor> factors;
  std::vector<BoundIndex> bounds;

  int num_factors() const { return static_cast<int>(factors.size()); }
};

/// The canonical representation of an integrated multilinear form: an
/// arity-r sum of monomials over per-factor component/derivative/index
/// maps, with coefficient functions already expanded in their nodal bases.
struct CanonicalForm {
  int arity = 0;
  std::vector<ElementSpec> arguments;    // per argument slot
  std::vector<ElementSpec> coefficients; // per coefficient slot
  std::vector<Monomial> monomials;

  int dim() const { return arguments.empty() ? 0 : arguments.front().dim(); }
};

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string encode_ref(const Ref& r) {
  switch (r.kind) {
    case Ref::Kind::none: return "-";
    case Ref::Kind::fixed: return "f" + std::to_string(r.value);
    case Ref::Kind::bound: return "b" + std::to_string(r.value);
  }
  return "?";
}

inline std::string encode_element(const ElementSpec& e) {
  return e.str();
}

/// Stable text encoding of one monomial (bound indices are already in
/// canonical first-use order after lowering).
inline std::string encode_monomial(const Monomial& m) {
  std::string s = format_double(m.coefficient);
  for (const auto& f : m.factors) {
    s += "|";
    s += f.is_coefficient ? "w" : "a";
    s += std::to_string(f.slot);
    s += ":" + encode_ref(f.component);
    s += ":d[";
    for (const auto& dref : f.derivatives) s += encode_ref(dref) + ",";
    s += "]";
    if (f.basis_bound >= 0) s += ":x" + std::to_string(f.basis_bound);
  }
  s += "|C:";
  for (const auto& b : m.bounds)
    s += std::to_string(b.range) + (b.coefficient_expansion ? "c" : "s") + ",";
  return s;
}

} // namespace detail

} // namespace tfc::form
