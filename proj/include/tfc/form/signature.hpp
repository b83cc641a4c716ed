#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tfc/form/canonical.hpp"

namespace tfc::form {

namespace detail {

inline std::uint64_t fnv1a(const std::string& s, std::uint64_t offset) {
  std::uint64_t h = offset;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

/// Full stable text encoding of a canonical form.
inline std::string encode_form(const CanonicalForm& form) {
  std::string s = "arity " + std::to_string(form.arity) + "\n";
  for (const auto& e : form.arguments) s += "arg " + encode_element(e) + "\n";
  for (const auto& e : form.coefficients) s += "coef " + encode_element(e) + "\n";
  for (const auto& m : form.monomials) s += encode_monomial(m) + "\n";
  return s;
}

} // namespace detail

/// Deterministic digest identifying a canonical form; identical forms (up
/// to monomial ordering, which lowering canonicalizes) share a signature.
inline std::string signature(const CanonicalForm& form) {
  const std::string enc = detail::encode_form(form);
  return detail::hex64(detail::fnv1a(enc, 14695981039346656037ULL)) +
         detail::hex64(detail::fnv1a(enc, 0x9ae16a3b2f90404fULL));
}

/// Render a canonical form back to form-language source. Coefficient
/// expansion indices are dropped (lowering re-creates them), so parsing the
/// output and re-lowering reproduces the identical canonical form.
inline std::string to_form_source(const CanonicalForm& form) {
  std::string s;
  auto element_name = [](int k) { return "e" + std::to_string(k); };
  std::vector<ElementSpec> elements;
  auto element_id = [&](const ElementSpec& e) {
    for (std::size_t k = 0; k < elements.size(); ++k)
      if (elements[k] == e) return static_cast<int>(k);
    elements.push_back(e);
    return static_cast<int>(elements.size()) - 1;
  };
  std::vector<int> arg_elem, coef_elem;
  for (const auto& e : form.arguments) arg_elem.push_back(element_id(e));
  for (const auto& e : form.coefficients) coef_elem.push_back(element_id(e));
  for (std::size_t k = 0; k < elements.size(); ++k) {
    const auto& e = elements[k];
    const std::string fam =
        e.family == fiat::Family::VectorLagrange
            ? "Vector Lagrange"
            : (e.family == fiat::Family::DiscontinuousLagrange ? "Discontinuous Lagrange"
                                                               : "Lagrange");
    s += element_name(static_cast<int>(k)) + " = FiniteElement(\"" + fam + "\", \"" +
         fiat::shape_name(e.shape) + "\", " + std::to_string(e.degree) + ")\n";
  }
  auto arg_name = [](int slot) {
    return slot == 0 ? std::string("v") : (slot == 1 ? std::string("U") : "v" + std::to_string(slot));
  };
  for (int sdx = 0; sdx < form.arity; ++sdx)
    s += arg_name(sdx) + " = BasisFunction(" + element_name(arg_elem[static_cast<std::size_t>(sdx)]) + ")\n";
  for (std::size_t k = 0; k < form.coefficients.size(); ++k)
    s += "w" + std::to_string(k) + " = Function(" + element_name(coef_elem[k]) + ")\n";

  int max_index = -1;
  std::string body;
  for (const auto& m : form.monomials) {
    std::string term = detail::format_double(m.coefficient);
    auto render_ref = [&max_index](const Ref& r) {
      if (r.is_fixed()) return std::to_string(r.value);
      max_index = std::max(max_index, r.value);
      return "i" + std::to_string(r.value);
    };
    for (const auto& f : m.factors) {
      std::string fac = f.is_coefficient ? "w" + std::to_string(f.slot) : arg_name(f.slot);
      if (!f.component.is_none()) fac += "[" + render_ref(f.component) + "]";
      for (const auto& dref : f.derivatives) fac = "D(" + fac + ", " + render_ref(dref) + ")";
      term += "*" + fac;
    }
    body += (body.empty() ? "a = " : " + ") + term + "*dx";
  }
  for (int k = 0; k <= max_index; ++k) s += "i" + std::to_string(k) + " = Index()\n";
  s += body + "\n";
  return s;
}

} // namespace tfc::form
