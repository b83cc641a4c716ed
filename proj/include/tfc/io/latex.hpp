#pragma once

#include <string>
#include <vector>

#include "tfc/compile.hpp"

namespace tfc::io {

namespace detail {

inline std::string alpha_name(int k) { return "\\alpha_{" + std::to_string(k + 1) + "}"; }

} // namespace detail

/// Render the tensor-contraction representation of a compiled form as a
/// LaTeX table (one A^0 / G_K row pair per term), in the style of the
/// representation tables for the standard test cases.
inline std::string emit_latex(const CompiledForm& form) {
  std::string out;
  out += "% generated by ";
  out += tool_version;
  out += "\n\\begin{tabular}{|rcl|c|}\n\\hline\n";
  for (std::size_t ti = 0; ti < form.ref.terms.size(); ++ti) {
    const auto& t = form.ref.terms[ti];
    const auto& m = t.monomial;
    const auto& layout = t.layout;

    // Name the monomial's bound indices: secondary axes get alpha_k, the
    // rest beta (auxiliary, summed in A^0) or beta' (internal, summed in
    // G_K).
    std::vector<std::string> bound_name(m.bounds.size());
    for (std::size_t ax = 0; ax < layout.secondary.size(); ++ax)
      if (layout.secondary[ax].bound_id >= 0)
        bound_name[static_cast<std::size_t>(layout.secondary[ax].bound_id)] =
            detail::alpha_name(static_cast<int>(ax));
    {
      std::vector<bool> ref_side(m.bounds.size(), false);
      for (const auto& f : m.factors)
        if (f.component.is_bound()) ref_side[static_cast<std::size_t>(f.component.value)] = true;
      for (std::size_t b = 0; b < m.bounds.size(); ++b)
        if (bound_name[b].empty() && !m.bounds[b].coefficient_expansion)
          bound_name[b] = ref_side[b] ? "\\beta" : "\\beta'";
    }

    auto ref_name = [&](const form::Ref& r) -> std::string {
      if (r.is_fixed()) return std::to_string(r.value + 1);
      return bound_name[static_cast<std::size_t>(r.value)];
    };
    auto coef_axis_of_factor = [&](int j) {
      for (std::size_t ax = 0; ax < layout.secondary.size(); ++ax)
        if (layout.secondary[ax].kind == rep::SecondaryAxis::Kind::coefficient &&
            layout.secondary[ax].factor == j)
          return static_cast<int>(ax);
      return -1;
    };

    std::string a0, gk;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", m.coefficient);
    if (m.coefficient != 1.0) gk += std::string(buf) + " \\, ";
    gk += "\\det F_K' \\, ";
    for (std::size_t j = 0; j < m.factors.size(); ++j) {
      const auto& f = m.factors[j];
      const auto& acc = layout.access[j];
      std::string basis_index = f.is_coefficient
                                    ? detail::alpha_name(coef_axis_of_factor(static_cast<int>(j)))
                                    : "i_{" + std::to_string(f.slot + 1) + "}";
      std::string fn = "\\Phi^{" + std::to_string(j + 1) + "}_{" + basis_index + "}";
      if (!f.component.is_none()) fn += "[" + ref_name(f.component) + "]";
      if (acc.has_derivative) {
        const std::string ref_dir = detail::alpha_name(acc.ref_axis);
        a0 += "\\frac{\\partial " + fn + "}{\\partial X_{" + ref_dir + "}} ";
        const std::string phys = acc.phys_fixed >= 0
                                     ? std::to_string(acc.phys_fixed + 1)
                                     : ref_name(m.factors[j].derivatives.front());
        gk += "\\frac{\\partial X_{" + ref_dir + "}}{\\partial x_{" + phys + "}} ";
      } else {
        a0 += fn + " ";
      }
      if (f.is_coefficient)
        gk = "w^{K}_{" + detail::alpha_name(coef_axis_of_factor(static_cast<int>(j))) + "} " + gk;
    }
    a0 = "\\int_{K_0} " + a0 + "\\,\\mathrm{d}X";
    if (!layout.aux_ranges.empty()) a0 = "\\sum_{\\beta} " + a0;
    if (!layout.internal_ranges.empty()) gk = "\\sum_{\\beta'} " + gk;

    out += "$A^{0," + std::to_string(ti + 1) + "}_{i\\alpha}$ &$=$& $" + a0 + "$ & $|i\\alpha| = " +
           std::to_string(t.primary_dims.size() + t.secondary_dims.size()) + "$ \\\\\n\\hline\n";
    out += "$G_{K," + std::to_string(ti + 1) + "}^{\\alpha}$ &$=$& $" + gk + "$ & $|\\alpha| = " +
           std::to_string(t.secondary_dims.size()) + "$ \\\\\n\\hline\n";
  }
  out += "\\end{tabular}\n";
  return out;
}

} // namespace tfc::io
