#pragma once

#include <string>
#include <vector>

#include "tfc/compile.hpp"
#include "tfc/fem/function.hpp"
#include "tfc/fem/sparse.hpp"

namespace tfc::fem {

enum class AssemblyMode { tensor, quadrature, schedule, direct };

inline AssemblyMode assembly_mode_from_name(const std::string& name) {
  if (name == "tensor" || name == "matvec") return AssemblyMode::tensor;
  if (name == "quadrature") return AssemblyMode::quadrature;
  if (name == "schedule") return AssemblyMode::schedule;
  if (name == "direct") return AssemblyMode::direct;
  throw user_error("unknown assembly mode: " + name);
}

inline std::string assembly_mode_name(AssemblyMode mode) {
  switch (mode) {
    case AssemblyMode::tensor: return "matvec";
    case AssemblyMode::quadrature: return "quadrature";
    case AssemblyMode::schedule: return "schedule";
    case AssemblyMode::direct: return "direct";
  }
  return "?";
}

/// Assemble the global tensor of a compiled form over a mesh: iterate
/// cells, evaluate A^K through the selected representation, scatter-add
/// through the local-to-global maps.
inline GlobalTensor assemble(const CompiledForm& form, const SimplicialMesh& mesh,
                             const std::vector<const DofMap*>& dofmaps,
                             const std::vector<const CoefficientFunction*>& coefficients,
                             AssemblyMode mode = AssemblyMode::tensor) {
  const int r = form.arity();
  if (r < 1 || r > 2) throw user_error("assembly supports arity 1 and 2, got " + std::to_string(r));
  if (static_cast<int>(dofmaps.size()) != r) throw user_error("dofmap count does not match arity");
  if (coefficients.size() != form.cf.coefficients.size())
    throw user_error("coefficient count mismatch: form declares " +
                     std::to_string(form.cf.coefficients.size()));
  for (int j = 0; j < r; ++j)
    if (!(dofmaps[static_cast<std::size_t>(j)]->spec().element == form.cf.arguments[static_cast<std::size_t>(j)]))
      throw user_error("dofmap element does not match form argument");
  if (mode == AssemblyMode::schedule && !form.optimized())
    throw user_error("no schedule in artifact");

  rep::QuadratureKernel qk;
  if (mode == AssemblyMode::quadrature) {
    int degree = 0;
    for (const auto& m : form.cf.monomials) {
      int s = 0;
      for (const auto& f : m.factors) s += f.element.degree;
      degree = std::max(degree, s);
    }
    const rep::FormBases bases = rep::build_bases(form.cf);
    qk = rep::build_quadrature_kernel(
        form.cf, bases,
        fiat::make_quadrature(fiat::make_reference_cell(form.cf.arguments.front().shape), degree));
  }

  GlobalTensor out;
  out.rank = r;
  const int n0 = dofmaps[0]->global_dimension();
  MatrixBuilder builder(r == 2 ? n0 : 0);
  if (r == 1) out.vec.assign(static_cast<std::size_t>(n0), 0.0);

  for (int cell = 0; cell < mesh.num_cells(); ++cell) {
    const auto geom = mesh.geometry(cell);
    std::vector<std::vector<double>> local_coefs;
    for (const auto* c : coefficients) local_coefs.push_back(c->restrict_to(cell));

    std::vector<double> a;
    switch (mode) {
      case AssemblyMode::tensor: {
        const auto g = rep::evaluate_geometry(form.plan, geom, local_coefs);
        a = rep::element_tensor_affine(form.kernel, rep::flatten_geometry(g));
        break;
      }
      case AssemblyMode::direct: {
        const auto g = rep::evaluate_geometry(form.plan, geom, local_coefs);
        a = rep::element_tensor_direct(form.ref, g);
        break;
      }
      case AssemblyMode::quadrature: {
        a = rep::element_tensor_quadrature(qk, geom, local_coefs);
        break;
      }
      case AssemblyMode::schedule: {
        const auto g = rep::evaluate_geometry(form.plan, geom, local_coefs);
        a.assign(form.kernel.rows, 0.0);
        for (std::size_t ti = 0; ti < form.schedules.size(); ++ti) {
          const auto part = form.schedules[ti].evaluate(g[ti]);
          for (std::size_t k = 0; k < a.size(); ++k) a[k] += part[k];
        }
        break;
      }
    }

    const auto rows = dofmaps[0]->cell_dofs(cell);
    if (r == 1) {
      for (std::size_t i = 0; i < rows.size(); ++i)
        out.vec[static_cast<std::size_t>(rows[i])] += a[i];
    } else {
      const auto cols = dofmaps[1]->cell_dofs(cell);
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
          builder.add(rows[i], cols[j], a[i * cols.size() + j]);
    }
  }
  if (r == 2) out.matrix = builder.compress();
  return out;
}

/// Rank-1 assembly of a linear form declared with a fixed coefficient in
/// the trial slot (the action w = A U without forming A).
inline std::vector<double> assemble_action(const CompiledForm& form, const SimplicialMesh& mesh,
                                           const DofMap& test_map,
                                           const std::vector<const CoefficientFunction*>& coefficients,
                                           AssemblyMode mode = AssemblyMode::tensor) {
  if (form.arity() != 1) throw user_error("action form must have arity 1");
  if (coefficients.empty()) throw user_error("action form needs its coefficient vector");
  return assemble(form, mesh, {&test_map}, coefficients, mode).vec;
}

} // namespace tfc::fem
