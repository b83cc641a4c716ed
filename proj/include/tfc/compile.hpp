#pragma once

#include <string>
#include <vector>

#include "tfc/form/lower.hpp"
#include "tfc/form/signature.hpp"
#include "tfc/opt/schedule.hpp"
#include "tfc/rep/element_tensor.hpp"
#include "tfc/rep/flops.hpp"

namespace tfc {

/// A fully compiled form: canonical representation, reference tensor,
/// geometry plan, flattened kernel and (optionally) per-term optimized
/// evaluation schedules.
struct CompiledForm {
  form::CanonicalForm cf;
  std::string sig;
  rep::ReferenceTensor ref;
  rep::GeometryPlan plan;
  rep::FlattenedKernel kernel;
  std::vector<opt::EvaluationSchedule> schedules; // one per term when optimized

  bool optimized() const { return !schedules.empty(); }
  int arity() const { return cf.arity; }
};

inline CompiledForm compile_form(const form::CanonicalForm& cf) {
  CompiledForm out;
  out.cf = cf;
  out.sig = form::signature(cf);
  const rep::FormBases bases = rep::build_bases(cf);
  out.ref = rep::compute_reference_tensor(cf, bases);
  out.plan = rep::build_geometry_plan(cf);
  out.kernel = rep::build_flattened(out.ref);
  return out;
}

inline CompiledForm compile_form(const form::FormExpr& expr) {
  return compile_form(form::lower(expr));
}

namespace detail {

inline bool geometry_fold_candidate(const rep::Term& term) {
  return term.secondary_dims.size() == 2 && term.secondary_dims[0] == term.secondary_dims[1] &&
         term.layout.secondary[0].kind != rep::SecondaryAxis::Kind::coefficient &&
         term.layout.secondary[1].kind != rep::SecondaryAxis::Kind::coefficient;
}

inline bool output_fold_candidate(const rep::Term& term) {
  return term.primary_dims.size() == 2 && term.primary_dims[0] == term.primary_dims[1];
}

} // namespace detail

/// Build one optimized schedule per reference-tensor term. Symmetry folds
/// are attempted per term and verified numerically; a term that fails a
/// fold's verification is scheduled without it.
inline void optimize_form(CompiledForm& form, int verify_trials = 100) {
  form.schedules.clear();
  for (std::size_t ti = 0; ti < form.ref.terms.size(); ++ti) {
    const rep::Term& term = form.ref.terms[ti];
    const rep::GeometryTerm* plan_term = &form.plan.terms[ti];
    const bool geo = detail::geometry_fold_candidate(term);
    const bool out = detail::output_fold_candidate(term);
    opt::ContractionVectors cv;
    bool built = false;
    const std::pair<bool, bool> attempts[] = {
        {out, geo}, {false, geo}, {out, false}, {false, false}};
    for (const auto& [o, g] : attempts) {
      try {
        cv = opt::flatten_and_reduce(term, o, g, plan_term);
        built = true;
        break;
      } catch (const verify_error&) {
        continue;
      }
    }
    if (!built) cv = opt::flatten_and_reduce(term, false, false);
    const opt::RelationGraph tree = opt::minimum_spanning_tree(cv);
    opt::EvaluationSchedule sched = opt::emit_schedule(cv, tree);
    opt::verify_schedule(sched, term, verify_trials);
    form.schedules.push_back(std::move(sched));
  }
}

} // namespace tfc
