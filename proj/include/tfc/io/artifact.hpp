#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tfc/compile.hpp"
#include "tfc/rep/flops.hpp"

namespace tfc::io {

inline constexpr const char* tool_version = "tfc 0.1.0";
inline constexpr int artifact_version = 1;

namespace detail {

using nlohmann::json;

inline json ref_to_json(const form::Ref& r) {
  if (r.is_fixed()) return json{{"fixed", r.value}};
  if (r.is_bound()) return json{{"bound", r.value}};
  return json(nullptr);
}

inline form::Ref ref_from_json(const json& j) {
  if (j.is_null()) return form::Ref::none();
  if (j.contains("fixed")) return form::Ref::fixed(j["fixed"].get<int>());
  return form::Ref::bound(j["bound"].get<int>());
}

inline json element_to_json(const form::ElementSpec& e) {
  return json{{"family", fiat::family_name(e.family)},
              {"cell", fiat::shape_name(e.shape)},
              {"degree", e.degree}};
}

inline form::ElementSpec element_from_json(const json& j) {
  form::ElementSpec e;
  const std::string fam = j["family"].get<std::string>();
  if (fam == "Lagrange")
    e.family = fiat::Family::Lagrange;
  else if (fam == "Discontinuous Lagrange")
    e.family = fiat::Family::DiscontinuousLagrange;
  else if (fam == "Vector Lagrange")
    e.family = fiat::Family::VectorLagrange;
  else
    throw user_error("artifact: unknown family " + fam);
  e.shape = fiat::shape_from_name(j["cell"].get<std::string>());
  e.degree = j["degree"].get<int>();
  return e;
}

inline json form_to_json(const form::CanonicalForm& cf) {
  json monomials = json::array();
  for (const auto& m : cf.monomials) {
    json factors = json::array();
    for (const auto& f : m.factors) {
      json derivs = json::array();
      for (const auto& dref : f.derivatives) derivs.push_back(ref_to_json(dref));
      factors.push_back(json{{"coefficient", f.is_coefficient},
                             {"slot", f.slot},
                             {"element", element_to_json(f.element)},
                             {"component", ref_to_json(f.component)},
                             {"derivatives", derivs},
                             {"basis_bound", f.basis_bound}});
    }
    json bounds = json::array();
    for (const auto& b : m.bounds) bounds.push_back(json{b.range, b.coefficient_expansion});
    monomials.push_back(
        json{{"coefficient", m.coefficient}, {"factors", factors}, {"bounds", bounds}});
  }
  json args = json::array(), coefs = json::array();
  for (const auto& e : cf.arguments) args.push_back(element_to_json(e));
  for (const auto& e : cf.coefficients) coefs.push_back(element_to_json(e));
  return json{{"arity", cf.arity},
              {"arguments", args},
              {"coefficients", coefs},
              {"monomials", monomials}};
}

inline form::CanonicalForm form_from_json(const json& j) {
  form::CanonicalForm cf;
  cf.arity = j["arity"].get<int>();
  for (const auto& e : j["arguments"]) cf.arguments.push_back(element_from_json(e));
  for (const auto& e : j["coefficients"]) cf.coefficients.push_back(element_from_json(e));
  for (const auto& mj : j["monomials"]) {
    form::Monomial m;
    m.coefficient = mj["coefficient"].get<double>();
    for (const auto& fj : mj["factors"]) {
      form::Factor f;
      f.is_coefficient = fj["coefficient"].get<bool>();
      f.slot = fj["slot"].get<int>();
      f.element = element_from_json(fj["element"]);
      f.component = ref_from_json(fj["component"]);
      for (const auto& dj : fj["derivatives"]) f.derivatives.push_back(ref_from_json(dj));
      f.basis_bound = fj["basis_bound"].get<int>();
      m.factors.push_back(std::move(f));
    }
    for (const auto& bj : mj["bounds"]) m.bounds.push_back({bj[0].get<int>(), bj[1].get<bool>()});
    cf.monomials.push_back(std::move(m));
  }
  return cf;
}

inline json schedule_to_json(const opt::EvaluationSchedule& s) {
  const auto& cv = s.vectors;
  json ops = json::array();
  for (const auto& op : s.ops) {
    json oj{{"target", op.target}, {"source", op.source}};
    switch (op.payload.kind) {
      case opt::RelationPayload::Kind::equal:
        oj["kind"] = "equal";
        oj["sign"] = op.payload.sign;
        break;
      case opt::RelationPayload::Kind::collinear:
        oj["kind"] = "collinear";
        oj["alpha"] = op.payload.alpha;
        break;
      case opt::RelationPayload::Kind::hamming:
        oj["kind"] = "hamming";
        oj["sign"] = op.payload.sign;
        oj["positions"] = op.payload.positions;
        oj["deltas"] = op.payload.deltas;
        break;
    }
    ops.push_back(std::move(oj));
  }
  json mirror = json::array();
  for (const auto& [pos, flat] : cv.mirror) mirror.push_back(json{pos, flat});
  return json{{"root", s.root},
              {"ops", ops},
              {"map_raw", s.map_raw},
              {"map_discounted", s.map_discounted},
              {"primary_dims", cv.primary_dims},
              {"veclen", cv.veclen},
              {"vectors", cv.vecs},
              {"retained", cv.retained},
              {"mirror", mirror},
              {"geometry_folded", cv.geometry_folded},
              {"fold_pick", cv.fold_pick}};
}

inline opt::EvaluationSchedule schedule_from_json(const json& j) {
  opt::EvaluationSchedule s;
  s.root = j["root"].get<int>();
  s.map_raw = j["map_raw"].get<std::int64_t>();
  s.map_discounted = j["map_discounted"].get<std::int64_t>();
  auto& cv = s.vectors;
  cv.primary_dims = j["primary_dims"].get<std::vector<int>>();
  cv.veclen = j["veclen"].get<int>();
  cv.vecs = j["vectors"].get<std::vector<std::vector<double>>>();
  cv.retained = j["retained"].get<std::vector<std::size_t>>();
  for (const auto& mj : j["mirror"])
    cv.mirror.emplace_back(mj[0].get<std::size_t>(), mj[1].get<std::size_t>());
  cv.geometry_folded = j["geometry_folded"].get<bool>();
  cv.fold_pick = j["fold_pick"].get<std::vector<std::size_t>>();
  for (const auto& oj : j["ops"]) {
    opt::ScheduleOp op;
    op.target = oj["target"].get<int>();
    op.source = oj["source"].get<int>();
    const std::string kind = oj["kind"].get<std::string>();
    if (kind == "equal") {
      op.payload.kind = opt::RelationPayload::Kind::equal;
      op.payload.sign = oj["sign"].get<double>();
    } else if (kind == "collinear") {
      op.payload.kind = opt::RelationPayload::Kind::collinear;
      op.payload.alpha = oj["alpha"].get<double>();
    } else {
      op.payload.kind = opt::RelationPayload::Kind::hamming;
      op.payload.sign = oj["sign"].get<double>();
      op.payload.positions = oj["positions"].get<std::vector<int>>();
      op.payload.deltas = oj["deltas"].get<std::vector<double>>();
    }
    s.ops.push_back(std::move(op));
  }
  return s;
}

/// Human-readable origin of each secondary axis.
inline json legend_to_json(const rep::Term& t) {
  json legend = json::array();
  for (const auto& ax : t.layout.secondary) {
    switch (ax.kind) {
      case rep::SecondaryAxis::Kind::derivative:
        legend.push_back("reference direction of factor " + std::to_string(ax.factor));
        break;
      case rep::SecondaryAxis::Kind::spatial:
        legend.push_back("spatial bound index " + std::to_string(ax.bound_id));
        break;
      case rep::SecondaryAxis::Kind::coefficient:
        legend.push_back("coefficient local index (factor " + std::to_string(ax.factor) + ")");
        break;
    }
  }
  return legend;
}

} // namespace detail

inline nlohmann::json artifact_to_json(const CompiledForm& form) {
  using nlohmann::json;
  json terms = json::array();
  for (const auto& t : form.ref.terms) {
    json tj{{"primary_dims", t.primary_dims},
            {"secondary_dims", t.secondary_dims},
            {"values", t.values},
            {"legend", detail::legend_to_json(t)}};
    if (t.rational()) {
      json rj = json::array();
      for (const auto& r : t.rationals) rj.push_back(json{r.num, r.den});
      tj["rationals"] = rj;
    }
    terms.push_back(std::move(tj));
  }
  json schedules = json::array();
  for (const auto& s : form.schedules) schedules.push_back(detail::schedule_to_json(s));
  const rep::FlopCount fc = rep::flop_count(form.ref, form.cf);
  json flops{{"direct", fc.direct},
             {"matvec", fc.matvec},
             {"geometry", fc.geometry},
             {"quadrature_model", fc.quadrature_model},
             {"quadrature_full", fc.quadrature_full},
             {"quadrature_points", fc.quadrature_points}};
  if (form.optimized()) {
    std::int64_t raw = 0, disc = 0;
    for (const auto& s : form.schedules) {
      raw += s.map_raw;
      disc += s.map_discounted;
    }
    flops["schedule_raw"] = raw;
    flops["schedule_discounted"] = disc;
  }
  return json{{"format", "tfc-artifact"}, {"version", artifact_version},
              {"tool", tool_version},     {"signature", form.sig},
              {"form", detail::form_to_json(form.cf)},  {"terms", terms},
              {"schedules", schedules},   {"flops", flops}};
}

/// Rebuild a compiled form from its serialized bundle. The signature is
/// recomputed from the stored canonical form and must match; the geometry
/// plan and flattened kernel are rebuilt deterministically.
inline CompiledForm artifact_from_json(const nlohmann::json& j) {
  if (!j.contains("format") || j["format"] != "tfc-artifact")
    throw user_error("not a tfc artifact");
  CompiledForm form;
  form.cf = detail::form_from_json(j["form"]);
  form.sig = form::signature(form.cf);
  if (form.sig != j["signature"].get<std::string>())
    throw verify_error("artifact signature mismatch: stored " +
                       j["signature"].get<std::string>() + ", recomputed " + form.sig);
  const int dim = form.cf.dim();
  for (std::size_t ti = 0; ti < j["terms"].size(); ++ti) {
    const auto& tj = j["terms"][ti];
    rep::Term t;
    t.monomial = form.cf.monomials.at(ti);
    t.layout = rep::analyze_monomial(t.monomial, dim);
    t.primary_dims = tj["primary_dims"].get<std::vector<int>>();
    t.secondary_dims = tj["secondary_dims"].get<std::vector<int>>();
    t.values = tj["values"].get<std::vector<double>>();
    if (tj.contains("rationals"))
      for (const auto& rj : tj["rationals"])
        t.rationals.push_back(Rational(rj[0].get<std::int64_t>(), rj[1].get<std::int64_t>()));
    form.ref.terms.push_back(std::move(t));
  }
  form.ref.rank = form.cf.arity;
  for (const auto& e : form.cf.arguments) form.ref.primary_dims.push_back(e.local_dimension());
  form.plan = rep::build_geometry_plan(form.cf);
  form.kernel = rep::build_flattened(form.ref);
  for (const auto& sj : j["schedules"]) form.schedules.push_back(detail::schedule_from_json(sj));
  return form;
}

inline std::string artifact_to_string(const CompiledForm& form) {
  return artifact_to_json(form).dump(1);
}

inline CompiledForm artifact_from_string(const std::string& text) {
  return artifact_from_json(nlohmann::json::parse(text));
}

inline void save_artifact(const CompiledForm& form, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw user_error("cannot write artifact: " + path);
  out << artifact_to_string(form);
}

inline CompiledForm load_artifact(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw user_error("cannot read artifact: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return artifact_from_string(ss.str());
}

} // namespace tfc::io
