#include "holo/report.hpp"

#include "holo/error.hpp"

namespace holo {

json to_json(cplx c) { return json::array({c.real(), c.imag()}); }

json to_json(const CPoly& p) {
  json a = json::array();
  for (cplx c : p.coeffs()) a.push_back(to_json(c));
  return a;
}

json to_json(const Field& f) {
  json j{{"kind", kind_name(f.kind())}};
  switch (f.kind()) {
    case FieldKind::Moebius: {
      const auto& m = f.moebius_params();
      j["A"] = to_json(m.A);
      j["B"] = to_json(m.B);
      j["C"] = to_json(m.C);
      j["D"] = to_json(m.D);
      break;
    }
    case FieldKind::EssentialDemo:
      j["n"] = f.essential_params().n;
      j["m"] = f.essential_params().m;
      break;
    default: j["coeffs"] = to_json(f.poly());
  }
  return j;
}

namespace {

json normal_form_json(const Field& f, const Equilibrium& e) {
  NormalForm nf;
  try {
    nf = normal_form(f, e.z);
  } catch (const Error&) {
    return nullptr;
  }
  json j{{"case", normal_case_name(nf.kind)}, {"n", nf.n}};
  switch (nf.kind) {
    case NormalCase::Linear: j["coef"] = to_json(nf.linear_coef); break;
    case NormalCase::MultipleResidueNonzero: j["gamma"] = to_json(nf.gamma); break;
    case NormalCase::PoleCase: j["pole_order"] = nf.pole_order; break;
    default: break;
  }
  return j;
}

json model_json(const Field& f) {
  try {
    InfinityModel m = infinity_local_model(f);
    static const char* names[] = {"A", "B", "C", "D"};
    return {{"case", names[static_cast<int>(m.kind)]}, {"n", m.n}, {"m", m.m}, {"exponent", m.exponent},
            {"coef", to_json(m.coef)}, {"flagged", m.flagged}, {"note", m.note}};
  } catch (const Error&) {
    return nullptr;
  }
}

}  // namespace

json to_json(const Equilibrium& e) {
  return {{"z", to_json(e.z)},
          {"order", e.order},
          {"pole", e.is_pole},
          {"kind", eq_kind_name(e.kind)},
          {"code", eq_code(e.kind, e.order)},
          {"eigenvalue", to_json(e.eig)},
          {"residue", to_json(e.res)},
          {"residue_zero", e.res_zero},
          {"sectors", e.sectors},
          {"stability", e.stability()},
          {"band", e.band}};
}

json to_json(const InfinityPoint& p) {
  return {{"chart", chart_name(p.chart)},
          {"s", p.s},
          {"angle", p.angle},
          {"kind", inf_kind_name(p.kind)},
          {"antipode_linked", p.antipode_linked},
          {"jacobian", {{p.jac[0][0], p.jac[0][1]}, {p.jac[1][0], p.jac[1][1]}}}};
}

json to_json(const FirstIntegral& fi) {
  json logs = json::array(), powers = json::array();
  for (auto& t : fi.log_terms) logs.push_back({{"coef", to_json(t.coef)}, {"pole", to_json(t.pole)}});
  for (auto& t : fi.power_terms)
    powers.push_back({{"coef", to_json(t.coef)}, {"pole", to_json(t.pole)}, {"m", t.m}});
  json j{{"log_terms", logs}, {"power_terms", powers}, {"poly_part", to_json(fi.poly_part)}};
  if (fi.essential_n) j["essential_n"] = fi.essential_n;
  return j;
}

json to_json(const Trajectory& t) {
  json pts = json::array();
  for (cplx z : t.points) pts.push_back(to_json(z));
  json j{{"points", pts},
         {"times", t.times},
         {"terminal", terminal_name(t.terminal)},
         {"target", t.target},
         {"arclength", t.arclength},
         {"failed", t.failed}};
  if (t.terminal == Terminal::EscapedToInfinity) j["escape_angle"] = t.escape_angle;
  if (t.terminal == Terminal::ClosedOrbit) j["period"] = t.period;
  return j;
}

json to_json(const Limit& l) {
  return {{"kind", limit_kind_name(l.kind)}, {"index", l.index}, {"angle", l.angle}, {"z", to_json(l.z)}};
}

json to_json(const Separatrix& s) {
  return {{"origin_kind", s.origin_kind == OriginKind::Infinity ? "infinity" : "finite"},
          {"origin", s.origin},
          {"branch", s.branch},
          {"launch_angle", s.launch_angle},
          {"alpha", to_json(s.alpha)},
          {"omega", to_json(s.omega)},
          {"inconclusive", s.inconclusive},
          {"probe", s.probe},
          {"curve", to_json(s.curve)}};
}

json to_json(const Signature& s) {
  json conn = json::array();
  for (auto& c : s.connections) conn.push_back({c.from, c.to});
  return {{"kind", kind_name(s.kind)},
          {"degree", s.degree},
          {"finite", s.finite},
          {"infinity", s.infinity},
          {"infinity_pairs", s.infinity_pairs},
          {"connections", conn},
          {"joins", s.joins},
          {"geometry", geometry_name(s.geometry)},
          {"complete", s.complete},
          {"canonical", s.canonical}};
}

json to_json(const CatalogEntry& e) {
  return {{"family", family_name(e.family)},
          {"label", e.label},
          {"coarse", e.coarse},
          {"description", e.description},
          {"multisets", e.multisets},
          {"geometry", geometry_name(e.geometry)},
          {"joins", e.joins},
          {"connections", e.connections},
          {"example", e.example}};
}

json to_json(const Classification& c) {
  return {{"family", family_name(c.entry.family)},
          {"label", c.entry.label},
          {"coarse", c.entry.coarse},
          {"description", c.entry.description},
          {"confidence", confidence_name(c.confidence)},
          {"candidates", c.candidates},
          {"note", c.note},
          {"signature", to_json(c.signature)}};
}

json catalog_json(Family f) {
  json a = json::array();
  for (auto& e : catalog(f)) a.push_back(to_json(e));
  return {{"family", family_name(f)}, {"entries", a}};
}

json classification_json(const FlowContext& ctx, const std::vector<Separatrix>& seps) {
  json none{{"family", nullptr}, {"label", nullptr},        {"coarse", nullptr},
            {"description", ""}, {"confidence", "Unsupported"}, {"candidates", json::array()}};
  try {
    none["family"] = family_name(family_of(ctx.field));
  } catch (const Error& e) {
    none["note"] = e.what();
    none["signature"] = to_json(signature(ctx, seps));
    return none;
  }
  try {
    return to_json(classify_portrait(ctx, seps));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoMatch) throw;
    none["confidence"] = "NoMatch";
    none["note"] = e.what();
    none["signature"] = to_json(signature(ctx, seps));
    return none;
  }
}

json analyze_report(const Field& f, TraceOptions o) {
  FlowContext ctx = make_context(f);
  const auto seps = trace_separatrices(ctx, o);

  json eqs = json::array();
  for (auto& e : ctx.eqs) {
    json j = to_json(e);
    j["normal_form"] = normal_form_json(f, e);
    eqs.push_back(j);
  }
  json inf = json::array();
  for (auto& p : ctx.inf) inf.push_back(to_json(p));

  json fi = nullptr;
  try {
    fi = to_json(first_integral(f));
  } catch (const Error&) {
  }

  int inconclusive = 0;
  json sep = json::array();
  for (auto& s : seps) {
    inconclusive += s.inconclusive;
    sep.push_back({{"origin_kind", s.origin_kind == OriginKind::Infinity ? "infinity" : "finite"},
                   {"origin", s.origin},
                   {"branch", s.branch},
                   {"alpha", to_json(s.alpha)},
                   {"omega", to_json(s.omega)},
                   {"inconclusive", s.inconclusive},
                   {"probe", s.probe}});
  }

  return {{"input", print_field(f)},
          {"field", to_json(f)},
          {"equilibria", eqs},
          {"infinity", {{"points", inf}, {"model", model_json(f)}}},
          {"first_integral", fi},
          {"separatrices", {{"count", seps.size()}, {"inconclusive", inconclusive}, {"items", sep}}},
          {"classification", classification_json(ctx, seps)}};
}

}  // namespace holo
