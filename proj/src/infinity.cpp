#include "holo/infinity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "holo/error.hpp"

namespace holo {

const char* chart_name(Chart c) {
  switch (c) {
    case Chart::U1: return "U1";
    case Chart::U2: return "U2";
    case Chart::V1: return "V1";
    case Chart::V2: return "V2";
  }
  return "?";
}

const char* inf_kind_name(InfKind k) {
  switch (k) {
    case InfKind::Saddle: return "Saddle";
    case InfKind::NodeRepelling: return "NodeRepelling";
    case InfKind::NodeAttracting: return "NodeAttracting";
  }
  return "?";
}

double chart_angle(Chart c, double s) {
  double a = 0;
  switch (c) {
    case Chart::U1: a = std::atan2(s, 1.0); break;
    case Chart::V1: a = std::atan2(-s, -1.0); break;
    case Chart::U2: a = std::atan2(1.0, s); break;
    case Chart::V2: a = std::atan2(-1.0, -s); break;
  }
  if (a < 0) a += 2 * std::numbers::pi;
  return a;
}

namespace {

PlanarExpansion chart_planar(const Field& f) {
  if (f.kind() != FieldKind::Polynomial && f.kind() != FieldKind::ConjugatePolynomial)
    throw Error(ErrorCode::UnsupportedKind,
                std::string("compactification needs a polynomial or conjugate field, got ") +
                    kind_name(f.kind()));
  return to_planar(f);
}

// w^n P(1/w, s/w) (first chart) or w^n P(s/w, 1/w) (second chart), as a polynomial in (s, w)
BiPoly project(const BiPoly& P, int n, bool first) {
  BiPoly out(n);
  for (int i = 0; i <= P.degree(); ++i)
    for (int j = 0; i + j <= P.degree(); ++j) {
      double c = P.coeff(i, j);
      if (c == 0.0) continue;
      out.add(first ? j : i, n - i - j, c);
    }
  return out;
}

BiPoly monomial(int i, int j, double c) {
  BiPoly b(i + j);
  b.add(i, j, c);
  return b;
}

CPoly equator(const BiPoly& sp) {
  std::vector<cplx> c;
  for (int i = 0; i <= sp.degree(); ++i) c.emplace_back(sp.coeff(i, 0), 0.0);
  return CPoly(c);
}

InfinityPoint make_point(const ChartSystem& cs, double s, bool linked) {
  InfinityPoint p;
  p.chart = cs.chart;
  p.s = s;
  p.angle = chart_angle(cs.chart, s);
  p.antipode_linked = linked;
  BiPoly ss = cs.s_poly.d_first(), sw = cs.s_poly.d_second();
  BiPoly ws = cs.w_poly.d_first(), ww = cs.w_poly.d_second();
  p.jac = {{{ss(s, 0.0), sw(s, 0.0)}, {ws(s, 0.0), ww(s, 0.0)}}};
  const double d = p.det();
  if (d < 0)
    p.kind = InfKind::Saddle;
  else
    p.kind = p.trace() > 0 ? InfKind::NodeRepelling : InfKind::NodeAttracting;
  return p;
}

}  // namespace

ChartSystem compactify(const Field& f, Chart chart) {
  PlanarExpansion pe = chart_planar(f);
  const int n = f.poly().degree();
  const bool first = chart == Chart::U1 || chart == Chart::V1;
  BiPoly U = project(pe.u, n, first), V = project(pe.v, n, first);
  ChartSystem cs;
  cs.chart = chart;
  cs.degree = n;
  BiPoly s = monomial(1, 0, 1.0), w = monomial(0, 1, 1.0);
  if (first) {
    cs.s_poly = V + (-1.0) * (s * U);
    cs.w_poly = (-1.0) * (w * U);
  } else {
    cs.s_poly = U + (-1.0) * (s * V);
    cs.w_poly = (-1.0) * (w * V);
  }
  if ((chart == Chart::V1 || chart == Chart::V2) && n % 2 == 0) {
    cs.s_poly = (-1.0) * cs.s_poly;
    cs.w_poly = (-1.0) * cs.w_poly;
  }
  return cs;
}

std::vector<InfinityPoint> infinite_equilibria(const Field& f) {
  std::vector<InfinityPoint> out;
  struct Pass {
    Chart u, v;
    double lim;
    bool closed;
  };
  for (Pass pass : {Pass{Chart::U1, Chart::V1, 10.0, true}, Pass{Chart::U2, Chart::V2, 0.1, false}}) {
    ChartSystem cu = compactify(f, pass.u), cv = compactify(f, pass.v);
    CPoly eq = equator(cu.s_poly);
    if (eq.is_zero()) throw Error(ErrorCode::DegenerateEquator, "equator consists of equilibria");
    if (eq.degree() < 1) continue;
    for (const Root& r : roots(eq)) {
      if (std::abs(r.z.imag()) >= 1e-9) continue;
      const double s = r.z.real();
      if (pass.closed ? std::abs(s) > pass.lim : std::abs(s) >= pass.lim) continue;
      out.push_back(make_point(cu, s, false));
      out.push_back(make_point(cv, s, true));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const InfinityPoint& a, const InfinityPoint& b) { return a.angle < b.angle; });
  return out;
}

InfinityModel infinity_local_model(const Field& f) {
  std::vector<cplx> P, Q;
  InfinityModel mdl;
  switch (f.kind()) {
    case FieldKind::Polynomial:
      P = f.poly().coeffs();
      Q = {1.0};
      break;
    case FieldKind::InversePolynomial:
      P = {1.0};
      Q = f.poly().coeffs();
      break;
    case FieldKind::ConjugatePolynomial:
      P = {1.0};
      Q = f.poly().coeffs();
      mdl.flagged = true;
      mdl.note = "orbit-equivalent inverse field 1/p used for the conjugate field";
      break;
    case FieldKind::Moebius: {
      auto mp = f.moebius_params();
      P = CPoly{mp.B, mp.A}.coeffs();
      Q = CPoly{mp.D, mp.C}.coeffs();
      if (P.empty()) P = {0.0};
      break;
    }
    case FieldKind::EssentialDemo:
      throw Error(ErrorCode::UnsupportedKind, "no rational model for the essential demo field");
  }
  const int n = static_cast<int>(P.size()) - 1, m = static_cast<int>(Q.size()) - 1;
  mdl.n = n;
  mdl.m = m;
  mdl.coef = 1.0;
  if (n <= m) {
    mdl.kind = InfinityCase::A;
    mdl.exponent = m - n;
    // residue of Q(1/z) / (z^2 P(1/z)) at 0 = coefficient of z^(m-n+1) in rev(Q)/rev(P)
    std::vector<cplx> rp(P.rbegin(), P.rend()), rq(Q.rbegin(), Q.rend());
    const int j = m - n + 1;
    auto inv = series_reciprocal(rp, j + 1);
    cplx c{};
    for (int k = 0; k <= j && k < static_cast<int>(rq.size()); ++k) c += rq[k] * inv[j - k];
    mdl.coef = c;
    if (n == m) {
      mdl.flagged = true;
      if (!mdl.note.empty()) mdl.note += "; ";
      mdl.note += "n = m is the boundary of case A";
    }
  } else if (n == m + 1) {
    mdl.kind = InfinityCase::B;
    mdl.exponent = 1;
    mdl.coef = P.back() / Q.back();
  } else if (n == m + 2) {
    mdl.kind = InfinityCase::C;
    mdl.exponent = 2;
  } else {
    mdl.kind = InfinityCase::D;
    mdl.exponent = n - m;
  }
  return mdl;
}

}  // namespace holo
