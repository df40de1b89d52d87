#include "holo/field.hpp"

#include <cmath>
#include <sstream>

#include "holo/error.hpp"

namespace holo {

const char* kind_name(FieldKind k) {
  switch (k) {
    case FieldKind::Polynomial: return "polynomial";
    case FieldKind::InversePolynomial: return "inverse_polynomial";
    case FieldKind::ConjugatePolynomial: return "conjugate_polynomial";
    case FieldKind::Moebius: return "moebius";
    case FieldKind::EssentialDemo: return "essential";
  }
  return "unknown";
}

namespace {

void check_poly(const CPoly& p) {
  if (p.is_zero()) throw Error(ErrorCode::DegenerateField, "zero polynomial");
  if (p.degree() < 1) throw Error(ErrorCode::DegenerateField, "constant field: degree must be >= 1");
  if (p.degree() > kMaxDegree)
    throw Error(ErrorCode::NotRecognizedForm,
                "degree " + std::to_string(p.degree()) + " exceeds the maximum of 16");
  for (const cplx& c : p.coeffs())
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw Error(ErrorCode::DegenerateField, "non-finite coefficient");
}

}  // namespace

Field Field::polynomial(CPoly p) {
  check_poly(p);
  Field f;
  f.kind_ = FieldKind::Polynomial;
  f.poly_ = std::move(p);
  return f;
}

Field Field::inverse(CPoly p) {
  check_poly(p);
  Field f;
  f.kind_ = FieldKind::InversePolynomial;
  f.poly_ = std::move(p);
  for (const Root& r : roots(f.poly_)) f.singular_.push_back(r.z);
  return f;
}

Field Field::conjugate(CPoly p) {
  check_poly(p);
  Field f;
  f.kind_ = FieldKind::ConjugatePolynomial;
  f.poly_ = std::move(p);
  return f;
}

Field Field::moebius(cplx A, cplx B, cplx C, cplx D) {
  double scale = std::abs(A) * std::abs(D) + std::abs(B) * std::abs(C);
  cplx det = A * D - B * C;
  if (!(std::abs(det) > tol::zero * scale) || scale == 0.0)
    throw Error(ErrorCode::DegenerateField, "moebius field with AD - BC = 0");
  Field f;
  f.kind_ = FieldKind::Moebius;
  f.mob_ = {A, B, C, D};
  if (C != cplx{}) f.singular_.push_back(-D / C);
  return f;
}

Field Field::essential(int n, int m) {
  if (!((n == 1 && m == 2) || (n == 2 && m == 3) || (n == 3 && m == 4)))
    throw Error(ErrorCode::NotRecognizedForm, "essential(n;m) supports (1;2), (2;3), (3;4)");
  Field f;
  f.kind_ = FieldKind::EssentialDemo;
  f.ess_ = {n, m};
  f.singular_.push_back(0.0);
  return f;
}

bool Field::has_poly() const {
  return kind_ == FieldKind::Polynomial || kind_ == FieldKind::InversePolynomial ||
         kind_ == FieldKind::ConjugatePolynomial;
}

const CPoly& Field::poly() const {
  if (!has_poly()) throw Error(ErrorCode::UnsupportedKind, "field has no generating polynomial");
  return poly_;
}

const MoebiusParams& Field::moebius_params() const {
  if (kind_ != FieldKind::Moebius) throw Error(ErrorCode::UnsupportedKind, "not a moebius field");
  return mob_;
}

const EssentialParams& Field::essential_params() const {
  if (kind_ != FieldKind::EssentialDemo)
    throw Error(ErrorCode::UnsupportedKind, "not an essential demo field");
  return ess_;
}

cplx eval_field_unchecked(const Field& f, cplx z) {
  switch (f.kind()) {
    case FieldKind::Polynomial: return f.poly()(z);
    case FieldKind::InversePolynomial: return 1.0 / f.poly()(z);
    case FieldKind::ConjugatePolynomial: return std::conj(f.poly()(z));
    case FieldKind::Moebius: {
      const auto& m = f.moebius_params();
      return (m.A * z + m.B) / (m.C * z + m.D);
    }
    case FieldKind::EssentialDemo: {
      const auto& e = f.essential_params();
      return std::pow(z, e.m) * std::exp(1.0 / std::pow(z, e.n));
    }
  }
  return {};
}

cplx Field::operator()(cplx z) const { return eval_field(*this, z); }

cplx eval_field(const Field& f, cplx z) {
  for (cplx s : f.singular_points())
    if (std::abs(z - s) <= pole_radius(z)) {
      std::ostringstream os;
      os << "evaluation within pole tolerance of " << format_complex(s);
      throw PoleEvaluation(s, os.str());
    }
  return eval_field_unchecked(f, z);
}

PlanarExpansion planar_of(const CPoly& p) {
  const int n = p.degree();
  PlanarExpansion e{BiPoly(std::max(n, 0)), BiPoly(std::max(n, 0))};
  if (n < 0) return e;
  e.u.add(0, 0, p.coeff(0).real());
  e.v.add(0, 0, p.coeff(0).imag());
  for (int k = 1; k <= n; ++k) {
    const double a = p.coeff(k).real(), b = p.coeff(k).imag();
    HarmonicPair h = harmonic_pair(k);
    for (int j = 0; j <= k; ++j) {
      // monomial x^{k-j} y^j
      const double pk = static_cast<double>(h.p_row[j]);
      const double qk = static_cast<double>(h.q_row[j]);
      e.u.add(k - j, j, a * pk - b * qk);
      e.v.add(k - j, j, b * pk + a * qk);
    }
  }
  return e;
}

PlanarExpansion to_planar(const Field& f) {
  if (f.kind() == FieldKind::Polynomial) return planar_of(f.poly());
  if (f.kind() == FieldKind::ConjugatePolynomial) {
    PlanarExpansion e = planar_of(f.poly());
    e.v = -1.0 * e.v;
    return e;
  }
  throw Error(ErrorCode::UnsupportedKind,
              std::string("planar expansion is defined for polynomial kinds, not ") +
                  kind_name(f.kind()));
}

std::string format_complex(cplx c) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << c.real() << (std::signbit(c.imag()) ? "-" : "+") << std::abs(c.imag()) << "i)";
  return os.str();
}

namespace {

std::string print_poly(const CPoly& p) {
  std::string out;
  for (int k = 0; k <= p.degree(); ++k) {
    if (p.coeff(k) == cplx{}) continue;
    if (!out.empty()) out += " + ";
    out += format_complex(p.coeff(k));
    if (k >= 1) out += "*z";
    if (k >= 2) out += "^" + std::to_string(k);
  }
  return out.empty() ? "0" : out;
}

}  // namespace

std::string print_field(const Field& f) {
  switch (f.kind()) {
    case FieldKind::Polynomial: return print_poly(f.poly());
    case FieldKind::InversePolynomial: return "1/(" + print_poly(f.poly()) + ")";
    case FieldKind::ConjugatePolynomial: return "conj(" + print_poly(f.poly()) + ")";
    case FieldKind::Moebius: {
      const auto& m = f.moebius_params();
      return "moebius(" + format_complex(m.A) + ";" + format_complex(m.B) + ";" +
             format_complex(m.C) + ";" + format_complex(m.D) + ")";
    }
    case FieldKind::EssentialDemo: {
      const auto& e = f.essential_params();
      return "essential(" + std::to_string(e.n) + ";" + std::to_string(e.m) + ")";
    }
  }
  return {};
}

}  // namespace holo
