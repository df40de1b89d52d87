#include "holo/integrals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "holo/error.hpp"

namespace holo {

cplx FirstIntegral::G(cplx z) const {
  cplx g = poly_part(z);
  for (auto& t : log_terms) g += t.coef * std::log(z - t.pole);
  for (auto& t : power_terms) g -= t.coef / (double(t.m - 1) * std::pow(z - t.pole, t.m - 1));
  if (essential_n > 0) g += std::exp(-1.0 / std::pow(z, essential_n)) / double(essential_n);
  return g;
}

cplx FirstIntegral::dG(cplx z) const {
  cplx g = poly_part.derivative()(z);
  for (auto& t : log_terms) g += t.coef / (z - t.pole);
  for (auto& t : power_terms) g += t.coef / std::pow(z - t.pole, t.m);
  if (essential_n > 0) {
    const int n = essential_n;
    g += std::exp(-1.0 / std::pow(z, n)) / std::pow(z, n + 1);
  }
  return g;
}

FirstIntegral first_integral(const Field& f) {
  FirstIntegral fi;
  fi.source = f.kind();
  switch (f.kind()) {
    case FieldKind::Polynomial:
      for (const PFTerm& t : partial_fractions_inv(f.poly())) {
        if (t.power == 1)
          fi.log_terms.push_back({t.coef, t.pole});
        else
          fi.power_terms.push_back({t.coef, t.pole, t.power});
      }
      break;
    case FieldKind::InversePolynomial:
    case FieldKind::ConjugatePolynomial:
      fi.poly_part = f.poly().antiderivative();
      break;
    case FieldKind::Moebius: {
      auto m = f.moebius_params();
      if (std::abs(m.A) == 0.0) {
        fi.poly_part = CPoly{0.0, m.D / m.B, m.C / (2.0 * m.B)};
      } else {
        fi.poly_part = CPoly{0.0, m.C / m.A};
        fi.log_terms.push_back({m.det() / (m.A * m.A), -m.B / m.A});
      }
      break;
    }
    case FieldKind::EssentialDemo:
      fi.essential_n = f.essential_params().n;
      break;
  }
  return fi;
}

std::vector<double> eval_H(const FirstIntegral& fi, std::span<const cplx> path) {
  std::vector<double> out;
  out.reserve(path.size());
  if (path.empty()) return out;
  for (cplx z : path) {
    for (auto& t : fi.log_terms)
      if (std::abs(z - t.pole) <= pole_radius(t.pole)) throw PoleEvaluation(t.pole, "path hits a log pole");
    for (auto& t : fi.power_terms)
      if (std::abs(z - t.pole) <= pole_radius(t.pole)) throw PoleEvaluation(t.pole, "path hits a pole");
    if (fi.essential_n > 0 && std::abs(z) <= pole_radius(0.0))
      throw PoleEvaluation(0.0, "path hits the essential singularity");
  }
  // single-valued part, then the unwrapped arguments
  FirstIntegral rest = fi;
  rest.log_terms.clear();
  std::vector<double> arg(fi.log_terms.size());
  for (std::size_t k = 0; k < fi.log_terms.size(); ++k) arg[k] = std::arg(path[0] - fi.log_terms[k].pole);
  for (std::size_t i = 0; i < path.size(); ++i) {
    double h = rest.H(path[i]);
    for (std::size_t k = 0; k < fi.log_terms.size(); ++k) {
      const LogTerm& t = fi.log_terms[k];
      if (i > 0) {
        double d = std::arg((path[i] - t.pole) / (path[i - 1] - t.pole));
        if (std::abs(d) >= std::numbers::pi / 2)
          throw Error(ErrorCode::BranchJump, "path too coarse to unwrap a log term");
        arg[k] += d;
      }
      h += t.coef.imag() * std::log(std::abs(path[i] - t.pole)) + t.coef.real() * arg[k];
    }
    out.push_back(h);
  }
  return out;
}

PotentialPair potential(const Field& f) {
  if (f.kind() != FieldKind::ConjugatePolynomial)
    throw Error(ErrorCode::UnsupportedKind, "complex potential needs a conjugate field");
  return {f.poly().antiderivative()};
}

std::vector<cplx> critical_points(const Field& f) {
  std::vector<cplx> pts;
  switch (f.kind()) {
    case FieldKind::Polynomial:
    case FieldKind::ConjugatePolynomial:
    case FieldKind::InversePolynomial:
      for (auto& r : roots(f.poly())) pts.push_back(r.z);
      break;
    case FieldKind::Moebius: {
      auto m = f.moebius_params();
      if (std::abs(m.A) != 0.0) pts.push_back(-m.B / m.A);
      if (std::abs(m.C) != 0.0) pts.push_back(-m.D / m.C);
      break;
    }
    case FieldKind::EssentialDemo:
      pts.push_back(0.0);
      break;
  }
  return pts;
}

namespace {

// 7-point Gauss / 15-point Kronrod on [-1, 1]
constexpr std::array<double, 8> kXK = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                       0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                       0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                       0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWK = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                       0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                       0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                       0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWG = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
cplx gk15(F&& g, cplx a, cplx b, cplx& err) {
  const cplx mid = 0.5 * (a + b), half = 0.5 * (b - a);
  cplx k = kWK[7] * g(mid), gs = kWG[3] * g(mid);
  for (int i = 0; i < 7; ++i) {
    cplx f1 = g(mid - kXK[i] * half), f2 = g(mid + kXK[i] * half);
    k += kWK[i] * (f1 + f2);
    if (i % 2 == 1) gs += kWG[i / 2] * (f1 + f2);
  }
  err = (k - gs) * half;
  return k * half;
}

template <class F>
cplx adapt(F&& g, cplx a, cplx b, double tol, int depth) {
  cplx err;
  cplx v = gk15(g, a, b, err);
  if (std::abs(err) <= tol || depth >= 40) return v;
  const cplx m = 0.5 * (a + b);
  return adapt(g, a, m, 0.5 * tol, depth + 1) + adapt(g, m, b, 0.5 * tol, depth + 1);
}

double seg_dist(cplx a, cplx b, cplx p) {
  const cplx d = b - a;
  const double L2 = std::norm(d);
  double t = L2 > 0 ? ((p - a) * std::conj(d)).real() / L2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(a + t * d - p);
}

}  // namespace

cplx travel_time(const Field& f, std::span<const cplx> path) {
  const auto crit = critical_points(f);
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    for (cplx c : crit)
      if (seg_dist(path[i], path[i + 1], c) <= pole_radius(c))
        throw Error(ErrorCode::SingularPath, "path passes through a zero or pole of the field");
  // not path independent for conjugate fields; exact along the sampled orbit only in the limit
  auto g = [&](cplx z) { return 1.0 / eval_field_unchecked(f, z); };
  cplx total{};
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    cplx err;
    cplx rough = gk15(g, path[i], path[i + 1], err);
    const double tol = 1e-13 * (std::abs(rough) + std::abs(path[i + 1] - path[i]) * std::abs(g(path[i])));
    total += adapt(g, path[i], path[i + 1], std::max(tol, 1e-300), 0);
  }
  return total;
}

}  // namespace holo
