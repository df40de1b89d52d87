#include "holo/local.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "holo/error.hpp"
#include "holo/ode.hpp"

namespace holo {

const char* eq_kind_name(EqKind k) {
  switch (k) {
    case EqKind::Center: return "Center";
    case EqKind::FocusRepelling: return "FocusRepelling";
    case EqKind::FocusAttracting: return "FocusAttracting";
    case EqKind::NodeRepelling: return "NodeRepelling";
    case EqKind::NodeAttracting: return "NodeAttracting";
    case EqKind::MultipleElliptic: return "MultipleElliptic";
    case EqKind::Pole: return "Pole";
    case EqKind::SaddleConjugate: return "SaddleConjugate";
  }
  return "Unknown";
}

std::string eq_code(EqKind k, int order) {
  switch (k) {
    case EqKind::Center: return "C";
    case EqKind::FocusRepelling: return "Fr";
    case EqKind::FocusAttracting: return "Fa";
    case EqKind::NodeRepelling: return "Nr";
    case EqKind::NodeAttracting: return "Na";
    case EqKind::MultipleElliptic: return "M" + std::to_string(order);
    case EqKind::Pole: return "P" + std::to_string(order);
    case EqKind::SaddleConjugate: return "S" + std::to_string(order);
  }
  return "?";
}

int Equilibrium::stability() const {
  switch (kind) {
    case EqKind::FocusRepelling:
    case EqKind::NodeRepelling: return 1;
    case EqKind::FocusAttracting:
    case EqKind::NodeAttracting: return -1;
    default: return 0;
  }
}

EqKind classify_simple(cplx eig, bool* band) {
  const double mag = std::abs(eig);
  const double r = std::abs(eig.real()) / mag, m = std::abs(eig.imag()) / mag;
  if (band) *band = (r > tol::center && r < tol::band) || (m > tol::center && m < tol::band);
  if (r <= tol::center) return EqKind::Center;
  if (m <= tol::center) return eig.real() > 0 ? EqKind::NodeRepelling : EqKind::NodeAttracting;
  return eig.real() > 0 ? EqKind::FocusRepelling : EqKind::FocusAttracting;
}

std::vector<Equilibrium> classify_equilibria(const Field& f) {
  std::vector<Equilibrium> out;
  switch (f.kind()) {
    case FieldKind::Polynomial:
    case FieldKind::ConjugatePolynomial: {
      const CPoly& p = f.poly();
      const bool conj = f.kind() == FieldKind::ConjugatePolynomial;
      for (const Root& r : roots(p)) {
        Equilibrium e;
        e.z = r.z;
        e.order = r.mult;
        auto rr = residue_inv_detail(p, r.z, r.mult);
        e.res = rr.value;
        e.res_zero = rr.is_zero();
        if (r.mult == 1) e.eig = p.derivative()(r.z);
        if (conj) {
          e.kind = EqKind::SaddleConjugate;
          e.sectors = 2 * r.mult + 2;
        } else if (r.mult == 1) {
          e.kind = classify_simple(e.eig, &e.band);
        } else {
          e.kind = EqKind::MultipleElliptic;
          e.sectors = 2 * r.mult - 2;
        }
        out.push_back(e);
      }
      break;
    }
    case FieldKind::InversePolynomial: {
      for (const Root& r : roots(f.poly())) {
        Equilibrium e;
        e.z = r.z;
        e.order = r.mult;
        e.is_pole = true;
        e.kind = EqKind::Pole;
        e.sectors = 2 * r.mult + 2;
        out.push_back(e);
      }
      break;
    }
    case FieldKind::Moebius: {
      const auto& m = f.moebius_params();
      if (m.A != cplx{}) {
        Equilibrium e;
        e.z = -m.B / m.A;
        e.eig = m.A * m.A / m.det();
        e.res = 1.0 / e.eig;
        e.kind = classify_simple(e.eig, &e.band);
        out.push_back(e);
      }
      if (m.C != cplx{}) {
        Equilibrium e;
        e.z = -m.D / m.C;
        e.is_pole = true;
        e.kind = EqKind::Pole;
        e.sectors = 4;
        out.push_back(e);
      }
      break;
    }
    case FieldKind::EssentialDemo:
      break;
  }
  return out;
}

namespace {

const Equilibrium* find_near(const std::vector<Equilibrium>& eqs, cplx z0) {
  const Equilibrium* best = nullptr;
  double bd = 1e-6 * (1.0 + std::abs(z0));
  for (const auto& e : eqs) {
    double d = std::abs(e.z - z0);
    if (d <= bd) {
      bd = d;
      best = &e;
    }
  }
  return best;
}

}  // namespace

Mat2 jacobian(const Field& f, cplx z0) {
  if (f.kind() == FieldKind::EssentialDemo)
    throw Error(ErrorCode::NotSimple, "no equilibria for the essential demo fields");
  auto eqs = classify_equilibria(f);
  const Equilibrium* e = find_near(eqs, z0);
  if (!e || e->is_pole || e->order != 1)
    throw Error(ErrorCode::NotSimple, "point is not a simple equilibrium");
  const double a = e->eig.real(), b = e->eig.imag();
  if (f.kind() == FieldKind::ConjugatePolynomial) return Mat2{{{a, -b}, {-b, -a}}};
  return Mat2{{{a, -b}, {b, a}}};
}

const char* normal_case_name(NormalCase c) {
  switch (c) {
    case NormalCase::Regular: return "Regular";
    case NormalCase::Linear: return "Linear";
    case NormalCase::MultipleResidueNonzero: return "MultipleResidueNonzero";
    case NormalCase::MultipleResidueZero: return "MultipleResidueZero";
    case NormalCase::PoleCase: return "PoleCase";
  }
  return "Unknown";
}

NormalForm normal_form(const Field& f, cplx z0) {
  if (f.kind() == FieldKind::EssentialDemo)
    throw Error(ErrorCode::EssentialNotSupported, "normal forms at essential singularities");
  if (f.kind() == FieldKind::ConjugatePolynomial)
    throw Error(ErrorCode::UnsupportedKind, "conjugate fields are not holomorphic");
  auto eqs = classify_equilibria(f);
  NormalForm nf;
  const Equilibrium* e = find_near(eqs, z0);
  if (!e) {
    nf.kind = NormalCase::Regular;
    return nf;
  }
  if (e->is_pole) {
    nf.kind = NormalCase::PoleCase;
    nf.pole_order = e->order;
    nf.n = e->order;
    return nf;
  }
  nf.n = e->order;
  if (e->order == 1) {
    nf.kind = NormalCase::Linear;
    nf.linear_coef = e->eig;
  } else if (e->res_zero) {
    nf.kind = NormalCase::MultipleResidueZero;
  } else {
    nf.kind = NormalCase::MultipleResidueNonzero;
    nf.gamma = 1.0 / e->res;
  }
  return nf;
}

namespace {

struct ReturnMap {
  const Field& f;
  cplx z0;
  double sgn;  // direction of rotation

  // r after one full turn, starting at radius rho on the ray theta = 0
  double operator()(double rho, double rtol) const {
    ode::Options o;
    o.rtol = rtol;
    o.atol = 1e-3 * rtol * rho;
    const double rmax = 20.0 * rho;
    bool escaped = false;
    auto rhs = [&](double th, const ode::State<1>& y) -> ode::State<1> {
      const double r = y[0];
      const double c = std::cos(th), s = std::sin(th);
      cplx w = eval_field_unchecked(f, z0 + cplx(r * c, r * s));
      const double radial = c * w.real() + s * w.imag();
      const double angular = (c * w.imag() - s * w.real()) / r;
      return {radial / angular};
    };
    auto obs = [&](const ode::Step<1>& st) {
      const double r = st.y1[0];
      const double th = st.t1;
      cplx w = eval_field_unchecked(f, z0 + std::polar(r, th));
      const double angular = std::cos(th) * w.imag() - std::sin(th) * w.real();
      if (r <= 0.0 || r > rmax || angular * sgn <= 0.0) {
        escaped = true;
        return ode::Control::Stop;
      }
      return ode::Control::Continue;
    };
    auto res = ode::dopri5<1>(rhs, 0.0, ode::State<1>{rho}, sgn * 2.0 * M_PI, o, obs);
    if (escaped || res.failed)
      throw Error(ErrorCode::GridEscape,
                  "return-map orbit left the analysis disk before completing a turn");
    return res.y[0];
  }
};

// Least squares for pi(rho) = sum_{j=1..k} V_j rho^j; returns V and the
// pseudo-inverse rows for error propagation.
void fit(std::span<const double> rho, std::span<const double> val, int k, std::vector<double>& V,
         std::vector<std::vector<double>>& pinv) {
  const std::size_t m = rho.size();
  const double s = *std::max_element(rho.begin(), rho.end());
  // scaled design X_ij = (rho_i/s)^(j+1)
  std::vector<std::vector<double>> X(m, std::vector<double>(k));
  for (std::size_t i = 0; i < m; ++i)
    for (int j = 0; j < k; ++j) X[i][j] = std::pow(rho[i] / s, j + 1);
  std::vector<std::vector<double>> A(k, std::vector<double>(k, 0.0));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (std::size_t i = 0; i < m; ++i) A[a][b] += X[i][a] * X[i][b];
  // invert A by Gauss-Jordan
  std::vector<std::vector<double>> inv(k, std::vector<double>(k, 0.0));
  for (int a = 0; a < k; ++a) inv[a][a] = 1.0;
  for (int c = 0; c < k; ++c) {
    int piv = c;
    for (int r = c + 1; r < k; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    std::swap(A[c], A[piv]);
    std::swap(inv[c], inv[piv]);
    const double d = A[c][c];
    for (int j = 0; j < k; ++j) {
      A[c][j] /= d;
      inv[c][j] /= d;
    }
    for (int r = 0; r < k; ++r)
      if (r != c) {
        const double g = A[r][c];
        for (int j = 0; j < k; ++j) {
          A[r][j] -= g * A[c][j];
          inv[r][j] -= g * inv[c][j];
        }
      }
  }
  pinv.assign(k, std::vector<double>(m, 0.0));
  V.assign(k, 0.0);
  for (int j = 0; j < k; ++j) {
    const double unscale = std::pow(s, -(j + 1));
    for (std::size_t i = 0; i < m; ++i) {
      double acc = 0.0;
      for (int b = 0; b < k; ++b) acc += inv[j][b] * X[i][b];
      pinv[j][i] = acc * unscale;
      V[j] += pinv[j][i] * val[i];
    }
  }
}

}  // namespace

LyapunovReport lyapunov_constants(const Field& f, cplx z0, int k, std::span<const double> rho_grid,
                                  double rtol) {
  if (k < 1 || k > 3) throw Error(ErrorCode::UnsupportedKind, "k must be between 1 and 3");
  if (static_cast<int>(rho_grid.size()) < k + 2)
    throw Error(ErrorCode::GridEscape, "rho grid needs at least k + 2 radii");
  for (double r : rho_grid)
    if (!(r > 0.0)) throw Error(ErrorCode::GridEscape, "rho grid must be strictly positive");
  if (f.kind() == FieldKind::ConjugatePolynomial || f.kind() == FieldKind::EssentialDemo)
    throw Error(ErrorCode::NoRotation, "return map needs a rotating holomorphic equilibrium");
  auto eqs = classify_equilibria(f);
  const Equilibrium* e = find_near(eqs, z0);
  if (!e || e->is_pole || e->order != 1)
    throw Error(ErrorCode::NotSimple, "point is not a simple equilibrium");
  if (std::abs(e->eig.imag()) <= tol::center * std::abs(e->eig))
    throw Error(ErrorCode::NoRotation, "eigenvalue is real: no rotation");

  ReturnMap pm{f, e->z, e->eig.imag() > 0 ? 1.0 : -1.0};
  const std::size_t m = rho_grid.size();
  std::vector<double> val(m), noise(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double rho = rho_grid[i];
    const double fine = pm(rho, rtol);
    const double coarse = pm(rho, std::min(1e-6, 100.0 * rtol));
    val[i] = fine - rho;
    noise[i] = std::max(std::abs(fine - coarse), 1e-14 * rho);
  }

  std::vector<double> Vk, Vk1;
  std::vector<std::vector<double>> Pk, Pk1;
  fit(rho_grid, val, k, Vk, Pk);
  fit(rho_grid, val, std::min<int>(k + 1, static_cast<int>(m) - 1), Vk1, Pk1);

  LyapunovReport rep;
  rep.method = "return-map least squares, dopri5 rtol=" + std::to_string(rtol) + ", " +
               std::to_string(m) + " radii, truncation by k+1 refit";
  rep.V = Vk;
  rep.est_error.resize(k);
  for (int j = 0; j < k; ++j) {
    double prop = 0.0;
    for (std::size_t i = 0; i < m; ++i) prop += std::abs(Pk[j][i]) * noise[i];
    rep.est_error[j] = prop + std::abs(Vk[j] - Vk1[j]);
  }
  return rep;
}

Line bendixson_line(const Field& f) {
  if (f.kind() != FieldKind::Polynomial || f.poly().degree() != 2)
    throw Error(ErrorCode::WrongDegree, "Bendixson line needs a quadratic polynomial field");
  // div = 2 Re f'(z) = 2 (a1 + 2 a2 x - 2 b2 y); translation-invariant form
  const cplx A1 = f.poly().coeff(1), A2 = f.poly().coeff(2);
  return {A1.real(), 2.0 * A2.real(), -2.0 * A2.imag()};
}

}  // namespace holo
