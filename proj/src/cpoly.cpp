#include "holo/cpoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "holo/error.hpp"

namespace holo {

CPoly::CPoly(std::vector<cplx> coeffs) : c_(std::move(coeffs)) { strip(); }

CPoly::CPoly(std::initializer_list<cplx> coeffs) : c_(coeffs) { strip(); }

void CPoly::strip() {
  while (!c_.empty() && c_.back() == cplx{}) c_.pop_back();
}

CPoly CPoly::constant(cplx c) { return CPoly(std::vector<cplx>{c}); }

CPoly CPoly::monomial(cplx c, int k) {
  std::vector<cplx> v(static_cast<std::size_t>(k) + 1);
  v[k] = c;
  return CPoly(std::move(v));
}

CPoly CPoly::from_roots(cplx lead, std::span<const cplx> roots) {
  CPoly p = constant(lead);
  for (cplx r : roots) p = p * CPoly{-r, 1.0};
  return p;
}

cplx CPoly::coeff(int k) const {
  if (k < 0 || k > degree()) return {};
  return c_[k];
}

double CPoly::max_abs_coeff() const {
  double m = 0.0;
  for (const cplx& a : c_) m = std::max(m, std::abs(a));
  return m;
}

cplx CPoly::operator()(cplx z) const {
  cplx acc{};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

CPoly CPoly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<cplx> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
  return CPoly(std::move(d));
}

CPoly CPoly::antiderivative() const {
  if (c_.empty()) return {};
  std::vector<cplx> d(c_.size() + 1);
  for (std::size_t k = 0; k < c_.size(); ++k) d[k + 1] = c_[k] / static_cast<double>(k + 1);
  return CPoly(std::move(d));
}

std::vector<cplx> CPoly::taylor(cplx z0) const {
  // repeated synthetic division by (z - z0)
  std::vector<cplx> a = c_;
  const int n = degree();
  for (int k = 0; k < n; ++k)
    for (int j = n - 1; j >= k; --j) a[j] += z0 * a[j + 1];
  return a;
}

CPoly CPoly::shifted(cplx c) const { return CPoly(taylor(c)); }

CPoly CPoly::operator-() const { return cplx(-1.0) * *this; }

CPoly operator+(const CPoly& a, const CPoly& b) {
  std::vector<cplx> r(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t k = 0; k < a.c_.size(); ++k) r[k] += a.c_[k];
  for (std::size_t k = 0; k < b.c_.size(); ++k) r[k] += b.c_[k];
  return CPoly(std::move(r));
}

CPoly operator-(const CPoly& a, const CPoly& b) { return a + (-b); }

CPoly operator*(const CPoly& a, const CPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<cplx> r(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  return CPoly(std::move(r));
}

CPoly operator*(cplx s, const CPoly& a) {
  std::vector<cplx> r = a.c_;
  for (cplx& x : r) x *= s;
  return CPoly(std::move(r));
}

CPoly CPoly::pow(int k) const {
  CPoly r = constant(1.0), base = *this;
  while (k > 0) {
    if (k & 1) r = r * base;
    base = base * base;
    k >>= 1;
  }
  return r;
}

std::vector<cplx> eval_derivs(const CPoly& p, cplx z0, int upto) {
  std::vector<cplx> t = p.taylor(z0);
  std::vector<cplx> out(static_cast<std::size_t>(upto) + 1);
  double fact = 1.0;
  for (int k = 0; k <= upto; ++k) {
    if (k > 0) fact *= k;
    out[k] = (k < static_cast<int>(t.size()) ? t[k] : cplx{}) * fact;
  }
  return out;
}

namespace {

int order_from_taylor(const std::vector<cplx>& t) {
  double scale = 0.0;
  for (const cplx& c : t) scale = std::max(scale, std::abs(c));
  for (std::size_t k = 0; k < t.size(); ++k)
    if (std::abs(t[k]) > tol::order * scale) return static_cast<int>(k);
  return static_cast<int>(t.size()) - 1;
}

// Rounding-error majorant for Horner evaluation at z.
double horner_bound(const CPoly& p, cplx z) {
  double acc = 0.0, r = std::abs(z);
  const auto& c = p.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * r + std::abs(*it);
  return acc;
}

std::vector<cplx> aberth(const CPoly& q) {
  const int n = q.degree();
  const auto& c = q.coeffs();
  const CPoly dq = q.derivative();
  const cplx center = -c[n - 1] / (static_cast<double>(n) * c[n]);
  double radius = std::pow(std::abs(q(center)) / std::abs(c[n]), 1.0 / n);
  if (!(radius > 0.0) || !std::isfinite(radius)) radius = 1.0;

  std::vector<cplx> z(n);
  for (int k = 0; k < n; ++k) {
    double ang = 2.0 * M_PI * k / n + 0.4;
    z[k] = center + radius * std::polar(1.0, ang);
  }
  std::vector<bool> done(n, false);
  const double eps = std::numeric_limits<double>::epsilon();
  int iter = 0;
  for (; iter < 500; ++iter) {
    bool all = true;
    for (int k = 0; k < n; ++k) {
      if (done[k]) continue;
      cplx pv = q(z[k]);
      if (std::abs(pv) <= 4.0 * eps * horner_bound(q, z[k])) {
        done[k] = true;
        continue;
      }
      all = false;
      cplx dv = dq(z[k]);
      cplx ratio = pv / dv;
      cplx sum{};
      for (int j = 0; j < n; ++j)
        if (j != k) {
          cplx d = z[k] - z[j];
          if (d == cplx{}) d = cplx(eps * (1.0 + std::abs(z[k])), 0.0);
          sum += 1.0 / d;
        }
      cplx step = ratio / (1.0 - ratio * sum);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) step = ratio;
      z[k] -= step;
      if (std::abs(step) <= 2.0 * eps * std::abs(z[k])) done[k] = true;
    }
    if (all) break;
  }

  const double scale = q.max_abs_coeff();
  for (int k = 0; k < n; ++k) {
    double res = std::abs(q(z[k]));
    double bound = tol::root * scale * std::pow(1.0 + std::abs(z[k]), n);
    if (!(res < bound)) {
      std::ostringstream os;
      os << "root finder did not converge: best iterate (" << z[k].real() << ", "
         << z[k].imag() << "), residual " << res;
      throw Error(ErrorCode::NonConvergence, os.str());
    }
  }
  return z;
}

struct Cluster {
  cplx center;
  int mult;
};

cplx centroid(const Cluster& a, const Cluster& b) {
  return (a.center * static_cast<double>(a.mult) + b.center * static_cast<double>(b.mult)) /
         static_cast<double>(a.mult + b.mult);
}

cplx polish(const CPoly& p, cplx z, int m) {
  // Newton on p^(m-1), whose root is simple when p has an m-fold root.
  CPoly d = p;
  for (int k = 1; k < m; ++k) d = d.derivative();
  CPoly dd = d.derivative();
  cplx x = z;
  for (int it = 0; it < 60; ++it) {
    cplx den = dd(x);
    if (den == cplx{}) break;
    cplx step = d(x) / den;
    x -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(x))) break;
  }
  if (!std::isfinite(x.real()) || !std::isfinite(x.imag()) ||
      std::abs(x - z) > 1e-3 * (1.0 + std::abs(z)))
    return z;
  return x;
}

}  // namespace

int zero_order(const CPoly& p, cplx z0) { return order_from_taylor(p.taylor(z0)); }

RootSet roots(const CPoly& p) {
  if (p.degree() < 1) throw Error(ErrorCode::DegenerateField, "polynomial degree must be >= 1");

  // Exact zeros at the origin are split off before iterating.
  const auto& c = p.coeffs();
  int zmult = 0;
  while (c[zmult] == cplx{}) ++zmult;
  CPoly q(std::vector<cplx>(c.begin() + zmult, c.end()));

  std::vector<Cluster> cl;
  if (q.degree() == 1) {
    cl.push_back({-q.coeff(0) / q.coeff(1), 1});
  } else if (q.degree() > 1) {
    for (cplx z : aberth(q)) cl.push_back({z, 1});
  }

  // Grow clusters through increasing radii; accept a merge only when the
  // derivative test confirms the combined order at the centroid.
  for (double rad : {1e-7, 1e-6, 1e-5, 1e-4, 1e-3}) {
    bool changed = true;
    while (changed) {
      changed = false;
      double best = std::numeric_limits<double>::infinity();
      std::size_t bi = 0, bj = 0;
      cplx merged{};
      for (std::size_t i = 0; i < cl.size(); ++i)
        for (std::size_t j = i + 1; j < cl.size(); ++j) {
          double d = std::abs(cl[i].center - cl[j].center);
          double lim = rad * (1.0 + std::abs(cl[i].center));
          if (d < lim && d < best) {
            const int m = cl[i].mult + cl[j].mult;
            cplx c = polish(q, centroid(cl[i], cl[j]), m);
            if (zero_order(q, c) >= m) {
              best = d;
              bi = i;
              bj = j;
              merged = c;
            }
          }
        }
      if (std::isfinite(best)) {
        cl[bi] = {merged, cl[bi].mult + cl[bj].mult};
        cl.erase(cl.begin() + static_cast<std::ptrdiff_t>(bj));
        changed = true;
      }
    }
  }

  RootSet out;
  if (zmult > 0) out.push_back({cplx{}, zmult});
  for (const Cluster& k : cl)
    out.push_back({k.center, k.mult});
  std::sort(out.begin(), out.end(), [](const Root& a, const Root& b) {
    if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
    return a.z.imag() < b.z.imag();
  });
  return out;
}

std::vector<cplx> series_reciprocal(std::span<const cplx> c, int n) {
  std::vector<cplx> s(static_cast<std::size_t>(std::max(n, 0)));
  if (n <= 0) return s;
  s[0] = 1.0 / c[0];
  for (int k = 1; k < n; ++k) {
    cplx acc{};
    for (int j = 1; j <= k && j < static_cast<int>(c.size()); ++j) acc += c[j] * s[k - j];
    s[k] = -acc / c[0];
  }
  return s;
}

bool ResidueResult::is_zero() const {
  return value == cplx{} || std::abs(value) <= tol::residue * scale;
}

namespace {

void check_order(const std::vector<cplx>& t, int order) {
  if (order < 1 || order >= static_cast<int>(t.size()) || order_from_taylor(t) != order) {
    std::ostringstream os;
    os << "supplied order " << order << " does not match the zero order "
       << order_from_taylor(t);
    throw Error(ErrorCode::OrderMismatch, os.str());
  }
}

}  // namespace

ResidueResult residue_inv_detail(const CPoly& p, cplx z0, int order) {
  std::vector<cplx> t = p.taylor(z0);
  check_order(t, order);
  const int m = order;
  // 1/p = w^{-m} / c_m * 1/(1 + q_1 w + q_2 w^2 + ...)
  std::vector<cplx> q(m);
  std::vector<double> qa(m);
  q[0] = 1.0;
  qa[0] = 1.0;
  for (int j = 1; j < m; ++j) {
    q[j] = m + j < static_cast<int>(t.size()) ? t[m + j] / t[m] : cplx{};
    qa[j] = std::abs(q[j]);
  }
  std::vector<cplx> s = series_reciprocal(q, m);
  std::vector<double> sa(m);
  sa[0] = 1.0;
  for (int k = 1; k < m; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += qa[j] * sa[k - j];
    sa[k] = acc;
  }
  return {s[m - 1] / t[m], sa[m - 1] / std::abs(t[m])};
}

cplx residue_inv(const CPoly& p, cplx z0, int order) {
  return residue_inv_detail(p, z0, order).value;
}

std::vector<cplx> principal_part_inv(const CPoly& p, cplx z0, int order) {
  std::vector<cplx> t = p.taylor(z0);
  check_order(t, order);
  const int m = order;
  std::vector<cplx> q(m);
  q[0] = 1.0;
  for (int j = 1; j < m; ++j)
    q[j] = m + j < static_cast<int>(t.size()) ? t[m + j] / t[m] : cplx{};
  std::vector<cplx> s = series_reciprocal(q, m);
  std::vector<cplx> out(m);
  for (int k = 1; k <= m; ++k) out[k - 1] = s[m - k] / t[m];
  return out;
}

HarmonicPair harmonic_pair(int k) {
  HarmonicPair h;
  h.k = k;
  h.p_row.assign(k + 1, 0);
  h.q_row.assign(k + 1, 0);
  long long binom = 1;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) binom = binom * (k - j + 1) / j;
    switch (j % 4) {
      case 0: h.p_row[j] = binom; break;
      case 1: h.q_row[j] = binom; break;
      case 2: h.p_row[j] = -binom; break;
      case 3: h.q_row[j] = -binom; break;
    }
  }
  return h;
}

std::vector<PFTerm> partial_fractions_inv(const CPoly& p, const RootSet& rs) {
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (std::size_t j = i + 1; j < rs.size(); ++j)
      if (std::abs(rs[i].z - rs[j].z) < tol::cluster * (1.0 + std::abs(rs[i].z)))
        throw Error(ErrorCode::IllConditioned, "roots closer than the clustering tolerance");
  std::vector<PFTerm> out;
  for (const Root& r : rs) {
    std::vector<cplx> pp = principal_part_inv(p, r.z, r.mult);
    for (int k = 1; k <= r.mult; ++k) out.push_back({pp[k - 1], r.z, k});
  }
  return out;
}

std::vector<PFTerm> partial_fractions_inv(const CPoly& p) {
  return partial_fractions_inv(p, roots(p));
}

}  // namespace holo
