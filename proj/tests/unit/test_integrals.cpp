#include <cmath>
#include <numbers>

#include "doctest.h"
#include "holo/error.hpp"
#include "holo/integrals.hpp"
#include "holo/ode.hpp"
#include "oracles.hpp"

using holo::cplx;
using holo::CPoly;
using holo::Field;

namespace {

const cplx I(0.0, 1.0);
constexpr double kPi = std::numbers::pi;

// dense solution samples of z' = f(z) for the conservation checks
std::vector<cplx> orbit(const Field& f, cplx z0, double T, int samples) {
  holo::ode::Options o;
  o.rtol = 1e-12;
  o.atol = 1e-14;
  std::vector<cplx> pts{z0};
  auto rhs = [&](double, const holo::ode::State<2>& y) {
    cplx v = holo::eval_field_unchecked(f, cplx(y[0], y[1]));
    return holo::ode::State<2>{v.real(), v.imag()};
  };
  holo::ode::State<2> y{z0.real(), z0.imag()};
  for (int k = 1; k <= samples; ++k) {
    auto r = holo::ode::dopri5<2>(rhs, T * (k - 1) / samples, y, T * k / samples, o);
    y = r.y;
    pts.emplace_back(y[0], y[1]);
  }
  return pts;
}

cplx stencil(const holo::FirstIntegral& fi, cplx z, cplx h) {
  return (8.0 * (fi.G(z + h) - fi.G(z - h)) - (fi.G(z + 2.0 * h) - fi.G(z - 2.0 * h))) / (12.0 * h);
}

}  // namespace

TEST_CASE("first integrals of the worked examples") {
  auto lin = holo::first_integral(holo::parse_field("z"));
  auto sq = holo::first_integral(holo::parse_field("z^2"));
  auto rot = holo::first_integral(holo::parse_field("(1+i)*z"));
  auto ess = holo::first_integral(holo::parse_field("essential(1;2)"));
  for (cplx z : {cplx(1, 0.5), cplx(2, -1), cplx(0.3, 0.2), cplx(0.7, -2.5)}) {
    const double x = z.real(), y = z.imag(), r2 = x * x + y * y;
    CHECK(lin.H(z) == doctest::Approx(std::atan(y / x)).epsilon(1e-14));
    CHECK(sq.H(z) == doctest::Approx(y / r2).epsilon(1e-14));
    // the displayed arctan(y/x) - log(x^2+y^2)/2 is twice Im(log z / (1 + i))
    CHECK(2.0 * rot.H(z) == doctest::Approx(std::atan(y / x) - 0.5 * std::log(r2)).epsilon(1e-14));
    CHECK(ess.H(z) == doctest::Approx(std::exp(-x / r2) * std::sin(y / r2)).epsilon(1e-13));
  }
  auto e2 = holo::first_integral(holo::parse_field("essential(2;3)"));
  auto e3 = holo::first_integral(holo::parse_field("essential(3;4)"));
  for (cplx z : {cplx(1, 0.5), cplx(0.8, -0.9)}) {
    const double x = z.real(), y = z.imag(), r2 = x * x + y * y;
    CHECK(e2.H(z) == doctest::Approx(std::exp(-(x - y) * (x + y) / (r2 * r2)) *
                                     std::sin(2 * x * y / (r2 * r2)) / 2)
                         .epsilon(1e-13));
    CHECK(e3.H(z) == doctest::Approx(std::exp(-x * (x * x - 3 * y * y) / (r2 * r2 * r2)) *
                                     std::sin(y * (3 * x * x - y * y) / (r2 * r2 * r2)) / 3)
                         .epsilon(1e-13));
  }
}

TEST_CASE("moebius primitives") {
  const cplx A(1, 2), B(-0.5, 1), C(0.3, -1), D(2, 0.5);
  auto fi = holo::first_integral(Field::moebius(A, B, C, D));
  for (cplx z : {cplx(1, 1), cplx(-2, 0.5), cplx(3, -2)}) {
    auto want = [&](cplx w) { return (A * C * w + (A * D - B * C) * std::log(B + A * w)) / (A * A); };
    // same primitive up to a constant (branch of log(A) aside)
    CHECK(std::abs(stencil(fi, z, 1e-3) - (want(z + 1e-3) - want(z - 1e-3)) / 2e-3) < 1e-5);
    CHECK(std::abs(fi.dG(z) - (C * z + D) / (A * z + B)) < 1e-13);
  }
  auto fz = holo::first_integral(Field::moebius(0.0, B, C, D));
  CHECK(fz.log_terms.empty());
  for (cplx z : {cplx(1, 1), cplx(-2, 0.5)})
    CHECK(std::abs(fz.G(z) - (C * z * z / 2.0 + D * z) / B) < 1e-13);
}

TEST_CASE("complex potentials") {
  auto p = holo::potential(holo::parse_field("conj(z^2)"));
  auto q = holo::potential(holo::parse_field("conj(z)"));
  const double a0 = 0.3, b0 = -0.7, a1 = 1.1, b1 = 0.4, a2 = -0.6, b2 = 1.9;
  auto g = holo::potential(Field::conjugate(CPoly{cplx(a0, b0), cplx(a1, b1), cplx(a2, b2)}));
  for (cplx z : {cplx(1, 0.1), cplx(-2, 0.5), cplx(0.3, -1.7)}) {
    const double x = z.real(), y = z.imag();
    CHECK(p.psi(x, y) == doctest::Approx(x * x * y - y * y * y / 3).epsilon(1e-14));
    CHECK(q.psi(x, y) == doctest::Approx(x * y).epsilon(1e-14));
    const double psi2 = a2 * x * x * y - a2 * y * y * y / 3 + b2 * x * x * x / 3 - b2 * x * y * y +
                        a1 * x * y + b1 * x * x / 2 - b1 * y * y / 2 + a0 * y + b0 * x;
    const double phi2 = a2 * x * x * x / 3 - a2 * y * y * x - b2 * x * x * y + a1 * x * x / 2 - b1 * y * x +
                        a0 * x + b2 * y * y * y / 3 - a1 * y * y / 2 - b0 * y;
    CHECK(g.psi(x, y) == doctest::Approx(psi2).epsilon(1e-13));
    CHECK(g.phi(x, y) == doctest::Approx(phi2).epsilon(1e-13));
  }
  CHECK_THROWS_AS(holo::potential(holo::parse_field("z^2")), holo::Error);
}

TEST_CASE("eval_H examples") {
  auto lin = holo::first_integral(holo::parse_field("z"));
  std::vector<cplx> circle;
  for (int k = 0; k <= 64; ++k) circle.push_back(std::polar(1.0, 2 * kPi * k / 64));
  auto h = holo::eval_H(lin, circle);
  for (int k = 0; k <= 64; ++k) CHECK(h[k] == doctest::Approx(2 * kPi * k / 64).epsilon(1e-13));

  std::vector<cplx> coarse{1.0, std::polar(1.0, 2.2), std::polar(1.0, 4.4)};
  CHECK_THROWS_AS(holo::eval_H(lin, coarse), holo::Error);

  Field rot = holo::parse_field("(1+i)*z");
  auto path = orbit(rot, cplx(0.5, 0.2), 2.0, 200);
  auto hr = holo::eval_H(holo::first_integral(rot), path);
  for (double v : hr) CHECK(std::abs(v - hr[0]) < 1e-7);

  auto hs = holo::eval_H(holo::first_integral(holo::parse_field("z^2")), orbit(holo::parse_field("z^2"), 1.0, 0.5, 50));
  for (double v : hs) CHECK(v == 0.0);
}

TEST_CASE("travel time") {
  Field f = holo::parse_field("(-1+i)*z");
  auto path = orbit(f, 1.0, kPi, 400);
  CHECK(std::abs(path.back() - cplx(-std::exp(-kPi), 0)) < 1e-6);
  cplx t = holo::travel_time(f, path);
  CHECK(std::abs(t - kPi) < 1e-6);

  std::vector<cplx> seg{1.0, std::exp(1.0)};
  CHECK(std::abs(holo::travel_time(holo::parse_field("z"), seg) - 1.0) < 1e-13);

  auto sq = orbit(holo::parse_field("z^2"), 1.0, 0.5, 50);
  CHECK(std::abs(sq.back() - 2.0) < 1e-9);
  CHECK(std::abs(holo::travel_time(holo::parse_field("z^2"), sq) - 0.5) < 1e-12);

  std::vector<cplx> through{-1.0, 1.0};
  CHECK_THROWS_AS(holo::travel_time(holo::parse_field("z"), through), holo::Error);
}

TEST_CASE("property: G' = 1/f at random points") {
  oracle::Gen g(83);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = g.integer(1, 5);
    auto rs = g.separated(n, 2.0, 0.3);
    if (trial % 3 == 0 && n >= 2) rs[1] = rs[0];
    Field f = Field::polynomial(CPoly::from_roots(g.in_disk() + 0.5, rs));
    auto fi = holo::first_integral(f);
    cplx z = g.in_disk() * 5.0;
    bool ok = true;
    for (cplx r : rs) {
      cplx d = z - r;
      ok = ok && std::abs(d) > 0.1 && !(d.real() < 0 && std::abs(d.imag()) < 1e-2);
    }
    if (!ok) continue;
    ++checked;
    const cplx want = 1.0 / holo::eval_field(f, z);
    CHECK(std::abs(fi.dG(z) - want) <= 1e-9 * std::abs(want));
    CHECK(std::abs(stencil(fi, z, 1e-3) - want) <= 1e-8 * std::abs(want));
  }
  CHECK(checked > 30);
}

TEST_CASE("property: potentials are harmonic and orthogonal") {
  oracle::Gen g(89);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = g.integer(1, 4);
    std::vector<cplx> c(n + 1);
    for (auto& a : c) a = g.in_disk();
    c[n] += 0.3;
    auto pp = holo::potential(Field::conjugate(CPoly(c)));
    const cplx z = g.in_box(2.0);
    const double x = z.real(), y = z.imag(), h = 1e-4;
    const double scale = 1.0 + std::abs(pp.F(z));
    for (auto fn : {&holo::PotentialPair::phi, &holo::PotentialPair::psi}) {
      auto e = [&](double a, double b) { return (pp.*fn)(a, b); };
      const double lap = (e(x + h, y) + e(x - h, y) + e(x, y + h) + e(x, y - h) - 4 * e(x, y)) / (h * h);
      CHECK(std::abs(lap) < 1e-4 * scale);
    }
    // fourth-order differences so the truncation error stays below the tolerance
    auto grad = [&](auto fn) {
      const double k = 1e-3;
      auto e = [&](double a, double b) { return (pp.*fn)(a, b); };
      return std::pair{(8 * (e(x + k, y) - e(x - k, y)) - (e(x + 2 * k, y) - e(x - 2 * k, y))) / (12 * k),
                       (8 * (e(x, y + k) - e(x, y - k)) - (e(x, y + 2 * k) - e(x, y - 2 * k))) / (12 * k)};
    };
    auto [px, py] = grad(&holo::PotentialPair::phi);
    auto [sx, sy] = grad(&holo::PotentialPair::psi);
    CHECK(std::abs(px * sx + py * sy) <= 1e-8 * std::hypot(px, py) * std::hypot(sx, sy));
  }
}
