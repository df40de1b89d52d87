#include <cmath>
#include <numbers>

#include "doctest.h"
#include "holo/error.hpp"
#include "holo/infinity.hpp"
#include "oracles.hpp"

using holo::Chart;
using holo::cplx;
using holo::CPoly;
using holo::Field;
using holo::InfKind;

namespace {

const cplx I(0.0, 1.0);

// s-equation on the equator by direct substitution: Im((1 - i s) w^n f((1 + i s)/w)) at w -> 0
double equator_oracle(const CPoly& p, double s) {
  const int n = p.degree();
  return (p.leading() * std::pow(cplx(1, s), n) * cplx(1, -s)).imag();
}

}  // namespace

TEST_CASE("quadratic chart U1 matches the displayed system") {
  const double a1 = 0.7, b1 = -1.2, a2 = 1.3, b2 = 0.4;
  auto cs = holo::compactify(Field::polynomial(CPoly{0, cplx(a1, b1), cplx(a2, b2)}), Chart::U1);
  holo::BiPoly s_want(3), w_want(3);
  s_want.add(0, 0, b2);
  s_want.add(0, 1, b1);
  s_want.add(1, 0, a2);
  s_want.add(2, 0, b2);
  s_want.add(2, 1, b1);
  s_want.add(3, 0, a2);
  w_want.add(0, 1, -a2);
  w_want.add(0, 2, -a1);
  w_want.add(1, 1, 2 * b2);
  w_want.add(1, 2, b1);
  w_want.add(2, 1, a2);
  CHECK(cs.s_poly.approx_equal(s_want, 1e-15));
  CHECK(cs.w_poly.approx_equal(w_want, 1e-15));
}

TEST_CASE("cubic equator in U1") {
  auto cs = holo::compactify(holo::parse_field("z^3"), Chart::U1);
  for (double s : {-2.0, -0.3, 0.0, 0.8, 3.0}) {
    CHECK(cs.s_poly(s, 0.0) == doctest::Approx(2 * s * (s * s + 1)));
    CHECK(cs.w_poly(s, 0.0) == 0.0);
  }
}

TEST_CASE("V charts carry the (-1)^(n-1) factor") {
  for (const char* src : {"z^2+z", "z^3-2*z", "(1+i)*z^4", "conj(z^2)", "conj(z^3+1)"}) {
    Field f = holo::parse_field(src);
    const double sign = (f.poly().degree() % 2 == 0) ? -1.0 : 1.0;
    for (auto [u, v] : {std::pair{Chart::U1, Chart::V1}, std::pair{Chart::U2, Chart::V2}}) {
      auto cu = holo::compactify(f, u), cv = holo::compactify(f, v);
      CHECK(cv.s_poly.approx_equal(sign * cu.s_poly, 0.0));
      CHECK(cv.w_poly.approx_equal(sign * cu.w_poly, 0.0));
    }
  }
  CHECK_THROWS_AS(holo::compactify(holo::parse_field("1/z"), Chart::U1), holo::Error);
}

TEST_CASE("infinite equilibria examples") {
  const double a2 = 1.3, b2 = 0.4;
  auto q = holo::infinite_equilibria(Field::polynomial(CPoly{0, cplx(0.5, 1), cplx(a2, b2)}));
  REQUIRE(q.size() == 2);
  bool found = false;
  for (auto& p : q) {
    CHECK(p.kind == InfKind::Saddle);
    if (p.chart == Chart::U1) {
      CHECK(std::abs(p.s + b2 / a2) < 1e-13);
      found = true;
    }
  }
  CHECK(found);
  CHECK(q[0].antipode_linked != q[1].antipode_linked);

  auto c = holo::infinite_equilibria(holo::parse_field("z*(z-(1+i))*(z-(3+3i))"));
  REQUIRE(c.size() == 4);
  for (auto& p : c) CHECK(p.kind == InfKind::Saddle);

  auto cj = holo::infinite_equilibria(holo::parse_field("conj(z^2)"));
  REQUIRE(cj.size() == 6);
  for (std::size_t k = 0; k < cj.size(); ++k) {
    CHECK(cj[k].kind != InfKind::Saddle);
    CHECK(cj[k].kind != cj[(k + 1) % cj.size()].kind);
  }

  // z^3: both real directions are outgoing, the imaginary ones incoming
  auto z3 = holo::infinite_equilibria(holo::parse_field("z^3"));
  REQUIRE(z3.size() == 4);
  for (auto& p : z3) {
    const bool real_dir = std::abs(std::sin(p.angle)) < 1e-9;
    CHECK(p.arrives() == real_dir);
  }

  CHECK_THROWS_AS(holo::infinite_equilibria(holo::parse_field("2*z")), holo::Error);
  CHECK(holo::infinite_equilibria(holo::parse_field("i*z")).empty());
}

TEST_CASE("infinity local models") {
  auto q = holo::infinity_local_model(holo::parse_field("1/(z^2+3*z+1)"));
  CHECK(q.kind == holo::InfinityCase::A);
  CHECK(q.exponent == 2);
  CHECK(q.coef == cplx(0));
  auto r = holo::infinity_local_model(holo::parse_field("1/(z^4-z+2)"));
  CHECK(r.kind == holo::InfinityCase::A);
  CHECK(r.exponent == 4);
  CHECK(r.coef == cplx(0));

  const cplx A(1, 2), B(-0.5, 1), C(0.3, -1), D(2, 0.5);
  auto m = holo::infinity_local_model(Field::moebius(A, B, C, D));
  CHECK(m.kind == holo::InfinityCase::A);
  CHECK(m.exponent == 0);
  CHECK(m.flagged);
  // residue of (C/z + D) / (z^2 (A/z + B)) = (C + D z) / (z (A + B z)) at 0 ... of order z^-2 term
  auto g = [&](cplx z) { return (C / z + D) / (z * z * (A / z + B)); };
  CHECK(std::abs(m.coef - oracle::contour(g, 0.0, 0.1)) < 1e-10);

  CHECK(holo::infinity_local_model(Field::moebius(A, B, 0.0, D)).kind == holo::InfinityCase::B);
  CHECK(std::abs(holo::infinity_local_model(Field::moebius(A, B, 0.0, D)).coef - A / D) < 1e-15);
  CHECK(holo::infinity_local_model(holo::parse_field("z^2")).kind == holo::InfinityCase::C);
  auto d = holo::infinity_local_model(holo::parse_field("z^5"));
  CHECK(d.kind == holo::InfinityCase::D);
  CHECK(d.exponent == 5);
  CHECK(holo::infinity_local_model(holo::parse_field("conj(z^3)")).flagged);
  CHECK_THROWS_AS(holo::infinity_local_model(holo::parse_field("essential(1;2)")), holo::Error);
}

TEST_CASE("property: 2(n-1) saddles in the directions where the leading term is real") {
  oracle::Gen g(61);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = g.integer(2, 4);
    std::vector<cplx> c(n + 1);
    for (auto& a : c) a = g.in_disk();
    c[n] += c[n] / std::abs(c[n]) * 0.2;
    CPoly p(c);
    auto pts = holo::infinite_equilibria(Field::polynomial(p));
    REQUIRE(static_cast<int>(pts.size()) == 2 * (n - 1));
    for (auto& pt : pts) {
      CHECK(pt.kind == InfKind::Saddle);
      const cplx lead = p.leading() * std::polar(1.0, (n - 1) * pt.angle);
      CHECK(std::abs(lead.imag()) < 1e-9 * std::abs(lead));
      CHECK(pt.arrives() == (lead.real() > 0));
      if (pt.chart == Chart::U1) CHECK(std::abs(equator_oracle(p, pt.s)) < 1e-9);
    }
  }
}

TEST_CASE("property: conjugate fields give 2(n+1) alternating nodes") {
  oracle::Gen g(67);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = g.integer(1, 4);
    std::vector<cplx> c(n + 1);
    for (auto& a : c) a = g.in_disk();
    c[n] += c[n] / std::abs(c[n]) * 0.2;
    auto pts = holo::infinite_equilibria(Field::conjugate(CPoly(c)));
    REQUIRE(static_cast<int>(pts.size()) == 2 * (n + 1));
    for (std::size_t k = 0; k < pts.size(); ++k) {
      CHECK(pts[k].kind != InfKind::Saddle);
      CHECK(pts[k].kind != pts[(k + 1) % pts.size()].kind);
    }
  }
}

TEST_CASE("property: antipodal points have the sign-rule jacobian") {
  oracle::Gen g(71);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = g.integer(2, 5);
    std::vector<cplx> c(n + 1);
    for (auto& a : c) a = g.in_disk();
    c[n] += 0.3;
    Field f = trial % 2 ? Field::polynomial(CPoly(c)) : Field::conjugate(CPoly(c));
    auto pts = holo::infinite_equilibria(f);
    const double sign = n % 2 == 0 ? -1.0 : 1.0;
    for (auto& p : pts) {
      if (p.antipode_linked) continue;
      const double anti = std::fmod(p.angle + std::numbers::pi, 2 * std::numbers::pi);
      int hits = 0;
      for (auto& q : pts) {
        const double d = std::remainder(q.angle - anti, 2 * std::numbers::pi);
        if (std::abs(d) > 1e-12) continue;
        ++hits;
        CHECK(q.s == p.s);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) CHECK(q.jac[i][j] == sign * p.jac[i][j]);
      }
      CHECK(hits == 1);
    }
  }
}

TEST_CASE("property: chart overlap maps s to 1/s") {
  oracle::Gen g(73);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = g.integer(2, 4);
    std::vector<cplx> c(n + 1);
    for (auto& a : c) a = g.in_disk();
    c[n] += 0.3;
    Field f = Field::polynomial(CPoly(c));
    auto u2 = holo::compactify(f, Chart::U2);
    std::vector<cplx> eq;
    for (int i = 0; i <= u2.s_poly.degree(); ++i) eq.emplace_back(u2.s_poly.coeff(i, 0), 0.0);
    auto rs = holo::roots(CPoly(eq));
    for (auto& p : holo::infinite_equilibria(f)) {
      if (p.chart != Chart::U1 || std::abs(p.s) < 0.1) continue;
      double best = 1e300;
      for (auto& r : rs) best = std::min(best, std::abs(r.z - 1.0 / p.s));
      CHECK(best < 1e-9);
    }
  }
}

TEST_CASE("property: quadratic jacobian at infinity in closed form") {
  oracle::Gen g(79);
  for (int trial = 0; trial < 100; ++trial) {
    const double a1 = g.uniform(-2, 2), b1 = g.uniform(-2, 2), b2 = g.uniform(-2, 2);
    double a2 = g.uniform(0.1, 2) * (trial % 2 ? 1 : -1);
    auto pts = holo::infinite_equilibria(Field::polynomial(CPoly{0, cplx(a1, b1), cplx(a2, b2)}));
    for (auto& p : pts) {
      if (p.chart != Chart::U1) continue;
      const double k = a2 + b2 * b2 / a2;
      CHECK(std::abs(p.s + b2 / a2) < 1e-10 * (1 + std::abs(b2 / a2)));
      CHECK(std::abs(p.jac[0][0] - k) < 1e-10 * (1 + std::abs(k)));
      CHECK(std::abs(p.jac[1][1] + k) < 1e-10 * (1 + std::abs(k)));
      CHECK(std::abs(p.jac[1][0]) < 1e-10);
      const double j12 = b1 * (1 + b2 * b2 / (a2 * a2));
      CHECK(std::abs(p.jac[0][1] - j12) < 1e-10 * (1 + std::abs(j12)));
      CHECK(p.det() < 0);
    }
  }
}
