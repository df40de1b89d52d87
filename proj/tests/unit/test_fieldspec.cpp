#include "doctest.h"
#include "holo/error.hpp"
#include "holo/field.hpp"
#include "oracles.hpp"

using holo::cplx;
using holo::CPoly;
using holo::Field;
using holo::FieldKind;

namespace {

const cplx I(0.0, 1.0);

holo::ErrorCode code_of(const std::string& text) {
  try {
    holo::parse_field(text);
  } catch (const holo::Error& e) {
    return e.code();
  }
  FAIL("expected a parse error for " << text);
  return holo::ErrorCode::IOError;
}

}  // namespace

TEST_CASE("parse expands products") {
  Field f = holo::parse_field("z*(z-1)*(z-2)");
  CHECK(f.kind() == FieldKind::Polynomial);
  CHECK(f.poly().coeffs() == std::vector<cplx>{0, 2, -3, 1});
}

TEST_CASE("parse accepts complex literals and juxtaposition") {
  Field f = holo::parse_field("z*(z-(1+1i))*(z-(3+3i))");
  std::vector<cplx> r{0.0, 1.0 + I, 3.0 + 3.0 * I};
  CHECK(f.poly() == CPoly::from_roots(1.0, r));

  Field g = holo::parse_field("z(z-(2-3/2i))(z-(36/25-48/25i))");
  std::vector<cplx> r2{0.0, cplx(2, -1.5), cplx(1.44, -1.92)};
  CPoly want = CPoly::from_roots(1.0, r2);
  for (int k = 0; k <= 3; ++k) CHECK(std::abs(g.poly().coeff(k) - want.coeff(k)) < 1e-14);

  CHECK(holo::parse_field("(-1+2i)z").poly().coeff(1) == cplx(-1, 2));
  CHECK(holo::parse_field("i*z^2").poly().coeff(2) == I);
  CHECK(holo::parse_field("2.5e-1*z").poly().coeff(1) == cplx(0.25));
}

TEST_CASE("parse recognizes the other kinds") {
  Field inv = holo::parse_field("1/(z*(z-1)^2)");
  CHECK(inv.kind() == FieldKind::InversePolynomial);
  CHECK(inv.poly().coeffs() == std::vector<cplx>{0, 1, -2, 1});
  CHECK(holo::parse_field("1/z^4").poly() == CPoly::monomial(1.0, 4));
  CHECK(holo::parse_field("z^-3").kind() == FieldKind::InversePolynomial);
  CHECK(holo::parse_field("2/(z-1)").poly() == (CPoly{-0.5, 0.5}));

  Field c = holo::parse_field("conj(z^2)");
  CHECK(c.kind() == FieldKind::ConjugatePolynomial);
  CHECK(c.poly() == CPoly::monomial(1.0, 2));

  Field m = holo::parse_field("moebius(0+1i;1+0i;1+0i;0+0i)");
  CHECK(m.kind() == FieldKind::Moebius);
  CHECK(m.moebius_params().A == I);
  CHECK(m.singular_points().size() == 1);

  Field e = holo::parse_field("essential(2;3)");
  CHECK(e.kind() == FieldKind::EssentialDemo);
  CHECK(e.essential_params().n == 2);
}

TEST_CASE("parse errors carry their category") {
  CHECK(code_of("z + 1/z") == holo::ErrorCode::NotRecognizedForm);
  CHECK(code_of("(z+1)/(z-1)") == holo::ErrorCode::NotRecognizedForm);
  CHECK(code_of("conj(z)*z") == holo::ErrorCode::NotRecognizedForm);
  CHECK(code_of("z - z") == holo::ErrorCode::DegenerateField);
  CHECK(code_of("3") == holo::ErrorCode::DegenerateField);
  CHECK(code_of("moebius(1;2;2;4)") == holo::ErrorCode::DegenerateField);
  CHECK(code_of("z^17") == holo::ErrorCode::NotRecognizedForm);
  CHECK(code_of("essential(1;3)") == holo::ErrorCode::NotRecognizedForm);
  CHECK(code_of("z*(z-1") == holo::ErrorCode::SyntaxError);
  CHECK(code_of("z^1.5") == holo::ErrorCode::SyntaxError);
  CHECK(code_of("sin(z)") == holo::ErrorCode::SyntaxError);
}

TEST_CASE("syntax errors report position and expected token") {
  try {
    holo::parse_field("z*(z-1");
    FAIL("no throw");
  } catch (const holo::SyntaxError& e) {
    CHECK(e.position() == 6);
    CHECK(e.expected() == "')'");
  }
  try {
    holo::parse_field("z + $");
    FAIL("no throw");
  } catch (const holo::SyntaxError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("eval_field per kind") {
  Field lin = Field::polynomial(CPoly{0, cplx(-1, 1)});
  CHECK(holo::eval_field(lin, 1.0) == cplx(-1, 1));

  Field c = holo::parse_field("conj(z^2)");
  cplx z(0.3, -1.7);
  cplx v = holo::eval_field(c, z);
  CHECK(std::abs(v.real() - (0.09 - 1.7 * 1.7)) < 1e-14);
  CHECK(std::abs(v.imag() - (-2.0 * 0.3 * -1.7)) < 1e-14);

  Field m = Field::moebius(I, 1.0, 1.0, 0.0);
  CHECK(std::abs(holo::eval_field(m, 2.0) - cplx(0.5, 1.0)) < 1e-15);

  CHECK_THROWS_AS(holo::eval_field(m, 1e-12), holo::PoleEvaluation);
  Field inv = holo::parse_field("1/(z-1)");
  try {
    holo::eval_field(inv, 1.0 + 1e-12);
    FAIL("no throw");
  } catch (const holo::PoleEvaluation& e) {
    CHECK(std::abs(e.pole() - 1.0) < 1e-12);
  }
  Field es = holo::parse_field("essential(1;2)");
  cplx w(0.4, 0.9);
  CHECK(std::abs(holo::eval_field(es, w) - w * w * std::exp(1.0 / w)) < 1e-14);
}

TEST_CASE("to_planar matches the displayed expansions") {
  const cplx A0(0.2, -0.5), A1(1.1, 0.3), A2(-0.4, 0.7);
  auto e = holo::to_planar(Field::polynomial(CPoly{A0, A1, A2}));
  const double a0 = A0.real(), b0 = A0.imag(), a1 = A1.real(), b1 = A1.imag(), a2 = A2.real(),
               b2 = A2.imag();
  holo::BiPoly u(2), v(2);
  u.add(0, 0, a0); u.add(1, 0, a1); u.add(0, 1, -b1);
  u.add(2, 0, a2); u.add(0, 2, -a2); u.add(1, 1, -2 * b2);
  v.add(0, 0, b0); v.add(1, 0, b1); v.add(0, 1, a1);
  v.add(2, 0, b2); v.add(0, 2, -b2); v.add(1, 1, 2 * a2);
  CHECK(e.u.approx_equal(u, 1e-15));
  CHECK(e.v.approx_equal(v, 1e-15));

  auto q = holo::to_planar(Field::polynomial(CPoly::monomial(1.0, 5)));
  holo::BiPoly u5(5), v5(5);
  u5.add(5, 0, 1); u5.add(3, 2, -10); u5.add(1, 4, 5);
  v5.add(4, 1, 5); v5.add(2, 3, -10); v5.add(0, 5, 1);
  CHECK(q.u.approx_equal(u5, 0.0));
  CHECK(q.v.approx_equal(v5, 0.0));

  auto c = holo::to_planar(holo::parse_field("conj(z^2)"));
  holo::BiPoly uc(2), vc(2);
  uc.add(2, 0, 1); uc.add(0, 2, -1);
  vc.add(1, 1, -2);
  CHECK(c.u.approx_equal(uc, 0.0));
  CHECK(c.v.approx_equal(vc, 0.0));

  CHECK_THROWS_AS(holo::to_planar(holo::parse_field("1/z")), holo::Error);
}

TEST_CASE("property: print/parse round trip is exact") {
  oracle::Gen g(99);
  for (int t = 0; t < 100; ++t) {
    int n = g.integer(1, 8);
    std::vector<cplx> c(n + 1);
    for (auto& a : c) a = cplx(g.uniform(-5, 5), g.uniform(-5, 5)) * std::pow(10.0, g.integer(-6, 6));
    CPoly p(c);
    Field fields[] = {Field::polynomial(p), Field::inverse(p), Field::conjugate(p),
                      Field::moebius(c[0], c[1] + 1.0, cplx(0.3, 1.0) * c[0], c[1])};
    for (const Field& f : fields) {
      Field back = holo::parse_field(holo::print_field(f));
      REQUIRE(back.kind() == f.kind());
      if (f.has_poly()) {
        CHECK(back.poly() == f.poly());
      } else {
        CHECK(back.moebius_params().A == f.moebius_params().A);
        CHECK(back.moebius_params().D == f.moebius_params().D);
      }
    }
  }
}

TEST_CASE("property: planar expansion agrees with complex evaluation") {
  oracle::Gen g(7);
  for (int t = 0; t < 30; ++t) {
    int n = g.integer(1, 7);
    std::vector<cplx> c(n + 1);
    for (auto& a : c) a = g.in_disk(2.0);
    c.back() += 0.5;
    Field f = Field::polynomial(CPoly(c));
    auto e = holo::to_planar(f);
    for (int k = 0; k < 100; ++k) {
      cplx z = g.in_disk(10.0);
      cplx w = holo::eval_field(f, z);
      double tol = 1e-12 * (1.0 + std::pow(std::abs(z), n)) * 10.0;
      CHECK(std::abs(e.u(z.real(), z.imag()) - w.real()) < tol);
      CHECK(std::abs(e.v(z.real(), z.imag()) - w.imag()) < tol);
    }
  }
}

TEST_CASE("property: inverse field times generator is one") {
  oracle::Gen g(17);
  for (int t = 0; t < 30; ++t) {
    int n = g.integer(1, 5);
    auto rs = g.separated(n, 2.0, 0.2);
    CPoly p = CPoly::from_roots(g.in_disk() + 0.6, rs);
    Field f = Field::inverse(p);
    for (int k = 0; k < 20; ++k) {
      cplx z = g.in_box(3.0);
      bool far = true;
      for (cplx r : rs) far = far && std::abs(z - r) > 1e-3;
      if (!far) continue;
      CHECK(std::abs(holo::eval_field(f, z) * p(z) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("property: polynomial fields satisfy Cauchy-Riemann") {
  oracle::Gen g(23);
  const double h = 1e-5;
  for (int t = 0; t < 50; ++t) {
    std::vector<cplx> c(g.integer(2, 5));
    for (auto& a : c) a = g.in_disk();
    c.back() += 0.5;
    auto e = holo::to_planar(Field::polynomial(CPoly(c)));
    cplx z = g.in_disk(1.5);
    double x = z.real(), y = z.imag();
    double ux = (e.u(x + h, y) - e.u(x - h, y)) / (2 * h);
    double uy = (e.u(x, y + h) - e.u(x, y - h)) / (2 * h);
    double vx = (e.v(x + h, y) - e.v(x - h, y)) / (2 * h);
    double vy = (e.v(x, y + h) - e.v(x, y - h)) / (2 * h);
    CHECK(std::abs(ux - vy) < 1e-6);
    CHECK(std::abs(uy + vx) < 1e-6);
  }
}
