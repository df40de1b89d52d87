#pragma once

#include <span>
#include <vector>

#include "holo/field.hpp"

namespace holo {

// G = sum coef*log(z - pole) + sum coef*(-1/(m-1))/(z - pole)^(m-1) + poly_part
//     (+ exp(-1/z^n)/n for the essential demo fields); H = Im G.
struct LogTerm {
  cplx coef;
  cplx pole;
};
struct PowerTerm {
  cplx coef;
  cplx pole;
  int m = 2;
};

struct FirstIntegral {
  std::vector<LogTerm> log_terms;
  std::vector<PowerTerm> power_terms;
  CPoly poly_part;
  int essential_n = 0;  // nonzero for the essential demo fields
  FieldKind source = FieldKind::Polynomial;

  cplx G(cplx z) const;   // principal branch of every log
  cplx dG(cplx z) const;  // analytic derivative
  double H(cplx z) const { return G(z).imag(); }
};

FirstIntegral first_integral(const Field& f);

// H along the path with every log argument unwrapped; BranchJump when a
// single step turns some log argument by pi/2 or more.
std::vector<double> eval_H(const FirstIntegral& fi, std::span<const cplx> path);

struct PotentialPair {
  CPoly F;  // F' = p
  double phi(double x, double y) const { return F(cplx(x, y)).real(); }
  double psi(double x, double y) const { return F(cplx(x, y)).imag(); }
};
PotentialPair potential(const Field& f);

// Integral of dz / f(z) along the polyline, adaptive Gauss-Kronrod per segment.
cplx travel_time(const Field& f, std::span<const cplx> path);

// Zeros and poles of f (used for path guards).
std::vector<cplx> critical_points(const Field& f);

}  // namespace holo
