#pragma once

#include <span>
#include <vector>

#include "holo/types.hpp"

namespace holo {

// Complex polynomial A_0 + A_1 z + ... + A_n z^n, ascending storage.
// Exact trailing zeros are stripped on construction; the zero polynomial
// has no coefficients and degree -1.
class CPoly {
 public:
  CPoly() = default;
  explicit CPoly(std::vector<cplx> coeffs);
  CPoly(std::initializer_list<cplx> coeffs);

  static CPoly constant(cplx c);
  static CPoly monomial(cplx c, int k);
  // lead * prod (z - r)
  static CPoly from_roots(cplx lead, std::span<const cplx> roots);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<cplx>& coeffs() const { return c_; }
  cplx coeff(int k) const;
  cplx leading() const { return c_.empty() ? cplx{} : c_.back(); }
  double max_abs_coeff() const;

  cplx operator()(cplx z) const;
  CPoly derivative() const;
  CPoly antiderivative() const;
  // q(w) = p(w + c)
  CPoly shifted(cplx c) const;
  // Taylor coefficients p^(k)(z0)/k!, k = 0..deg
  std::vector<cplx> taylor(cplx z0) const;

  CPoly operator-() const;
  friend CPoly operator+(const CPoly& a, const CPoly& b);
  friend CPoly operator-(const CPoly& a, const CPoly& b);
  friend CPoly operator*(const CPoly& a, const CPoly& b);
  friend CPoly operator*(cplx s, const CPoly& a);
  CPoly pow(int k) const;

  friend bool operator==(const CPoly& a, const CPoly& b) { return a.c_ == b.c_; }

 private:
  void strip();
  std::vector<cplx> c_;
};

struct Root {
  cplx z;
  int mult = 1;
};
using RootSet = std::vector<Root>;

// All roots with multiplicity (Aberth-Ehrlich + cluster confirmation).
RootSet roots(const CPoly& p);

// p(z0), p'(z0), ..., p^(upto)(z0)
std::vector<cplx> eval_derivs(const CPoly& p, cplx z0, int upto);

// Order of the zero of p at z0 judged by the relative derivative test.
int zero_order(const CPoly& p, cplx z0);

struct ResidueResult {
  cplx value;
  double scale = 0.0;  // magnitude of the terms that were summed
  bool is_zero() const;
};

// res(1/p, z0) for a root of the given multiplicity, by series inversion.
cplx residue_inv(const CPoly& p, cplx z0, int order);
ResidueResult residue_inv_detail(const CPoly& p, cplx z0, int order);

// Laurent coefficients of 1/p at a root of multiplicity m:
// result[k-1] multiplies (z - z0)^{-k}, k = 1..m.
std::vector<cplx> principal_part_inv(const CPoly& p, cplx z0, int order);

struct HarmonicPair {
  int k = 0;
  // coefficients over x^k, x^{k-1} y, ..., y^k
  std::vector<long long> p_row;
  std::vector<long long> q_row;
};
HarmonicPair harmonic_pair(int k);

struct PFTerm {
  cplx coef;
  cplx pole;
  int power = 1;
};
std::vector<PFTerm> partial_fractions_inv(const CPoly& p);
std::vector<PFTerm> partial_fractions_inv(const CPoly& p, const RootSet& rs);

// Power series 1/(c_0 + c_1 w + ...) to n terms; requires c_0 != 0.
std::vector<cplx> series_reciprocal(std::span<const cplx> c, int n);

}  // namespace holo
