#pragma once

#include <span>
#include <string>
#include <vector>

#include "holo/field.hpp"

namespace holo {

enum class EqKind {
  Center,
  FocusRepelling,
  FocusAttracting,
  NodeRepelling,
  NodeAttracting,
  MultipleElliptic,
  Pole,
  SaddleConjugate,
};

const char* eq_kind_name(EqKind k);
// Short code used in signatures: C, Fr, Fa, Nr, Na, M<n>, P<n>, S<n>.
std::string eq_code(EqKind k, int order);

struct Equilibrium {
  cplx z;
  int order = 1;
  bool is_pole = false;
  cplx eig;  // derivative of the field (generator derivative for conjugate fields)
  cplx res;  // res(1/f, z) for equilibria
  bool res_zero = false;
  EqKind kind = EqKind::Center;
  int sectors = 0;
  bool band = false;  // ratio test fell between tau_center and 1e-6

  // +1 repelling, -1 attracting, 0 otherwise
  int stability() const;
};

EqKind classify_simple(cplx eig, bool* band = nullptr);
std::vector<Equilibrium> classify_equilibria(const Field& f);

Mat2 jacobian(const Field& f, cplx z0);

enum class NormalCase { Regular, Linear, MultipleResidueNonzero, MultipleResidueZero, PoleCase };
const char* normal_case_name(NormalCase c);

struct NormalForm {
  NormalCase kind = NormalCase::Regular;
  int n = 0;
  cplx gamma;        // MultipleResidueNonzero
  cplx linear_coef;  // Linear
  int pole_order = 0;
};
NormalForm normal_form(const Field& f, cplx z0);

struct LyapunovReport {
  std::vector<double> V;
  std::vector<double> est_error;
  std::string method;
};
LyapunovReport lyapunov_constants(const Field& f, cplx z0, int k, std::span<const double> rho_grid,
                                  double rtol = 1e-12);

// alpha + beta x + gamma y = 0
struct Line {
  double alpha = 0, beta = 0, gamma = 0;
};
Line bendixson_line(const Field& f);

}  // namespace holo
