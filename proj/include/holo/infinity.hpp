#pragma once

#include <string>
#include <vector>

#include "holo/bipoly.hpp"
#include "holo/field.hpp"

namespace holo {

enum class Chart { U1, U2, V1, V2 };
const char* chart_name(Chart c);

// s_poly, w_poly are polynomials in (s, w); w = 0 is the equator.
struct ChartSystem {
  Chart chart = Chart::U1;
  int degree = 0;
  BiPoly s_poly;
  BiPoly w_poly;
};

ChartSystem compactify(const Field& f, Chart chart);

enum class InfKind { Saddle, NodeRepelling, NodeAttracting };
const char* inf_kind_name(InfKind k);

struct InfinityPoint {
  Chart chart = Chart::U1;
  double s = 0;
  double angle = 0;  // direction in [0, 2 pi)
  bool antipode_linked = false;
  InfKind kind = InfKind::Saddle;
  Mat2 jac{};

  double trace() const { return jac[0][0] + jac[1][1]; }
  double det() const { return jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0]; }
  // orbits in the disk interior reach this point in forward time along the transverse direction
  bool arrives() const { return jac[1][1] < 0; }
};

// Sorted by angle.
std::vector<InfinityPoint> infinite_equilibria(const Field& f);

enum class InfinityCase { A, B, C, D };

// Local conformal model near infinity for f = P/Q with deg P = n, deg Q = m:
//   A: (1/z)^k + c (1/z)^(2k+1), k = m - n   (n <= m)
//   B: (a_n / b_m) z                         (n = m + 1)
//   C: z^2                                   (n = m + 2)
//   D: z^k, k = n - m                        (n > m + 2)
struct InfinityModel {
  InfinityCase kind = InfinityCase::A;
  int n = 0, m = 0;
  int exponent = 0;
  cplx coef;  // c for case A, a_n / b_m for case B, 1 otherwise
  bool flagged = false;
  std::string note;
};
InfinityModel infinity_local_model(const Field& f);

double chart_angle(Chart c, double s);

}  // namespace holo
