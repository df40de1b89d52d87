#pragma once

#include <string>
#include <vector>

#include "holo/bipoly.hpp"
#include "holo/cpoly.hpp"

namespace holo {

enum class FieldKind { Polynomial, InversePolynomial, ConjugatePolynomial, Moebius, EssentialDemo };

const char* kind_name(FieldKind k);

struct MoebiusParams {
  cplx A, B, C, D;
  cplx det() const { return A * D - B * C; }
};

// z^m exp(1/z^n)
struct EssentialParams {
  int n = 1;
  int m = 2;
};

class Field {
 public:
  static Field polynomial(CPoly p);
  static Field inverse(CPoly p);
  static Field conjugate(CPoly p);
  static Field moebius(cplx A, cplx B, cplx C, cplx D);
  static Field essential(int n, int m);

  FieldKind kind() const { return kind_; }
  bool has_poly() const;
  const CPoly& poly() const;
  const MoebiusParams& moebius_params() const;
  const EssentialParams& essential_params() const;
  // Points where the field is undefined (poles, essential singularity).
  const std::vector<cplx>& singular_points() const { return singular_; }

  cplx operator()(cplx z) const;

 private:
  FieldKind kind_ = FieldKind::Polynomial;
  CPoly poly_;
  MoebiusParams mob_{};
  EssentialParams ess_{};
  std::vector<cplx> singular_;
};

cplx eval_field(const Field& f, cplx z);

// Same as eval_field without the pole guard (caller guarantees distance).
cplx eval_field_unchecked(const Field& f, cplx z);

struct PlanarExpansion {
  BiPoly u;
  BiPoly v;
};
PlanarExpansion to_planar(const Field& f);
// u + i v for a polynomial with the given coefficients
PlanarExpansion planar_of(const CPoly& p);

Field parse_field(const std::string& text);
std::string print_field(const Field& f);
std::string format_complex(cplx c);

}  // namespace holo
