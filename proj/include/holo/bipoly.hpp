#pragma once

#include <string>
#include <vector>

namespace holo {

// Real polynomial in two variables, dense storage c[i][j] for a^i b^j.
class BiPoly {
 public:
  BiPoly() = default;
  explicit BiPoly(int degree);

  int degree() const { return deg_; }
  double coeff(int i, int j) const;
  void add(int i, int j, double v);

  double operator()(double a, double b) const;
  BiPoly d_first() const;   // d/da
  BiPoly d_second() const;  // d/db

  friend BiPoly operator+(const BiPoly& x, const BiPoly& y);
  friend BiPoly operator*(double s, const BiPoly& x);
  friend BiPoly operator*(const BiPoly& x, const BiPoly& y);

  bool approx_equal(const BiPoly& o, double tol) const;
  std::string to_string(const char* a = "x", const char* b = "y") const;

 private:
  int deg_ = -1;
  std::vector<std::vector<double>> c_;
};

}  // namespace holo
