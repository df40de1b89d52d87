#include "holo/bipoly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace holo {

BiPoly::BiPoly(int degree) : deg_(degree) {
  c_.assign(static_cast<std::size_t>(degree + 1), std::vector<double>(degree + 1, 0.0));
}

double BiPoly::coeff(int i, int j) const {
  if (i < 0 || j < 0 || i > deg_ || j > deg_) return 0.0;
  return c_[i][j];
}

void BiPoly::add(int i, int j, double v) {
  int need = std::max(i, j);
  if (need > deg_) {
    BiPoly g(need);
    for (int a = 0; a <= deg_; ++a)
      for (int b = 0; b <= deg_; ++b) g.c_[a][b] = c_[a][b];
    *this = std::move(g);
  }
  c_[i][j] += v;
}

double BiPoly::operator()(double a, double b) const {
  double acc = 0.0;
  for (int i = deg_; i >= 0; --i) {
    double row = 0.0;
    for (int j = deg_; j >= 0; --j) row = row * b + c_[i][j];
    acc = acc * a + row;
  }
  return acc;
}

BiPoly BiPoly::d_first() const {
  BiPoly r(std::max(deg_, 0));
  for (int i = 1; i <= deg_; ++i)
    for (int j = 0; j <= deg_; ++j) r.c_[i - 1][j] += i * c_[i][j];
  return r;
}

BiPoly BiPoly::d_second() const {
  BiPoly r(std::max(deg_, 0));
  for (int i = 0; i <= deg_; ++i)
    for (int j = 1; j <= deg_; ++j) r.c_[i][j - 1] += j * c_[i][j];
  return r;
}

BiPoly operator+(const BiPoly& x, const BiPoly& y) {
  BiPoly r(std::max(x.deg_, y.deg_));
  for (int i = 0; i <= x.deg_; ++i)
    for (int j = 0; j <= x.deg_; ++j) r.c_[i][j] += x.c_[i][j];
  for (int i = 0; i <= y.deg_; ++i)
    for (int j = 0; j <= y.deg_; ++j) r.c_[i][j] += y.c_[i][j];
  return r;
}

BiPoly operator*(double s, const BiPoly& x) {
  BiPoly r = x;
  for (auto& row : r.c_)
    for (double& v : row) v *= s;
  return r;
}

BiPoly operator*(const BiPoly& x, const BiPoly& y) {
  if (x.deg_ < 0 || y.deg_ < 0) return {};
  BiPoly r(x.deg_ + y.deg_);
  for (int i = 0; i <= x.deg_; ++i)
    for (int j = 0; j <= x.deg_; ++j) {
      if (x.c_[i][j] == 0.0) continue;
      for (int k = 0; k <= y.deg_; ++k)
        for (int l = 0; l <= y.deg_; ++l) r.c_[i + k][j + l] += x.c_[i][j] * y.c_[k][l];
    }
  return r;
}

bool BiPoly::approx_equal(const BiPoly& o, double tol) const {
  int d = std::max(deg_, o.deg_);
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= d; ++j)
      if (std::abs(coeff(i, j) - o.coeff(i, j)) > tol) return false;
  return true;
}

std::string BiPoly::to_string(const char* a, const char* b) const {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (int t = 0; t <= 2 * deg_; ++t)
    for (int i = std::min(t, deg_); i >= 0; --i) {
      int j = t - i;
      if (j > deg_) continue;
      double v = c_[i][j];
      if (v == 0.0) continue;
      os << (first ? (v < 0 ? "-" : "") : (v < 0 ? " - " : " + "));
      double av = std::abs(v);
      bool unit = av == 1.0 && (i + j) > 0;
      if (!unit) os << av;
      if (i > 0) os << (unit ? "" : "*") << a << (i > 1 ? "^" + std::to_string(i) : "");
      if (j > 0) os << ((unit && i == 0) ? "" : "*") << b << (j > 1 ? "^" + std::to_string(j) : "");
      first = false;
    }
  if (first) os << "0";
  return os.str();
}

}  // namespace holo
