#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's numerical routines.

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

inline cplx horner(const std::vector<cplx>& c, cplx z) {
  cplx acc{};
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

// Coefficients of lead * prod (z - r), ascending.
inline std::vector<cplx> expand(cplx lead, const std::vector<cplx>& roots) {
  std::vector<cplx> c{lead};
  for (cplx r : roots) {
    std::vector<cplx> n(c.size() + 1);
    for (std::size_t k = 0; k < c.size(); ++k) {
      n[k + 1] += c[k];
      n[k] -= r * c[k];
    }
    c = n;
  }
  return c;
}

// (1/2 pi i) \oint g dz on the circle |z - z0| = rho, trapezoid rule.
inline cplx contour(const std::function<cplx(cplx)>& g, cplx z0, double rho, int nodes = 4096) {
  cplx acc{};
  for (int k = 0; k < nodes; ++k) {
    double t = 2.0 * M_PI * k / nodes;
    cplx e = std::polar(1.0, t);
    acc += g(z0 + rho * e) * rho * e;  // dz = i rho e dt, divided by 2 pi i
  }
  return acc / static_cast<double>(nodes);
}

// Richardson-free RK4 with a fixed small step; used as a trajectory oracle.
inline cplx rk4(const std::function<cplx(cplx)>& f, cplx z, double t, int steps) {
  double h = t / steps;
  for (int i = 0; i < steps; ++i) {
    cplx k1 = f(z), k2 = f(z + 0.5 * h * k1), k3 = f(z + 0.5 * h * k2), k4 = f(z + h * k3);
    z += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return z;
}

inline double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Hand-rolled generators for property tests.
class Gen {
 public:
  explicit Gen(unsigned long long seed) : rng_(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
  cplx in_disk(double r = 1.0) {
    while (true) {
      cplx z(uniform(-r, r), uniform(-r, r));
      if (std::abs(z) <= r) return z;
    }
  }
  cplx in_box(double r) { return {uniform(-r, r), uniform(-r, r)}; }
  // roots pairwise at least `sep` apart inside a box
  std::vector<cplx> separated(int n, double box, double sep) {
    std::vector<cplx> out;
    while (static_cast<int>(out.size()) < n) {
      cplx z = in_box(box);
      bool ok = true;
      for (cplx w : out) ok = ok && std::abs(z - w) >= sep;
      if (ok) out.push_back(z);
    }
    return out;
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle
