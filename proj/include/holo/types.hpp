#pragma once

#include <array>
#include <complex>

namespace holo {

using cplx = std::complex<double>;
using Mat2 = std::array<std::array<double, 2>, 2>;

inline constexpr int kMaxDegree = 16;

// Numerical tolerances shared across modules.
namespace tol {
inline constexpr double root = 1e-12;
inline constexpr double cluster = 1e-7;
inline constexpr double order = 1e-6;
inline constexpr double center = 1e-9;
inline constexpr double band = 1e-6;
inline constexpr double pole = 1e-9;
inline constexpr double zero = 1e-12;
inline constexpr double conv = 1e-8;
inline constexpr double close = 1e-6;
inline constexpr double line = 1e-6;
inline constexpr double residue = 1e-9;
inline constexpr double psi_equal = 1e-8;
}  // namespace tol

namespace limits {
inline constexpr double eps_sep_infinity = 1e-4;
inline constexpr double eps_sep_finite = 1e-3;
inline constexpr double t_cap = 1e3;
inline constexpr double arclength_cap = 1e4;
inline constexpr double r_escape = 1e6;
}  // namespace limits

inline double pole_radius(cplx z) { return tol::pole * (1.0 + std::abs(z)); }

}  // namespace holo
