#pragma once

// Dormand-Prince 5(4) with the standard 4th-order continuous extension.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace holo::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct Options {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h0 = 0.0;  // 0 selects an initial step automatically
  double hmax = std::numeric_limits<double>::infinity();
  long max_steps = 2000000;
  std::size_t control_dims = 0;  // leading components used for error control (0: all)
};

template <std::size_t N>
struct Step {
  double t0 = 0, t1 = 0;
  State<N> y0{}, y1{};
  std::array<State<N>, 5> rc{};

  State<N> at(double t) const {
    const double h = t1 - t0;
    const double s = h == 0.0 ? 0.0 : (t - t0) / h, s1 = 1.0 - s;
    State<N> y;
    for (std::size_t i = 0; i < N; ++i)
      y[i] = rc[0][i] + s * (rc[1][i] + s1 * (rc[2][i] + s * (rc[3][i] + s1 * rc[4][i])));
    return y;
  }
};

enum class Control { Continue, Stop };

template <std::size_t N>
struct Result {
  double t = 0;
  State<N> y{};
  long steps = 0;
  bool stopped = false;  // observer requested stop
  bool failed = false;   // step size underflow or step budget exhausted
};

// Error of component i is weighed against atol + rtol * mag(y, i).
struct AbsMagnitude {
  template <std::size_t N>
  double operator()(const State<N>& y, std::size_t i) const {
    return std::abs(y[i]);
  }
};

template <std::size_t N, class Rhs, class Obs, class Mag = AbsMagnitude>
Result<N> dopri5(Rhs&& f, double t0, State<N> y0, double t_end, const Options& o, Obs&& obs, Mag&& mag = {}) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                   a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                   d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                   d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  Result<N> res;
  res.t = t0;
  res.y = y0;
  const double dir = t_end >= t0 ? 1.0 : -1.0;
  double t = t0;
  State<N> y = y0, k1 = f(t, y), k2, k3, k4, k5, k6, k7, tmp, ynew;

  const std::size_t M = o.control_dims == 0 ? N : std::min(o.control_dims, N);
  auto err_norm = [&](const State<N>& a, const State<N>& b, const State<N>& e) {
    double s = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
      double sc = o.atol + o.rtol * std::max(mag(a, i), mag(b, i));
      s += (e[i] / sc) * (e[i] / sc);
    }
    return std::sqrt(s / M);
  };

  double h = o.h0;
  if (h <= 0.0) {
    double d0 = 0, d1n = 0;
    for (std::size_t i = 0; i < M; ++i) {
      double sc = o.atol + o.rtol * mag(y, i);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1n += (k1[i] / sc) * (k1[i] / sc);
    }
    d0 = std::sqrt(d0 / M);
    d1n = std::sqrt(d1n / M);
    h = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
  }
  h = std::min({h, std::abs(t_end - t0), o.hmax});
  if (t_end == t0) return res;

  double err_old = 1e-4;
  bool last_rejected = false;
  while (dir * (t_end - t) > 0.0) {
    if (res.steps >= o.max_steps) {
      res.failed = true;
      break;
    }
    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      res.failed = true;
      break;
    }
    bool final_step = false;
    if (h >= std::abs(t_end - t)) {
      h = std::abs(t_end - t);
      final_step = true;
    }
    const double hs = dir * h;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + hs * a21 * k1[i];
    k2 = f(t + c2 * hs, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    k3 = f(t + c3 * hs, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = f(t + c4 * hs, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = f(t + c5 * hs, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    k6 = f(t + hs, tmp);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    const double tnew = final_step ? t_end : t + hs;
    k7 = f(tnew, ynew);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    double err = err_norm(y, ynew, tmp);
    bool finite = std::isfinite(err);
    for (std::size_t i = 0; i < N && finite; ++i) finite = std::isfinite(ynew[i]);
    if (!finite) {
      h *= 0.2;
      last_rejected = true;
      continue;
    }
    if (err <= 1.0) {
      ++res.steps;
      Step<N> st;
      st.t0 = t;
      st.t1 = tnew;
      st.y0 = y;
      st.y1 = ynew;
      for (std::size_t i = 0; i < N; ++i) {
        double ydiff = ynew[i] - y[i];
        double bspl = hs * k1[i] - ydiff;
        st.rc[0][i] = y[i];
        st.rc[1][i] = ydiff;
        st.rc[2][i] = bspl;
        st.rc[3][i] = ydiff - hs * k7[i] - bspl;
        st.rc[4][i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                            d7 * k7[i]);
      }
      t = tnew;
      y = ynew;
      k1 = k7;
      res.t = t;
      res.y = y;
      if (obs(st) == Control::Stop) {
        res.stopped = true;
        break;
      }
      // PI step control
      double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5) * std::pow(err_old, 0.4 / 5);
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
      err_old = std::max(err, 1e-4);
      h = std::min(h * fac, o.hmax);
      last_rejected = false;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      last_rejected = true;
    }
  }
  return res;
}

template <std::size_t N, class Rhs>
Result<N> dopri5(Rhs&& f, double t0, State<N> y0, double t_end, const Options& o) {
  return dopri5<N>(f, t0, y0, t_end, o, [](const Step<N>&) { return Control::Continue; });
}

}  // namespace holo::ode
