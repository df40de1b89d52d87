#include "holo/flow.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

#include "holo/error.hpp"
#include "holo/ode.hpp"

namespace holo {

const char* terminal_name(Terminal t) {
  switch (t) {
    case Terminal::TimeExhausted: return "TimeExhausted";
    case Terminal::ConvergedToEquilibrium: return "ConvergedToEquilibrium";
    case Terminal::EscapedToInfinity: return "EscapedToInfinity";
    case Terminal::HitSingularity: return "HitSingularity";
    case Terminal::ClosedOrbit: return "ClosedOrbit";
  }
  return "?";
}

const char* limit_kind_name(LimitKind k) {
  switch (k) {
    case LimitKind::Equilibrium: return "equilibrium";
    case LimitKind::Infinity: return "infinity";
    case LimitKind::Singular: return "singular";
    case LimitKind::ClosedOrbit: return "closed_orbit";
    case LimitKind::Undetermined: return "undetermined";
  }
  return "?";
}

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHitRadius = 1e-6;  // relative radius at which a pole or the essential point counts as hit

double hit_radius(cplx z) { return kHitRadius * (1.0 + std::abs(z)); }

// Orbit-equivalent regular field g and the rate dt/dtau = rate(z) of physical time.
struct Regular {
  const Field* f;
  cplx g(cplx z) const {
    switch (f->kind()) {
      case FieldKind::Polynomial: return f->poly()(z);
      case FieldKind::ConjugatePolynomial:
      case FieldKind::InversePolynomial: return std::conj(f->poly()(z));
      case FieldKind::Moebius: {
        auto m = f->moebius_params();
        return (m.A * z + m.B) * std::conj(m.C * z + m.D);
      }
      case FieldKind::EssentialDemo: return eval_field_unchecked(*f, z);
    }
    return 0.0;
  }
  double rate(cplx z) const {
    switch (f->kind()) {
      case FieldKind::InversePolynomial: return std::norm(f->poly()(z));
      case FieldKind::Moebius: {
        auto m = f->moebius_params();
        return std::norm(m.C * z + m.D);
      }
      default: return 1.0;
    }
  }
  bool unit_rate() const {
    return f->kind() != FieldKind::InversePolynomial && f->kind() != FieldKind::Moebius;
  }
};

enum class Mode { Physical, Arclength };

struct RunSpec {
  Mode mode = Mode::Physical;
  int dir = 1;
  double t_max = 0;   // physical mode
  double s_max = limits::arclength_cap;
  double rtol = 1e-10, atol = 1e-12;
  int origin_eq = -1;  // arclength mode: launch point, captured only after leaving
  double arm_len = 0;
  bool closed_check = true;
};

using S3 = ode::State<3>;

template <class Fn>
double bisect(Fn&& phi, double a, double b) {
  // phi(a) < 0 <= phi(b)
  for (int i = 0; i < 80; ++i) {
    double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    (phi(m) < 0 ? a : b) = m;
  }
  return b;
}

double seg_distance(cplx a, cplx b, cplx p) {
  const cplx d = b - a;
  const double L2 = std::norm(d);
  double t = L2 > 0 ? ((p - a) * std::conj(d)).real() / L2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(a + t * d - p);
}

bool capturable(const Equilibrium& e, int dir) {
  if (e.order > 1) return true;
  if (e.kind == EqKind::SaddleConjugate || e.is_pole) return true;
  return e.stability() * dir < 0;
}

// Capture by a trapping loop: once the orbit completes a turn about an equilibrium that
// attracts in this direction, returns strictly closer across a transversal chord and
// encloses no other critical point, its limit is that equilibrium (these fields have
// no isolated periodic orbits). Shortcuts the slow spiral into weak foci.
struct SpiralTrap {
  int k = -1;
  double wind = 0.0, r_start = 0.0, r_max = 0.0;
  cplx start, last;

  int update(const FlowContext& ctx, const Regular& reg, cplx z, int dir) {
    if (ctx.field.kind() == FieldKind::EssentialDemo) return -1;
    int kn = -1;
    double dn = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < ctx.eqs.size(); ++j)
      if (double d = std::abs(z - ctx.eqs[j].z); d < dn) {
        dn = d;
        kn = static_cast<int>(j);
      }
    if (kn < 0) return -1;
    if (kn != k) {
      k = kn;
      reset(z, dn);
      return -1;
    }
    const cplx e = ctx.eqs[k].z;
    const double dw = std::arg((z - e) / (last - e));
    if (std::abs(dw) > kPi / 2) {  // too coarse to follow the winding
      reset(z, dn);
      return -1;
    }
    wind += dw;
    last = z;
    r_max = std::max(r_max, dn);
    if (std::abs(wind) < 2 * kPi) return -1;
    bool ok = capturable(ctx.eqs[k], dir) && !ctx.eqs[k].is_pole && dn < r_start;
    for (std::size_t j = 0; j < ctx.eqs.size() && ok; ++j)
      if (static_cast<int>(j) != k && std::abs(ctx.eqs[j].z - e) <= 1.01 * r_max) ok = false;
    for (cplx sp : ctx.singular)
      if (std::abs(sp - e) <= 1.01 * r_max) ok = false;
    if (ok) {
      // the chord from the new point back to the turn start must be crossed one way
      const cplx chord = start - z;
      int sign = 0;
      for (int i = 0; i <= 32 && ok; ++i) {
        const double c = (std::conj(chord) * reg.g(z + (i / 32.0) * chord)).imag();
        const int sg = (c > 0) - (c < 0);
        if (sg == 0 || (sign != 0 && sg != sign)) ok = false;
        sign = sg;
      }
    }
    reset(z, dn);
    return ok ? k : -1;
  }

  void reset(cplx z, double r) {
    wind = 0.0;
    r_start = r_max = r;
    start = last = z;
  }
};

Trajectory run(const FlowContext& ctx, cplx z0, const RunSpec& rs) {
  const Regular reg{&ctx.field};
  Trajectory tr;
  tr.points.push_back(z0);
  tr.times.push_back(0.0);

  const cplx g0 = reg.g(z0);
  if (std::abs(g0) == 0.0) {
    for (std::size_t k = 0; k < ctx.eqs.size(); ++k)
      if (std::abs(ctx.eqs[k].z - z0) <= tol::conv * (1 + std::abs(ctx.eqs[k].z))) {
        tr.terminal = ctx.eqs[k].is_pole ? Terminal::HitSingularity : Terminal::ConvergedToEquilibrium;
        tr.target = static_cast<int>(k);
      }
    return tr;
  }
  const cplx v0 = g0 * double(rs.dir);
  const double dirf = rs.dir;
  const bool arc = rs.mode == Mode::Arclength;
  SpiralTrap trap;

  auto rhs = [&](double, const S3& y) -> S3 {
    const cplx z(y[0], y[1]);
    cplx g = reg.g(z);
    double r = reg.rate(z);
    if (arc) {
      const double a = std::abs(g), w = 1.0 + std::norm(z);
      if (a == 0.0) return {0.0, 0.0, 0.0};
      g *= w / a;
      r *= w / a;
    }
    g *= dirf;
    return {g.real(), g.imag(), r};
  };

  ode::Options o;
  o.rtol = rs.rtol;
  o.atol = rs.atol;
  o.control_dims = 2;  // elapsed time rides along without steering the step size
  double tau_end;
  if (arc)
    tau_end = rs.s_max;
  else
    tau_end = reg.unit_rate() ? rs.t_max : 1e15;

  const double tau_close = tol::close * (1.0 + std::abs(z0));
  auto section = [&](cplx z) { return ((z - z0) * std::conj(v0)).real(); };
  bool section_armed = false;
  double prev_sec = 0.0;
  double prev_speed = std::abs(g0);
  bool done = false;
  const std::size_t max_points = 2000000;
  double r_inf_cap = 1.0;
  for (auto& e : ctx.eqs) r_inf_cap = std::max(r_inf_cap, 1.0 + std::abs(e.z));
  r_inf_cap *= 1e3;

  auto push = [&](cplx z, double T) {
    tr.arclength += std::abs(z - tr.points.back());
    if (dirf * T != tr.times.back()) {
      tr.points.push_back(z);
      tr.times.push_back(dirf * T);
    }
  };

  auto nearest_crit = [&](cplx z) {
    double d = std::numeric_limits<double>::infinity();
    for (auto& e : ctx.eqs) d = std::min(d, std::abs(z - e.z));
    for (cplx s : ctx.singular) d = std::min(d, std::abs(z - s));
    return d;
  };

  auto obs = [&](const ode::Step<3>& st) -> ode::Control {
    const cplx za(st.y0[0], st.y0[1]), zb(st.y1[0], st.y1[1]);
    const double dz = std::abs(zb - za);
    const double dc = std::min(nearest_crit(za), nearest_crit(zb));
    int pieces = 1;
    if (std::isfinite(dc) && dc > 0) pieces = static_cast<int>(std::ceil(dz / (0.25 * dc)));
    pieces = std::clamp(pieces, 1, 64);
    double ta = st.t0;
    for (int j = 1; j <= pieces; ++j) {
      const double tb = j == pieces ? st.t1 : st.t0 + (st.t1 - st.t0) * j / pieces;
      S3 yb = j == pieces ? st.y1 : st.at(tb);
      cplx z(yb[0], yb[1]);
      // physical time horizon for rescaled fields
      if (!arc && !reg.unit_rate() && yb[2] >= rs.t_max) {
        double tc = bisect([&](double t) { return st.at(t)[2] - rs.t_max; }, ta, tb);
        S3 yc = st.at(tc);
        push(cplx(yc[0], yc[1]), rs.t_max);
        tr.terminal = Terminal::TimeExhausted;
        done = true;
        return ode::Control::Stop;
      }
      if (std::abs(z) >= limits::r_escape) {
        double tc = bisect([&](double t) { auto y = st.at(t); return std::hypot(y[0], y[1]) - limits::r_escape; },
                           ta, tb);
        S3 yc = st.at(tc);
        cplx zc(yc[0], yc[1]);
        push(zc, yc[2]);
        tr.terminal = Terminal::EscapedToInfinity;
        tr.escape_angle = std::arg(zc);
        if (tr.escape_angle < 0) tr.escape_angle += 2 * kPi;
        done = true;
        return ode::Control::Stop;
      }
      if (rs.closed_check) {
        const double sec = section(z);
        if (section_armed && prev_sec < 0 && sec >= 0) {
          double tc = bisect([&](double t) { auto y = st.at(t); return section(cplx(y[0], y[1])); }, ta, tb);
          S3 yc = st.at(tc);
          cplx zc(yc[0], yc[1]);
          const bool aligned = (reg.g(zc) * dirf * std::conj(v0)).real() > 0;
          if (std::abs(zc - z0) < tau_close && aligned) {
            push(zc, yc[2]);
            tr.terminal = Terminal::ClosedOrbit;
            tr.period = yc[2];
            done = true;
            return ode::Control::Stop;
          }
        }
        if (sec < 0) section_armed = true;
        prev_sec = sec;
      }
      push(z, yb[2]);
      ta = tb;
    }

    const cplx z = zb;
    for (std::size_t k = 0; k < ctx.eqs.size(); ++k) {
      const Equilibrium& e = ctx.eqs[k];
      // closest approach over the step, not just its end point
      const double d = std::min(seg_distance(za, zb, e.z), std::abs(z - e.z));
      if (e.is_pole) {
        if (d < hit_radius(e.z)) {
          tr.terminal = Terminal::HitSingularity;
          tr.target = static_cast<int>(k);
          done = true;
        }
      } else if (arc) {
        const bool own = static_cast<int>(k) == rs.origin_eq;
        const bool armed = !own || tr.arclength > 0.25 * rs.arm_len;
        const double r = own ? std::min(ctx.capture[k], 0.5 * rs.arm_len) : ctx.capture[k];
        if (armed && d < r && capturable(e, rs.dir)) {
          tr.terminal = Terminal::ConvergedToEquilibrium;
          tr.target = static_cast<int>(k);
          done = true;
        }
      } else if (std::abs(z - e.z) < tol::conv * (1 + std::abs(e.z)) && std::abs(reg.g(z)) < prev_speed) {
        tr.terminal = Terminal::ConvergedToEquilibrium;
        tr.target = static_cast<int>(k);
        done = true;
      }
      if (done) return ode::Control::Stop;
    }
    if (arc) {
      if (const int k = trap.update(ctx, reg, z, rs.dir); k >= 0) {
        tr.terminal = Terminal::ConvergedToEquilibrium;
        tr.target = k;
        done = true;
        return ode::Control::Stop;
      }
    }
    // near the equator of the disk, close to an infinity point that attracts in this time direction
    if (arc && std::abs(z) > r_inf_cap) {
      const double ang = std::arg(z);
      for (std::size_t i = 0; i < ctx.inf.size(); ++i) {
        if (ctx.inf[i].arrives() != (rs.dir > 0)) continue;
        if (std::abs(std::remainder(ang - ctx.inf[i].angle, 2 * kPi)) < 1e-3) {
          tr.terminal = Terminal::EscapedToInfinity;
          tr.escape_angle = ang < 0 ? ang + 2 * kPi : ang;
          done = true;
          return ode::Control::Stop;
        }
      }
    }
    for (cplx s : ctx.singular)
      if (std::abs(z - s) < hit_radius(s)) {
        tr.terminal = Terminal::HitSingularity;
        tr.target = -1;
        done = true;
        return ode::Control::Stop;
      }
    prev_speed = std::abs(reg.g(z));
    if (tr.points.size() > max_points) {
      tr.failed = true;
      return ode::Control::Stop;
    }
    return ode::Control::Continue;
  };

  S3 y0{z0.real(), z0.imag(), 0.0};
  // Physical runs shrink both tolerances with the distance d to the nearest
  // equilibrium, so orbits keep their level of H while converging. The floor
  // stays above the rounding of z.
  const double abs_ratio = rs.atol / rs.rtol;
  if (!arc) o.atol = std::numeric_limits<double>::min();
  auto mag = [&](const S3& y, std::size_t i) {
    if (arc || i > 1) return std::abs(y[i]);
    const cplx z(y[0], y[1]);
    double d = 1.0;
    for (auto& e : ctx.eqs)
      if (!e.is_pole) d = std::min(d, std::abs(z - e.z));
    return std::min(std::abs(y[i]), d) + abs_ratio * d + 1e-15 / rs.rtol * std::abs(z);
  };
  auto res = ode::dopri5<3>(rhs, 0.0, y0, tau_end, o, obs, mag);
  if (res.failed) tr.failed = true;
  if (!done) {
    tr.terminal = Terminal::TimeExhausted;
    const cplx ze = tr.points.back();
    if (rs.closed_check && section_armed && std::abs(ze - z0) < tau_close &&
        (reg.g(ze) * dirf * std::conj(v0)).real() > 0) {
      tr.terminal = Terminal::ClosedOrbit;
      tr.period = std::abs(tr.times.back());
    }
  }
  return tr;
}

// Separatrix continuation along the level set of a first integral. The level
// is pinned by residual r0 = H(z0) - level, so the curve cannot drift onto a
// neighbouring orbit; direction follows the field.
double nearest_crit_of(const FlowContext& ctx, cplx p) {
  double d = std::numeric_limits<double>::infinity();
  for (auto& e : ctx.eqs) d = std::min(d, std::abs(p - e.z));
  return d;
}

Trajectory run_level(const FlowContext& ctx, const LevelFunction& h, cplx z0, double r0, const RunSpec& rs) {
  const Regular reg{&ctx.field};
  const double dirf = rs.dir;
  Trajectory tr;
  auto tangent = [&](cplx grad) { return dirf * cplx(0, -1) * grad / std::abs(grad); };
  // Newton projection onto the level; once rounding stalls the correction,
  // a remaining offset below `slack` is accepted
  auto settle = [&](cplx& z, double& r, double slack) {
    double last = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 20; ++it) {
      const cplx g = h.grad(z);
      if (std::abs(g) == 0.0) return false;
      const cplx corr = r * g / std::norm(g);
      const double c = std::abs(corr);
      if (c < 1e-13 * (1 + std::abs(z))) return true;
      if (c > 0.5 * last) return c < slack;
      last = c;
      const cplx zc = z - corr;
      r += h.delta(z, zc);
      z = zc;
    }
    return last < slack;
  };
  cplx z = z0;
  double res = r0;
  if (!settle(z, res, 1e-3 * std::min(nearest_crit_of(ctx, z0), 1 + std::abs(z0)))) {
    tr.points.push_back(z0);
    tr.times.push_back(0.0);
    tr.failed = true;
    return tr;
  }
  tr.points.push_back(z);
  tr.times.push_back(0.0);

  auto nearest_crit = [&](cplx p) { return nearest_crit_of(ctx, p); };
  double r_inf_cap = 1.0;
  for (auto& e : ctx.eqs) r_inf_cap = std::max(r_inf_cap, 1.0 + std::abs(e.z));
  r_inf_cap *= 1e3;

  cplx t = tangent(h.grad(z));
  double hstep = 1e-2 * std::min(nearest_crit(z), 1 + std::abs(z));
  double T = 0.0, disk_len = 0.0;
  const std::size_t max_points = 2000000;
  SpiralTrap trap;
  while (true) {
    const double dc = nearest_crit(z);
    const double hmax = std::min(0.1 * dc, 0.1 * (1 + std::abs(z)));
    double step = std::min(hstep, hmax);
    cplx zn, tn;
    double rn = 0.0;
    bool accepted = false;
    while (!accepted) {
      if (step < 1e-15 * (1 + std::abs(z))) {
        tr.failed = true;
        tr.terminal = Terminal::TimeExhausted;
        return tr;
      }
      const cplx gm = h.grad(z + 0.5 * step * t);
      if (std::abs(gm) == 0.0) {
        step *= 0.5;
        continue;
      }
      zn = z + step * tangent(gm);
      rn = res + h.delta(z, zn);
      const bool ok = settle(zn, rn, 1e-4 * step);
      const cplx gn = h.grad(zn);
      if (!ok || std::abs(gn) == 0.0) {
        step *= 0.5;
        continue;
      }
      tn = tangent(gn);
      const double turn = std::abs(std::arg(tn / t));
      if (turn > 0.15) {
        step *= 0.5;
        continue;
      }
      accepted = true;
      hstep = turn < 0.03 ? 1.5 * step : step;
    }
    const cplx za = z;
    const cplx zm = 0.5 * (za + zn);
    const double ds = std::abs(zn - za);
    T += ds * reg.rate(zm) / std::abs(reg.g(zm));
    disk_len += ds / (1.0 + std::norm(zm));
    tr.arclength += ds;
    z = zn;
    t = tn;
    res = rn;
    tr.points.push_back(z);
    tr.times.push_back(dirf * T);

    if (std::abs(z) >= limits::r_escape) {
      tr.terminal = Terminal::EscapedToInfinity;
      tr.escape_angle = std::arg(z) < 0 ? std::arg(z) + 2 * kPi : std::arg(z);
      return tr;
    }
    for (std::size_t k = 0; k < ctx.eqs.size(); ++k) {
      const Equilibrium& e = ctx.eqs[k];
      const double d = std::min(seg_distance(za, z, e.z), std::abs(z - e.z));
      const bool own = static_cast<int>(k) == rs.origin_eq;
      const bool armed = !own || tr.arclength > 0.25 * rs.arm_len;
      const double r = own ? std::min(ctx.capture[k], 0.5 * rs.arm_len) : ctx.capture[k];
      if (armed && d < r && capturable(e, rs.dir)) {
        tr.terminal = e.is_pole ? Terminal::HitSingularity : Terminal::ConvergedToEquilibrium;
        tr.target = static_cast<int>(k);
        return tr;
      }
    }
    if (const int k = trap.update(ctx, reg, z, rs.dir); k >= 0) {
      tr.terminal = Terminal::ConvergedToEquilibrium;
      tr.target = k;
      return tr;
    }
    if (std::abs(z) > r_inf_cap) {
      const double ang = std::arg(z);
      for (const auto& p : ctx.inf) {
        if (p.arrives() != (rs.dir > 0)) continue;
        if (std::abs(std::remainder(ang - p.angle, 2 * kPi)) < 1e-3) {
          tr.terminal = Terminal::EscapedToInfinity;
          tr.escape_angle = ang < 0 ? ang + 2 * kPi : ang;
          return tr;
        }
      }
    }
    if (disk_len >= rs.s_max || tr.points.size() > max_points) {
      tr.terminal = Terminal::TimeExhausted;
      tr.failed = tr.points.size() > max_points;
      return tr;
    }
  }
}

int nearest_infinity(const FlowContext& ctx, double angle, int dir) {
  int best = -1;
  double bd = 1e300;
  for (int pass = 0; pass < 2 && best < 0; ++pass)
    for (std::size_t i = 0; i < ctx.inf.size(); ++i) {
      if (pass == 0 && ctx.inf[i].arrives() != (dir > 0)) continue;
      double d = std::abs(std::remainder(ctx.inf[i].angle - angle, 2 * kPi));
      if (d < bd) {
        bd = d;
        best = static_cast<int>(i);
      }
    }
  return best;
}

Limit limit_of(const FlowContext& ctx, const Trajectory& tr, int dir) {
  Limit l;
  l.z = tr.points.back();
  switch (tr.terminal) {
    case Terminal::ConvergedToEquilibrium:
      l.kind = LimitKind::Equilibrium;
      l.index = tr.target;
      l.z = ctx.eqs[tr.target].z;
      break;
    case Terminal::EscapedToInfinity:
      l.kind = LimitKind::Infinity;
      l.angle = tr.escape_angle;
      l.index = nearest_infinity(ctx, tr.escape_angle, dir);
      break;
    case Terminal::HitSingularity:
      l.kind = LimitKind::Singular;
      l.index = tr.target;
      if (tr.target >= 0) l.z = ctx.eqs[tr.target].z;
      break;
    case Terminal::ClosedOrbit: l.kind = LimitKind::ClosedOrbit; break;
    case Terminal::TimeExhausted: l.kind = LimitKind::Undetermined; break;
  }
  return l;
}

}  // namespace

int thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HOLO_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

double polyline_distance(const std::vector<cplx>& pts, cplx p) {
  double d = std::abs(pts.front() - p);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) d = std::min(d, seg_distance(pts[i], pts[i + 1], p));
  return d;
}

cplx chart_to_plane(Chart c, double s, double w) {
  if (c == Chart::U1 || c == Chart::V1) return cplx(1.0, s) / w;
  return cplx(s, 1.0) / w;
}

struct Launch {
  OriginKind kind;
  int origin;
  int branch;
  cplx z;
  double angle;
  int dir;      // 0: probe, integrate both ways
  bool probe;
  double arm;
  bool on_level = false;  // continue along the level set instead of integrating
  double res0 = 0.0;      // H(z) - level at the launch point
};

// First integral of a polynomial field outside all roots: with w = 1/z,
// G = -sum e_j w^(n-1+j) / (n-1+j) where sum e_j w^j = 1 / (z^-n p(z)).
// Evaluating the series avoids the cancellation of the partial fractions at large |z|.
struct FarSeries {
  std::vector<cplx> e;
  int n = 0;
  double radius = 0.0;
  cplx G(cplx z) const {
    const cplx w = 1.0 / z;
    cplx acc = 0.0;
    for (std::size_t j = e.size(); j-- > 0;) acc = acc * w + e[j] / double(n - 1 + int(j));
    return -acc * std::pow(w, n - 1);
  }
};

FarSeries far_series(const CPoly& p, const std::vector<Equilibrium>& eqs) {
  FarSeries fs;
  fs.n = p.degree();
  double rmax = 0.0;
  for (auto& e : eqs) rmax = std::max(rmax, std::abs(e.z));
  fs.radius = 4.0 * rmax + 1e-300;
  std::vector<cplx> q(fs.n + 1);
  for (int i = 0; i <= fs.n; ++i) q[i] = p.coeff(fs.n - i);
  const int terms = 48;
  fs.e.resize(terms);
  for (int j = 0; j < terms; ++j) {
    cplx acc = j == 0 ? 1.0 : 0.0;
    for (int i = 1; i <= std::min(j, fs.n); ++i) acc -= q[i] * fs.e[j - i];
    fs.e[j] = acc / q[0];
  }
  return fs;
}

LevelFunction with_far_field(LevelFunction h, const FarSeries& fs, const CPoly& p) {
  h.grad = [p](cplx z) { return cplx(0, 1) * std::conj(1.0 / p(z)); };
  h.delta = [near = h.delta, fs](cplx a, cplx b) {
    if (std::abs(a) > fs.radius && std::abs(b) > fs.radius) return (fs.G(b) - fs.G(a)).imag();
    return near(a, b);
  };
  return h;
}
}  // namespace

FlowContext make_context(const Field& f) {
  FlowContext ctx{f, classify_equilibria(f), {}, {}, {}};
  try {
    if (f.kind() == FieldKind::Polynomial || f.kind() == FieldKind::ConjugatePolynomial)
      ctx.inf = infinite_equilibria(f);
    else if (f.kind() == FieldKind::InversePolynomial)
      ctx.inf = infinite_equilibria(Field::conjugate(f.poly()));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateEquator) throw;
  }
  if (f.kind() == FieldKind::EssentialDemo) ctx.singular.push_back(0.0);
  for (std::size_t k = 0; k < ctx.eqs.size(); ++k) {
    double sep = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < ctx.eqs.size(); ++j)
      if (j != k) sep = std::min(sep, std::abs(ctx.eqs[j].z - ctx.eqs[k].z));
    ctx.capture.push_back(std::min(1e-3 * (1 + std::abs(ctx.eqs[k].z)), 0.1 * sep));
  }
  return ctx;
}

Trajectory integrate(const FlowContext& ctx, cplx z0, double t_max, int direction, IntegrateOptions o) {
  if (!(o.rtol > 0) || !(o.atol > 0)) throw Error(ErrorCode::BadStart, "tolerances must be positive");
  if (direction != 1 && direction != -1) throw Error(ErrorCode::BadStart, "direction must be +1 or -1");
  for (auto& e : ctx.eqs)
    if (e.is_pole && std::abs(z0 - e.z) <= pole_radius(e.z))
      throw Error(ErrorCode::BadStart, "start point is a pole of the field");
  for (cplx s : ctx.singular)
    if (std::abs(z0 - s) <= pole_radius(s)) throw Error(ErrorCode::BadStart, "start point is singular");
  RunSpec rs;
  rs.dir = direction;
  rs.t_max = t_max;
  rs.rtol = o.rtol;
  rs.atol = o.atol;
  return run(ctx, z0, rs);
}

Trajectory trace_orbit(const FlowContext& ctx, cplx z0, double s_max, int direction, IntegrateOptions o) {
  if (!(o.rtol > 0) || !(o.atol > 0)) throw Error(ErrorCode::BadStart, "tolerances must be positive");
  if (direction != 1 && direction != -1) throw Error(ErrorCode::BadStart, "direction must be +1 or -1");
  for (auto& e : ctx.eqs)
    if (std::abs(z0 - e.z) <= pole_radius(e.z)) throw Error(ErrorCode::BadStart, "start point is critical");
  for (cplx s : ctx.singular)
    if (std::abs(z0 - s) <= pole_radius(s)) throw Error(ErrorCode::BadStart, "start point is singular");
  RunSpec rs;
  rs.mode = Mode::Arclength;
  rs.dir = direction;
  rs.s_max = s_max;
  rs.rtol = o.rtol;
  rs.atol = o.atol;
  return run(ctx, z0, rs);
}

Trajectory integrate(const Field& f, cplx z0, double t_max, int direction, IntegrateOptions o) {
  return integrate(make_context(f), z0, t_max, direction, o);
}

Limit omega_limit(const FlowContext& ctx, const Trajectory& traj, int direction) {
  Limit l = limit_of(ctx, traj, direction);
  if (l.kind != LimitKind::Undetermined) return l;
  // time ran out: accept a clear trend
  const cplx z = traj.points.back();
  for (std::size_t k = 0; k < ctx.eqs.size(); ++k) {
    const auto& e = ctx.eqs[k];
    if (!e.is_pole && std::abs(z - e.z) < ctx.capture[k] && capturable(e, direction)) {
      l.kind = LimitKind::Equilibrium;
      l.index = static_cast<int>(k);
      l.z = e.z;
      return l;
    }
  }
  if (traj.points.size() >= 2 && std::abs(z) > 1e3 && std::abs(z) > std::abs(traj.points[traj.points.size() - 2])) {
    l.kind = LimitKind::Infinity;
    l.angle = std::arg(z) < 0 ? std::arg(z) + 2 * kPi : std::arg(z);
    l.index = nearest_infinity(ctx, l.angle, direction);
    return l;
  }
  throw Error(ErrorCode::Undetermined, "trajectory ended without a recognisable limit");
}

Limit omega_limit(const Field& f, const Trajectory& traj, int direction) {
  return omega_limit(make_context(f), traj, direction);
}

std::vector<Separatrix> trace_separatrices(const FlowContext& ctx, TraceOptions o) {
  std::vector<Launch> launches;
  const Field& f = ctx.field;

  std::optional<LevelFunction> level;
  std::optional<FirstIntegral> fi;
  if (f.kind() == FieldKind::Polynomial || f.kind() == FieldKind::Moebius) {
    fi = first_integral(f);
    level = level_function(*fi);
  } else if (f.kind() == FieldKind::ConjugatePolynomial || f.kind() == FieldKind::InversePolynomial) {
    level = level_function(potential(Field::conjugate(f.poly())));
  }
  std::optional<FarSeries> far;
  if (f.kind() == FieldKind::Polynomial && f.poly().degree() >= 2) {
    far = far_series(f.poly(), ctx.eqs);
    level = with_far_field(*level, *far, f.poly());
  }
  auto far_ok = [&](cplx z) { return far && std::abs(z) > far->radius; };

  for (std::size_t i = 0; i < ctx.inf.size(); ++i) {
    const InfinityPoint& p = ctx.inf[i];
    if (p.kind != InfKind::Saddle) continue;
    // eigenvector of the transverse eigenvalue, pointed into the disk
    double vs = p.jac[0][1], vw = p.jac[1][1] - p.jac[0][0];
    const double nv = std::hypot(vs, vw);
    vs /= nv;
    vw /= nv;
    const bool v_chart = p.chart == Chart::V1 || p.chart == Chart::V2;
    if ((vw > 0) == v_chart) {
      vs = -vs;
      vw = -vw;
    }
    // step so the transverse chart coordinate is exactly eps; a unit step
    // would put |z| past the escape radius when the eigenvector is skewed
    const double eps = limits::eps_sep_infinity;
    const double t = std::abs(vw) > 0 ? eps / std::abs(vw) : eps;
    cplx z = chart_to_plane(p.chart, p.s + t * vs, t * vw);
    launches.push_back({OriginKind::Infinity, static_cast<int>(i), 0, z, std::atan2(vw, vs),
                        p.arrives() ? -1 : 1, false, 0.0, far_ok(z), far_ok(z) ? far->G(z).imag() : 0.0});
  }

  const bool saddle_like_kind = f.kind() == FieldKind::ConjugatePolynomial ||
                                f.kind() == FieldKind::InversePolynomial || f.kind() == FieldKind::Moebius;
  for (std::size_t k = 0; k < ctx.eqs.size(); ++k) {
    const Equilibrium& e = ctx.eqs[k];
    const double eps = limits::eps_sep_finite * (1 + std::abs(e.z));
    const double rho = std::min(eps, 0.5 * (ctx.capture[k] > 0 ? 10 * ctx.capture[k] : eps));
    if (f.kind() == FieldKind::Polynomial && e.order > 1) {
      const int n = e.order;
      const cplx a = eval_derivs(f.poly(), e.z, n)[n] / std::tgamma(n + 1.0);
      const int dirs = 2 * (n - 1);
      for (int b = 0; b < dirs; ++b) {
        const double th = (-std::arg(a) + b * kPi) / (n - 1);
        const double sgn = (a * std::polar(1.0, (n - 1) * th)).real();
        launches.push_back({OriginKind::Finite, static_cast<int>(k), 2 * b, e.z + std::polar(rho, th), th,
                            sgn > 0 ? 1 : -1, false, rho});
        const double mid = th + kPi / (2 * (n - 1));
        launches.push_back({OriginKind::Finite, static_cast<int>(k), 2 * b + 1, e.z + std::polar(rho, mid), mid, 0,
                            true, rho});
      }
    } else if (saddle_like_kind && (e.kind == EqKind::SaddleConjugate || e.is_pole)) {
      int m = e.order;
      cplx K;
      if (f.kind() == FieldKind::Moebius) {
        auto mp = f.moebius_params();
        K = (mp.A * e.z + mp.B) / mp.C;
        m = 1;
      } else {
        K = std::conj(eval_derivs(f.poly(), e.z, m)[m] / std::tgamma(m + 1.0));
      }
      for (int b = 0; b < 2 * (m + 1); ++b) {
        const double th = (std::arg(K) + b * kPi) / (m + 1);
        const double sgn = (K * std::polar(1.0, -(m + 1) * th)).real();
        const cplx z = e.z + std::polar(rho, th);
        launches.push_back({OriginKind::Finite, static_cast<int>(k), b, z, th, sgn > 0 ? 1 : -1, false, rho,
                            level.has_value(), level ? level->delta(e.z, z) : 0.0});
      }
    }
  }

  std::vector<Separatrix> out(launches.size());
  auto work = [&](std::size_t idx) {
    const Launch& L = launches[idx];
    Separatrix s;
    s.origin_kind = L.kind;
    s.origin = L.origin;
    s.branch = L.branch;
    s.launch_angle = L.angle;
    s.probe = L.probe;
    Limit self;
    if (L.kind == OriginKind::Infinity) {
      self.kind = LimitKind::Infinity;
      self.index = L.origin;
      self.angle = ctx.inf[L.origin].angle;
    } else {
      self.kind = ctx.eqs[L.origin].is_pole ? LimitKind::Singular : LimitKind::Equilibrium;
      self.index = L.origin;
      self.z = ctx.eqs[L.origin].z;
    }
    RunSpec rs;
    rs.mode = Mode::Arclength;
    rs.rtol = o.rtol;
    rs.atol = o.atol;
    rs.closed_check = L.probe;
    if (L.kind == OriginKind::Finite) {
      rs.origin_eq = L.origin;
      rs.arm_len = L.arm;
    }
    auto reversed = [](Trajectory t) {
      std::reverse(t.points.begin(), t.points.end());
      std::reverse(t.times.begin(), t.times.end());
      return t;
    };
    if (L.dir == 0) {
      rs.dir = 1;
      Trajectory fw = run(ctx, L.z, rs);
      rs.dir = -1;
      Trajectory bw = run(ctx, L.z, rs);
      s.omega = limit_of(ctx, fw, 1);
      s.alpha = limit_of(ctx, bw, -1);
      Trajectory c = reversed(bw);
      c.points.insert(c.points.end(), fw.points.begin() + 1, fw.points.end());
      c.times.insert(c.times.end(), fw.times.begin() + 1, fw.times.end());
      c.arclength += fw.arclength;
      c.terminal = fw.terminal;
      c.target = fw.target;
      c.escape_angle = fw.escape_angle;
      c.failed = fw.failed || bw.failed;
      s.curve = std::move(c);
    } else {
      rs.dir = L.dir;
      Trajectory t = L.on_level ? run_level(ctx, *level, L.z, L.res0, rs) : run(ctx, L.z, rs);
      Limit far = limit_of(ctx, t, L.dir);
      if (L.dir > 0) {
        s.alpha = self;
        s.omega = far;
        s.curve = std::move(t);
      } else {
        s.alpha = far;
        s.omega = self;
        s.curve = reversed(std::move(t));
      }
    }
    s.inconclusive = s.alpha.kind == LimitKind::Undetermined || s.omega.kind == LimitKind::Undetermined;
    out[idx] = std::move(s);
  };

  const int nt = std::min<int>(thread_count(o.threads), static_cast<int>(launches.size()));
  if (nt <= 1) {
    for (std::size_t i = 0; i < launches.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(nt);
    for (int t = 0; t < nt; ++t)
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i; (i = next++) < launches.size();) work(i);
        } catch (...) {
          errs[t] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
      if (e) std::rethrow_exception(e);
  }

  // the same orbit traced from both of its ends
  auto is_origin_of = [](const Separatrix& s, const Limit& l) {
    if (s.origin_kind == OriginKind::Infinity) return l.kind == LimitKind::Infinity && l.index == s.origin;
    return (l.kind == LimitKind::Equilibrium || l.kind == LimitKind::Singular) && l.index == s.origin;
  };
  std::vector<bool> drop(out.size(), false);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (drop[i] || out[i].probe) continue;
    for (std::size_t j = i + 1; j < out.size(); ++j) {
      if (drop[j] || out[j].probe) continue;
      const Separatrix &a = out[i], &b = out[j];
      if (!(a.alpha == b.alpha && a.omega == b.omega)) continue;
      const Limit& a_far = (is_origin_of(a, a.alpha) ? a.omega : a.alpha);
      if (!is_origin_of(b, a_far)) continue;
      if (a.curve.points.size() < 2 || b.curve.points.size() < 2) continue;
      const cplx mid = b.curve.points[b.curve.points.size() / 2];
      if (polyline_distance(a.curve.points, mid) < 1e-3 * (1 + std::abs(mid))) drop[j] = true;
    }
  }
  // a characteristic branch of a multiple point that another separatrix already
  // reaches along the same direction is that separatrix
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Separatrix& a = out[i];
    if (drop[i] || a.probe || a.origin_kind != OriginKind::Finite) continue;
    const Equilibrium& e = ctx.eqs[a.origin];
    if (f.kind() != FieldKind::Polynomial || e.order < 2) continue;
    const double half = kPi / (2 * (e.order - 1));
    for (std::size_t j = 0; j < out.size() && !drop[i]; ++j) {
      const Separatrix& b = out[j];
      if (j == i || drop[j] || b.probe || b.inconclusive || b.curve.points.size() < 2) continue;
      if (b.origin_kind == OriginKind::Finite && b.origin == a.origin) continue;
      const bool at_end = b.omega.kind == LimitKind::Equilibrium && b.omega.index == a.origin;
      const bool at_start = b.alpha.kind == LimitKind::Equilibrium && b.alpha.index == a.origin;
      if (!at_end && !at_start) continue;
      const cplx tip = at_end ? b.curve.points.back() : b.curve.points.front();
      if (std::abs(std::remainder(std::arg(tip - e.z) - a.launch_angle, 2 * kPi)) < 0.5 * half) drop[i] = true;
    }
  }
  std::vector<Separatrix> kept;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (!drop[i]) kept.push_back(std::move(out[i]));
  return kept;
}

std::vector<Separatrix> trace_separatrices(const Field& f, TraceOptions o) {
  return trace_separatrices(make_context(f), o);
}

LevelFunction level_function(const FirstIntegral& fi) {
  LevelFunction h;
  h.grad = [fi](cplx z) { return cplx(0, 1) * std::conj(fi.dG(z)); };
  FirstIntegral rest = fi;
  rest.log_terms.clear();
  h.delta = [rest, logs = fi.log_terms](cplx a, cplx b) {
    double d = (rest.G(b) - rest.G(a)).imag();
    for (auto& t : logs) d += (t.coef * std::log((b - t.pole) / (a - t.pole))).imag();
    return d;
  };
  h.value = [fi](cplx z) { return fi.H(z); };
  return h;
}

LevelFunction level_function(const PotentialPair& pp) {
  LevelFunction h;
  CPoly dF = pp.F.derivative();
  h.grad = [dF](cplx z) { return cplx(0, 1) * std::conj(dF(z)); };
  // expanded about a, so small increments keep their relative precision
  h.delta = [F = pp.F](cplx a, cplx b) {
    const std::vector<cplx> c = F.taylor(a);
    const cplx d = b - a;
    cplx acc = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) acc = (acc + c[k]) * d;
    return acc.imag();
  };
  h.value = [F = pp.F](cplx z) { return F(z).imag(); };
  return h;
}

LevelCurve trace_level_curve(const LevelFunction& h, cplx seed, double arc_len, int direction) {
  constexpr double tau_grad = 1e-8;
  LevelCurve lc;
  lc.points.push_back(seed);
  lc.level = h.value(seed);
  const double scale = 1.0 + std::abs(lc.level);
  cplx g = h.grad(seed);
  if (std::abs(g) < tau_grad) throw Error(ErrorCode::CriticalPointHit, "gradient vanishes at the seed");

  auto tangent = [&](cplx grad) { return double(direction) * cplx(0, -1) * grad / std::abs(grad); };
  cplx z = seed, t = tangent(g);
  double res = 0.0;  // H(z) - level
  double travelled = 0.0;
  double hstep = 1e-3 * (1 + std::abs(seed));

  while (travelled < arc_len) {
    const double hmax = 0.05 * (1 + std::abs(z));
    double step = std::min({hstep, hmax, arc_len - travelled});
    bool accepted = false;
    cplx zn, tn;
    double rn = 0.0;
    while (!accepted) {
      if (step < 1e-14 * (1 + std::abs(z))) {
        lc.hit_critical = true;
        return lc;
      }
      // midpoint predictor
      cplx gm = h.grad(z + 0.5 * step * t);
      if (std::abs(gm) < tau_grad) {
        step *= 0.5;
        continue;
      }
      zn = z + step * tangent(gm);
      rn = res + h.delta(z, zn);
      bool ok = false;
      for (int it = 0; it < 12; ++it) {
        cplx gn = h.grad(zn);
        if (std::abs(gn) < tau_grad) break;
        cplx corr = rn * gn / std::norm(gn);
        cplx zc = zn - corr;
        rn += h.delta(zn, zc);
        zn = zc;
        if (std::abs(rn) < 1e-12 * scale) {
          ok = true;
          break;
        }
      }
      cplx gn = h.grad(zn);
      if (std::abs(gn) < tau_grad) {
        lc.points.push_back(zn);
        lc.hit_critical = true;
        lc.max_residual = std::max(lc.max_residual, std::abs(rn));
        return lc;
      }
      tn = tangent(gn);
      const double turn = std::abs(std::arg(tn / t));
      if (!ok || turn > 0.15) {
        step *= 0.5;
        continue;
      }
      accepted = true;
      if (turn < 0.03) hstep = step * 1.5;
      else hstep = step;
    }
    const cplx prev = z;
    travelled += std::abs(zn - z);
    z = zn;
    t = tn;
    res = rn;
    lc.max_residual = std::max(lc.max_residual, std::abs(res));
    if (lc.points.size() > 3 && travelled > 3 * step && seg_distance(prev, z, seed) < 0.5 * step) {
      lc.points.push_back(seed);
      lc.closed = true;
      return lc;
    }
    lc.points.push_back(z);
  }
  return lc;
}

}  // namespace holo
