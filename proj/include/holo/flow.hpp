#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "holo/infinity.hpp"
#include "holo/integrals.hpp"
#include "holo/local.hpp"

namespace holo {

enum class Terminal { TimeExhausted, ConvergedToEquilibrium, EscapedToInfinity, HitSingularity, ClosedOrbit };
const char* terminal_name(Terminal t);

struct Trajectory {
  std::vector<cplx> points;
  std::vector<double> times;  // physical time, strictly monotone
  Terminal terminal = Terminal::TimeExhausted;
  int target = -1;            // equilibrium / singular index for the matching terminals
  double escape_angle = 0.0;  // arg z at the escape radius
  double period = 0.0;        // ClosedOrbit
  double arclength = 0.0;
  bool failed = false;  // integrator gave up (step underflow or budget)
};

// Everything the flow needs to know about a field, computed once.
struct FlowContext {
  Field field;
  std::vector<Equilibrium> eqs;     // classify_equilibria order; poles included
  std::vector<InfinityPoint> inf;   // empty when the kind has no chart description
  std::vector<cplx> singular;       // points the orbit must not touch
  std::vector<double> capture;      // capture radius per equilibrium
};
FlowContext make_context(const Field& f);

struct IntegrateOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
};

Trajectory integrate(const Field& f, cplx z0, double t_max, int direction = 1, IntegrateOptions o = {});
Trajectory integrate(const FlowContext& ctx, cplx z0, double t_max, int direction, IntegrateOptions o);

// Orbit through z0 followed for the disk arclength s_max (element
// |dz|/(1+|z|^2)); stops at equilibria, poles and attracting infinity points.
Trajectory trace_orbit(const FlowContext& ctx, cplx z0, double s_max, int direction, IntegrateOptions o = {});

enum class LimitKind { Equilibrium, Infinity, Singular, ClosedOrbit, Undetermined };
const char* limit_kind_name(LimitKind k);

struct Limit {
  LimitKind kind = LimitKind::Undetermined;
  int index = -1;  // equilibrium index, infinity point index (or -1), singular index
  double angle = 0.0;
  cplx z;

  bool operator==(const Limit& o) const { return kind == o.kind && index == o.index; }
};

// Throws Undetermined when the trajectory carries no usable limit.
Limit omega_limit(const FlowContext& ctx, const Trajectory& traj, int direction = 1);
Limit omega_limit(const Field& f, const Trajectory& traj, int direction = 1);

enum class OriginKind { Infinity, Finite };

struct Separatrix {
  OriginKind origin_kind = OriginKind::Infinity;
  int origin = -1;  // infinity point index or equilibrium index
  int branch = 0;
  double launch_angle = 0.0;  // eigen/characteristic direction used for the launch
  Trajectory curve;           // oriented in forward time, alpha end first
  Limit alpha, omega;
  bool inconclusive = false;
  bool probe = false;  // mid-sector probe of a multiple point rather than a sector boundary
};

struct TraceOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  int threads = 0;  // 0: HOLO_THREADS or hardware concurrency
};

// requested if positive, else HOLO_THREADS, else hardware concurrency
int thread_count(int requested = 0);

std::vector<Separatrix> trace_separatrices(const Field& f, TraceOptions o = {});
std::vector<Separatrix> trace_separatrices(const FlowContext& ctx, TraceOptions o = {});

// Level set tracing for H = Im G (first integral) or a stream function.
struct LevelCurve {
  std::vector<cplx> points;
  bool closed = false;
  bool hit_critical = false;  // ended where the gradient vanishes
  double level = 0.0;
  double max_residual = 0.0;
};

struct LevelFunction {
  std::function<cplx(cplx)> grad;              // dH/dx + i dH/dy
  std::function<double(cplx, cplx)> delta;     // H(b) - H(a) for nearby a, b (branch-continuous)
  std::function<double(cplx)> value;           // H(z) on some branch
};
LevelFunction level_function(const FirstIntegral& fi);
LevelFunction level_function(const PotentialPair& pp);

LevelCurve trace_level_curve(const LevelFunction& h, cplx seed, double arc_len, int direction = 1);

}  // namespace holo
