#include "holo/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "holo/error.hpp"

namespace holo {

cplx disk_point(cplx z) { return z / (1.0 + std::abs(z)); }

cplx plane_point(cplx d) { return d / (1.0 - std::abs(d)); }

cplx GridSpec::node(int i, int j) const {
  const double h = n > 1 ? 2.0 * half_width / (n - 1) : 0.0;
  return center + cplx(-half_width + i * h, -half_width + j * h);
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string color_of(const RenderSpec& spec, const std::string& key) {
  auto it = spec.colors.find(key);
  return it == spec.colors.end() ? "#000000" : it->second;
}

// Polyline as an SVG path, dropping points closer than min_px to the last kept one.
std::string path_data(const std::vector<cplx>& px, double min_px = 0.75) {
  std::string d;
  cplx last;
  for (std::size_t i = 0; i < px.size(); ++i) {
    const bool end = i + 1 == px.size();
    if (i > 0 && !end && std::abs(px[i] - last) < min_px) continue;
    d += (i == 0 ? "M" : " L") + num(px[i].real()) + " " + num(px[i].imag());
    last = px[i];
  }
  return d;
}

struct DiskCanvas {
  double r, cx, cy;
  cplx map(cplx z) const {
    cplx d = disk_point(z);
    return {cx + r * d.real(), cy - r * d.imag()};
  }
  cplx at_angle(double a) const { return {cx + r * std::cos(a), cy - r * std::sin(a)}; }
};

std::string cross(cplx p, double s, const std::string& cls, const std::string& color) {
  return "<path class=\"" + cls + "\" d=\"M" + num(p.real() - s) + " " + num(p.imag() - s) + " L" +
         num(p.real() + s) + " " + num(p.imag() + s) + " M" + num(p.real() - s) + " " + num(p.imag() + s) + " L" +
         num(p.real() + s) + " " + num(p.imag() - s) + "\" stroke=\"" + color + "\" stroke-width=\"2\" fill=\"none\"/>\n";
}

std::string eq_glyph(const Equilibrium& e, cplx p, const RenderSpec& spec) {
  const std::string kind = eq_kind_name(e.kind);
  const std::string cls = "eq " + kind;
  const std::string col = color_of(spec, kind);
  const std::string x = num(p.real()), y = num(p.imag());
  switch (e.kind) {
    case EqKind::Center:
      return "<circle class=\"" + cls + "\" cx=\"" + x + "\" cy=\"" + y + "\" r=\"5\" fill=\"#ffffff\" stroke=\"" + col +
             "\" stroke-width=\"2\"/>\n";
    case EqKind::FocusRepelling:
    case EqKind::FocusAttracting:
      return "<circle class=\"" + cls + "\" cx=\"" + x + "\" cy=\"" + y + "\" r=\"5\" fill=\"" + col + "\"/>\n";
    case EqKind::NodeRepelling:
    case EqKind::NodeAttracting:
      return "<rect class=\"" + cls + "\" x=\"" + num(p.real() - 5) + "\" y=\"" + num(p.imag() - 5) +
             "\" width=\"10\" height=\"10\" fill=\"" + col + "\"/>\n";
    case EqKind::MultipleElliptic:
      return "<path class=\"" + cls + "\" d=\"M" + x + " " + num(p.imag() - 7) + " L" + num(p.real() + 7) + " " + y +
             " L" + x + " " + num(p.imag() + 7) + " L" + num(p.real() - 7) + " " + y + " Z\" fill=\"" + col +
             "\"/>\n<text x=\"" + num(p.real() + 8) + "\" y=\"" + num(p.imag() - 8) +
             "\" font-size=\"10\" font-family=\"sans-serif\">" + std::to_string(e.order) + "</text>\n";
    case EqKind::Pole:
      return "<circle class=\"" + cls + "\" cx=\"" + x + "\" cy=\"" + y + "\" r=\"5\" fill=\"#ffffff\" stroke=\"" + col +
             "\" stroke-width=\"2\"/>\n" + cross(p, 3.5, "pole-mark", col);
    case EqKind::SaddleConjugate: return cross(p, 5, cls, col);
  }
  return {};
}

std::string inf_glyph(const InfinityPoint& q, cplx p, const RenderSpec& spec) {
  const std::string kind = inf_kind_name(q.kind);
  const std::string cls = "inf " + kind;
  const std::string col = color_of(spec, kind);
  if (q.kind == InfKind::Saddle) return cross(p, 5, cls, col);
  const cplx u = std::polar(1.0, -q.angle);  // outward in screen coordinates
  const cplx t = u * cplx(0, 1);
  const cplx a = p + 7.0 * u, b = p - 5.0 * u + 5.0 * t, c = p - 5.0 * u - 5.0 * t;
  return "<path class=\"" + cls + "\" d=\"M" + num(a.real()) + " " + num(a.imag()) + " L" + num(b.real()) + " " +
         num(b.imag()) + " L" + num(c.real()) + " " + num(c.imag()) + " Z\" fill=\"" + col + "\"/>\n";
}

// 53-bit uniform in [0, 1) independent of the standard library's distributions.
double unit(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

bool near_critical(const FlowContext& ctx, cplx z) {
  for (auto& e : ctx.eqs)
    if (std::abs(z - e.z) < 1e-3 * (1.0 + std::abs(e.z))) return true;
  for (cplx s : ctx.singular)
    if (std::abs(z - s) < 1e-3 * (1.0 + std::abs(s))) return true;
  return false;
}

std::vector<cplx> sample_orbit(const FlowContext& ctx, cplx z0, const RenderSpec& spec) {
  std::vector<cplx> pts;
  for (int dir : {-1, 1}) {
    Trajectory t;
    try {
      t = trace_orbit(ctx, z0, spec.orbit_length, dir, spec.integrate);
    } catch (const Error&) {
      continue;
    }
    if (dir < 0) {
      pts.assign(t.points.rbegin(), t.points.rend());
    } else {
      if (!pts.empty()) pts.pop_back();  // shared seed
      pts.insert(pts.end(), t.points.begin(), t.points.end());
    }
  }
  return pts;
}

}  // namespace

std::string render_portrait_svg(const FlowContext& ctx, const std::vector<Separatrix>& seps, const RenderSpec& spec) {
  const double margin = 20.0;
  const double r = spec.disk_radius_px;
  const DiskCanvas cv{r, r + margin, r + margin};
  const std::string side = num(2 * (r + margin));

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << side << "\" height=\"" << side << "\" viewBox=\"0 0 "
     << side << " " << side << "\">\n";
  os << "<desc>" << print_field(ctx.field) << "</desc>\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  os << "<circle class=\"equator\" cx=\"" << num(cv.cx) << "\" cy=\"" << num(cv.cy) << "\" r=\"" << num(r)
     << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n";

  std::mt19937_64 rng(spec.seed);
  os << "<g class=\"orbits\" fill=\"none\" stroke=\"#9a9a9a\" stroke-width=\"0.7\">\n";
  for (int k = 0; k < spec.sample_orbit_count; ++k) {
    const double rad = 0.92 * std::sqrt(unit(rng));
    const double ang = 2.0 * M_PI * unit(rng);
    const cplx z0 = plane_point(std::polar(rad, ang));
    if (near_critical(ctx, z0)) continue;
    auto pts = sample_orbit(ctx, z0, spec);
    if (pts.size() < 2) continue;
    for (auto& p : pts) p = cv.map(p);
    os << "<path d=\"" << path_data(pts) << "\"/>\n";
  }
  os << "</g>\n";

  if (spec.include_separatrices) {
    os << "<g class=\"separatrices\" fill=\"none\" stroke=\"#202020\" stroke-width=\"1.3\">\n";
    for (auto& s : seps) {
      if (s.curve.points.size() < 2) continue;
      std::vector<cplx> pts;
      pts.reserve(s.curve.points.size());
      for (cplx z : s.curve.points) pts.push_back(cv.map(z));
      os << "<path class=\"separatrix" << (s.inconclusive ? " inconclusive" : "") << "\" d=\"" << path_data(pts)
         << "\"" << (s.inconclusive ? " stroke-dasharray=\"4 3\"" : "") << "/>\n";
    }
    os << "</g>\n";
  }

  for (auto& e : ctx.eqs) os << eq_glyph(e, cv.map(e.z), spec);
  for (cplx z : ctx.singular) {
    const cplx p = cv.map(z);
    os << "<circle class=\"singular\" cx=\"" << num(p.real()) << "\" cy=\"" << num(p.imag())
       << "\" r=\"4\" fill=\"#000000\"/>\n";
  }
  for (auto& q : ctx.inf) os << inf_glyph(q, cv.at_angle(q.angle), spec);
  os << "</svg>\n";
  return os.str();
}

std::string render_portrait_svg(const Field& f, const RenderSpec& spec) {
  FlowContext ctx = make_context(f);
  std::vector<Separatrix> seps;
  if (spec.include_separatrices) seps = trace_separatrices(ctx);
  return render_portrait_svg(ctx, seps, spec);
}

std::vector<std::vector<double>> level_grid(const Field& f, const GridSpec& g) {
  const FirstIntegral fi = first_integral(f);
  const auto& crit = f.singular_points();
  std::vector<std::vector<double>> v(g.n, std::vector<double>(g.n));
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const cplx z = g.node(i, j);
      bool bad = false;
      for (cplx c : crit) bad = bad || std::abs(z - c) < pole_radius(c);
      for (auto& t : fi.log_terms) bad = bad || std::abs(z - t.pole) < pole_radius(t.pole);
      for (auto& t : fi.power_terms) bad = bad || std::abs(z - t.pole) < pole_radius(t.pole);
      if (fi.essential_n) bad = bad || std::abs(z) < pole_radius(0.0);
      v[i][j] = bad ? std::numeric_limits<double>::quiet_NaN() : fi.H(z);
    }
  return v;
}

std::string level_grid_csv(const Field& f, const GridSpec& g) {
  const auto v = level_grid(f, g);
  std::string out = "x,y,H\n";
  char buf[96];
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) {
      const cplx z = g.node(i, j);
      std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.12g\n", z.real(), z.imag(), v[i][j]);
      out += buf;
    }
  return out;
}

namespace {

std::string level_color(int k, int levels) {
  const double t = levels > 1 ? static_cast<double>(k) / (levels - 1) : 0.5;
  const int r = static_cast<int>(std::lround(31 + t * (192 - 31)));
  const int g = static_cast<int>(std::lround(95 + t * (57 - 95)));
  const int b = static_cast<int>(std::lround(191 + t * (43 - 191)));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

std::string render_levels_svg(const Field& f, const GridSpec& g, int levels, int size_px) {
  if (levels < 1) throw Error(ErrorCode::Undetermined, "need at least one level");
  const FirstIntegral fi = first_integral(f);
  const LevelFunction lf = level_function(fi);
  const auto v = level_grid(f, g);

  std::vector<double> vals;
  for (auto& row : v)
    for (double x : row)
      if (std::isfinite(x)) vals.push_back(x);
  if (vals.empty()) throw Error(ErrorCode::Undetermined, "no finite values in the window");
  std::sort(vals.begin(), vals.end());
  const double lo = vals[vals.size() / 20], hi = vals[vals.size() - 1 - vals.size() / 20];
  std::vector<double> ks;
  for (int k = 0; k < levels; ++k) ks.push_back(levels == 1 ? 0.5 * (lo + hi) : lo + k * (hi - lo) / (levels - 1));

  const double scale = size_px / (2.0 * g.half_width);
  auto px = [&](cplx z) {
    const cplx o = z - g.center;
    return cplx(size_px / 2.0 + scale * o.real(), size_px / 2.0 - scale * o.imag());
  };

  // per level: segment list
  std::vector<std::string> paths(ks.size());
  for (int i = 0; i + 1 < g.n; ++i)
    for (int j = 0; j + 1 < g.n; ++j) {
      const cplx c[4] = {g.node(i, j), g.node(i + 1, j), g.node(i + 1, j + 1), g.node(i, j + 1)};
      if (!std::isfinite(v[i][j]) || !std::isfinite(v[i + 1][j]) || !std::isfinite(v[i + 1][j + 1]) ||
          !std::isfinite(v[i][j + 1]))
        continue;
      // corner values on one branch of H
      double h[4];
      h[0] = v[i][j];
      for (int q = 1; q < 4; ++q) h[q] = h[0] + lf.delta(c[0], c[q]);
      const double mid = 0.25 * (h[0] + h[1] + h[2] + h[3]);
      for (std::size_t k = 0; k < ks.size(); ++k) {
        cplx cut[4];
        bool has[4] = {};
        int n = 0;
        for (int e = 0; e < 4; ++e) {
          const double a = h[e] - ks[k], b = h[(e + 1) % 4] - ks[k];
          if ((a >= 0) != (b >= 0)) {
            cut[e] = c[e] + (a / (a - b)) * (c[(e + 1) % 4] - c[e]);
            has[e] = true;
            ++n;
          }
        }
        auto seg = [&](int a, int b) {
          const cplx p = px(cut[a]), q = px(cut[b]);
          paths[k] += "M" + num(p.real()) + " " + num(p.imag()) + " L" + num(q.real()) + " " + num(q.imag()) + " ";
        };
        if (n == 2) {
          int a = -1, b = -1;
          for (int e = 0; e < 4; ++e)
            if (has[e]) (a < 0 ? a : b) = e;
          seg(a, b);
        } else if (n == 4) {
          // saddle cell: the centre value decides which corners are joined
          if ((mid >= ks[k]) == (h[0] >= ks[k])) {
            seg(0, 1);
            seg(2, 3);
          } else {
            seg(3, 0);
            seg(1, 2);
          }
        }
      }
    }

  const std::string side = std::to_string(size_px);
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << side << "\" height=\"" << side << "\" viewBox=\"0 0 "
     << side << " " << side << "\">\n";
  os << "<desc>" << print_field(f) << "</desc>\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  for (std::size_t k = 0; k < ks.size(); ++k) {
    if (paths[k].empty()) continue;
    paths[k].pop_back();
    char lv[32];
    std::snprintf(lv, sizeof lv, "%.6g", ks[k]);
    os << "<path class=\"level\" data-level=\"" << lv << "\" d=\"" << paths[k] << "\" fill=\"none\" stroke=\""
       << level_color(static_cast<int>(k), levels) << "\" stroke-width=\"1\"/>\n";
  }
  RenderSpec style;
  for (auto& e : classify_equilibria(f)) {
    const cplx o = e.z - g.center;
    if (std::abs(o.real()) > g.half_width || std::abs(o.imag()) > g.half_width) continue;
    os << eq_glyph(e, px(e.z), style);
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace holo
