#include "holo/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"

#include "holo/error.hpp"
#include "holo/render.hpp"
#include "holo/report.hpp"

namespace holo {

namespace {

struct Globals {
  bool json = false;
  std::uint64_t seed = 1;
  double rtol = 1e-10;
  double atol = 1e-12;
  double tcap = 50.0;
};

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::SyntaxError:
    case ErrorCode::NotRecognizedForm:
    case ErrorCode::DegenerateField:
    case ErrorCode::WrongDegree: return 2;
    case ErrorCode::IOError: return 4;
    default: return 3;
  }
}

cplx parse_point(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw Error(ErrorCode::SyntaxError, "expected x,y but got '" + s + "'");
  try {
    std::size_t a = 0, b = 0;
    const double x = std::stod(s.substr(0, comma), &a);
    const double y = std::stod(s.substr(comma + 1), &b);
    if (a != comma || b != s.size() - comma - 1) throw std::invalid_argument(s);
    return {x, y};
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::SyntaxError, "expected x,y but got '" + s + "'");
  }
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IOError, "cannot open '" + path + "' for writing");
  f << data;
  f.close();
  if (!f) throw Error(ErrorCode::IOError, "write to '" + path + "' failed");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phase portraits of holomorphic, inverse, conjugate and Moebius vector fields", "holo"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_flag("--json", g.json, "JSON output");
  app.add_option("--seed", g.seed, "seed for sampled orbits")->capture_default_str();
  app.add_option("--rtol", g.rtol, "relative tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--atol", g.atol, "absolute tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--tcap", g.tcap, "integration time when integrate gets no --t")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  std::string expr;

  auto* analyze = app.add_subcommand("analyze", "full JSON report");
  analyze->add_option("expr", expr, "field expression")->required();

  std::string svg_path, grid_path, center_s = "0,0";
  int levels = 0, orbits = 24, radius = 300, grid_n = 201;
  double window = 3.0;
  bool no_seps = false;
  auto* portrait = app.add_subcommand("portrait", "SVG of the Poincare disk or of level curves");
  portrait->add_option("expr", expr, "field expression")->required();
  portrait->add_option("--svg", svg_path, "output SVG (stdout when omitted)");
  portrait->add_option("--levels", levels, "plot this many level curves of the first integral instead")
      ->check(CLI::PositiveNumber);
  portrait->add_option("--png-grid", grid_path, "also write the first integral on the window grid as CSV");
  portrait->add_option("--orbits", orbits, "sampled orbits")->capture_default_str()->check(CLI::NonNegativeNumber);
  portrait->add_option("--radius", radius, "disk radius in px")->capture_default_str()->check(CLI::PositiveNumber);
  portrait->add_option("--window", window, "half width of the level window")->capture_default_str();
  portrait->add_option("--center", center_s, "centre of the level window x,y")->capture_default_str();
  portrait->add_option("--grid", grid_n, "grid nodes per side")->capture_default_str()->check(CLI::Range(2, 4001));
  portrait->add_flag("--no-separatrices", no_seps, "omit separatrices");

  std::string from_s;
  double t_end = -1.0;
  bool backward = false;
  auto* integ = app.add_subcommand("integrate", "trajectory as CSV t,x,y,H");
  integ->add_option("expr", expr, "field expression")->required();
  integ->add_option("--from", from_s, "start point x,y")->required();
  integ->add_option("--t", t_end, "integration time (default --tcap)")->check(CLI::PositiveNumber);
  integ->add_flag("--backward", backward, "integrate in negative time");

  auto* pot = app.add_subcommand("potential", "first integral (stream function for conjugate fields) on a grid");
  pot->add_option("expr", expr, "field expression")->required();
  pot->add_option("--window", window, "half width of the window")->capture_default_str();
  pot->add_option("--center", center_s, "window centre x,y")->capture_default_str();
  pot->add_option("--grid", grid_n, "grid nodes per side")->capture_default_str()->check(CLI::Range(2, 4001));

  std::string family_s;
  auto* cat = app.add_subcommand("catalog", "list catalog figures");
  cat->add_option("family", family_s, "Quad, Cubic, Quartic, InvQuad, InvCubic, InvQuartic or Moebius");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const IntegrateOptions io{g.rtol, g.atol};
  const TraceOptions to{g.rtol, g.atol, 0};
  auto grid_spec = [&] { return GridSpec{parse_point(center_s), window, grid_n}; };

  try {
    if (*analyze) {
      const Field f = parse_field(expr);
      out << analyze_report(f, to).dump(2) << "\n";
    } else if (*portrait) {
      const Field f = parse_field(expr);
      json summary{{"input", print_field(f)}, {"svg", nullptr}, {"grid", nullptr}};
      std::string svg;
      if (levels > 0) {
        svg = render_levels_svg(f, grid_spec(), levels);
      } else if (!g.json || !svg_path.empty()) {
        RenderSpec rs;
        rs.disk_radius_px = radius;
        rs.sample_orbit_count = orbits;
        rs.seed = g.seed;
        rs.include_separatrices = !no_seps;
        rs.integrate = io;
        FlowContext ctx = make_context(f);
        std::vector<Separatrix> seps;
        if (rs.include_separatrices) seps = trace_separatrices(ctx, to);
        svg = render_portrait_svg(ctx, seps, rs);
        json items = json::array();
        for (auto& s : seps) items.push_back(to_json(s));
        summary["separatrices"] = items;
      }
      if (!grid_path.empty()) {
        write_file(grid_path, level_grid_csv(f, grid_spec()));
        summary["grid"] = grid_path;
      }
      if (!svg_path.empty()) {
        write_file(svg_path, svg);
        summary["svg"] = svg_path;
      }
      if (g.json)
        out << summary.dump(2) << "\n";
      else if (svg_path.empty())
        out << svg;
    } else if (*integ) {
      const Field f = parse_field(expr);
      const cplx z0 = parse_point(from_s);
      const double T = t_end > 0 ? t_end : g.tcap;
      const Trajectory tr = integrate(f, z0, T, backward ? -1 : 1, io);
      std::vector<double> H(tr.points.size(), std::nan(""));
      try {
        H = eval_H(first_integral(f), tr.points);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::UnsupportedKind) throw;
      }
      if (g.json) {
        out << json{{"input", print_field(f)}, {"trajectory", to_json(tr)}, {"H", H}}.dump(2) << "\n";
      } else {
        out << "t,x,y,H\n";
        for (std::size_t k = 0; k < tr.points.size(); ++k)
          out << fmt(tr.times[k]) << "," << fmt(tr.points[k].real()) << "," << fmt(tr.points[k].imag()) << ","
              << fmt(H[k]) << "\n";
      }
    } else if (*pot) {
      const Field f = parse_field(expr);
      const GridSpec gs = grid_spec();
      if (g.json) {
        json j{{"input", print_field(f)},
               {"quantity", f.kind() == FieldKind::ConjugatePolynomial ? "psi" : "H"},
               {"first_integral", to_json(first_integral(f))}};
        if (f.kind() == FieldKind::ConjugatePolynomial) {
          const PotentialPair pp = potential(f);
          const PlanarExpansion pe = planar_of(pp.F);
          j["F"] = to_json(pp.F);
          j["phi"] = pe.u.to_string();
          j["psi"] = pe.v.to_string();
        }
        json rows = json::array();
        for (auto& row : level_grid(f, gs)) {
          json r = json::array();
          for (double v : row) r.push_back(std::isfinite(v) ? json(v) : json(nullptr));
          rows.push_back(r);
        }
        j["grid"] = {{"center", to_json(gs.center)}, {"half_width", gs.half_width}, {"n", gs.n}, {"values", rows}};
        out << j.dump(2) << "\n";
      } else {
        out << level_grid_csv(f, gs);
      }
    } else if (*cat) {
      std::vector<Family> fams = family_s.empty() ? all_families() : std::vector<Family>{parse_family(family_s)};
      if (g.json) {
        json a = json::array();
        for (Family fam : fams) a.push_back(catalog_json(fam));
        out << a.dump(2) << "\n";
      } else {
        for (Family fam : fams)
          for (auto& e : catalog(fam)) {
            std::string ms;
            for (auto& m : e.multisets) {
              ms += ms.empty() ? "{" : " | {";
              for (std::size_t k = 0; k < m.size(); ++k) ms += (k ? "," : "") + m[k];
              ms += "}";
            }
            out << family_name(fam) << "\t" << e.label << "\t" << ms << "\t" << e.description << "\t"
                << (e.example.empty() ? "-" : e.example) << "\n";
          }
      }
    }
  } catch (const SyntaxError& e) {
    err << "error: " << e.what() << "\n  " << expr << "\n  " << std::string(e.position(), ' ') << "^\n";
    return 2;
  } catch (const Error& e) {
    err << "error (" << error_name(e.code()) << "): " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace holo
