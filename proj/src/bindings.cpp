#include <complex>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "holo/error.hpp"
#include "holo/render.hpp"
#include "holo/report.hpp"

namespace py = pybind11;
using holo::cplx;

namespace {

py::handle holo_error_type;

holo::Field field(const std::string& expr) { return holo::parse_field(expr); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Phase portraits of holomorphic, inverse, conjugate and Moebius vector fields";

  holo_error_type = PyErr_NewException("holoflow._core.HoloError", PyExc_ValueError, nullptr);
  m.add_object("HoloError", holo_error_type);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const holo::Error& e) {
      // args = (code name, message)
      py::tuple args = py::make_tuple(holo::error_name(e.code()), e.what());
      PyErr_SetObject(holo_error_type.ptr(), args.ptr());
    }
  });

  m.def("normalize", [](const std::string& expr) { return holo::print_field(field(expr)); }, py::arg("expr"),
        "Canonical printed form of a field expression.");

  m.def(
      "analyze_json",
      [](const std::string& expr, double rtol, double atol) {
        const holo::Field f = field(expr);
        py::gil_scoped_release nogil;
        return holo::analyze_report(f, {rtol, atol, 0}).dump();
      },
      py::arg("expr"), py::arg("rtol") = 1e-10, py::arg("atol") = 1e-12);

  m.def(
      "classify_json",
      [](const std::string& expr) {
        const holo::Field f = field(expr);
        py::gil_scoped_release nogil;
        const holo::FlowContext ctx = holo::make_context(f);
        return holo::classification_json(ctx, holo::trace_separatrices(ctx)).dump();
      },
      py::arg("expr"));

  m.def(
      "equilibria_json",
      [](const std::string& expr) {
        holo::json a = holo::json::array();
        for (auto& e : holo::classify_equilibria(field(expr))) a.push_back(holo::to_json(e));
        return a.dump();
      },
      py::arg("expr"));

  m.def(
      "catalog_json",
      [](const std::string& family) {
        holo::json a = holo::json::array();
        if (family.empty())
          for (auto fam : holo::all_families()) a.push_back(holo::catalog_json(fam));
        else
          a.push_back(holo::catalog_json(holo::parse_family(family)));
        return a.dump();
      },
      py::arg("family") = "");

  m.def(
      "integrate",
      [](const std::string& expr, cplx z0, double t, int direction, double rtol, double atol) {
        const holo::Field f = field(expr);
        holo::Trajectory tr;
        {
          py::gil_scoped_release nogil;
          tr = holo::integrate(f, z0, t, direction, {rtol, atol});
        }
        py::dict d;
        d["times"] = tr.times;
        d["points"] = tr.points;
        d["terminal"] = holo::terminal_name(tr.terminal);
        d["target"] = tr.target;
        d["period"] = tr.period;
        return d;
      },
      py::arg("expr"), py::arg("z0"), py::arg("t"), py::arg("direction") = 1, py::arg("rtol") = 1e-10,
      py::arg("atol") = 1e-12);

  m.def(
      "first_integral",
      [](const std::string& expr, const std::vector<cplx>& path) {
        return holo::eval_H(holo::first_integral(field(expr)), path);
      },
      py::arg("expr"), py::arg("path"), "H along a path with continuous log branches.");

  m.def(
      "travel_time", [](const std::string& expr, const std::vector<cplx>& path) {
        return holo::travel_time(field(expr), path);
      },
      py::arg("expr"), py::arg("path"));

  m.def(
      "portrait_svg",
      [](const std::string& expr, std::uint64_t seed, int orbits, int radius, bool separatrices) {
        const holo::Field f = field(expr);
        holo::RenderSpec rs;
        rs.seed = seed;
        rs.sample_orbit_count = orbits;
        rs.disk_radius_px = radius;
        rs.include_separatrices = separatrices;
        py::gil_scoped_release nogil;
        return holo::render_portrait_svg(f, rs);
      },
      py::arg("expr"), py::arg("seed") = 1, py::arg("orbits") = 24, py::arg("radius") = 300,
      py::arg("separatrices") = true);

  m.def(
      "levels_svg",
      [](const std::string& expr, int levels, cplx center, double half_width, int grid) {
        const holo::Field f = field(expr);
        py::gil_scoped_release nogil;
        return holo::render_levels_svg(f, {center, half_width, grid}, levels);
      },
      py::arg("expr"), py::arg("levels") = 16, py::arg("center") = cplx{}, py::arg("half_width") = 3.0,
      py::arg("grid") = 201);
}
