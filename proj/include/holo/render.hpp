#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "holo/flow.hpp"

namespace holo {

struct RenderSpec {
  int disk_radius_px = 300;
  int sample_orbit_count = 24;
  std::uint64_t seed = 1;
  bool include_separatrices = true;
  // fill colour per EqKind name / InfKind name
  std::map<std::string, std::string> colors = {
      {"Center", "#2a7f2a"},         {"FocusRepelling", "#c0392b"}, {"FocusAttracting", "#1f5fbf"},
      {"NodeRepelling", "#c0392b"},  {"NodeAttracting", "#1f5fbf"}, {"MultipleElliptic", "#7d3c98"},
      {"Pole", "#000000"},           {"SaddleConjugate", "#d68910"}, {"Saddle", "#d68910"},
  };
  double orbit_length = 12.0;  // disk arclength per direction
  IntegrateOptions integrate;
};

// Disk projection used for drawing.
cplx disk_point(cplx z);
cplx plane_point(cplx d);

// Poincare disk: equator, infinity glyphs, equilibrium glyphs, separatrices,
// sampled orbits.
std::string render_portrait_svg(const FlowContext& ctx, const std::vector<Separatrix>& seps, const RenderSpec& spec);
std::string render_portrait_svg(const Field& f, const RenderSpec& spec);

// Square window of the plane sampled on an n x n node grid.
struct GridSpec {
  cplx center;
  double half_width = 3.0;
  int n = 201;

  cplx node(int i, int j) const;  // i along x, j along y
};

// Values of H = Im G (the stream function for conjugate fields); nodes
// closer than the pole radius to a singular point hold NaN.
std::vector<std::vector<double>> level_grid(const Field& f, const GridSpec& g);
std::string level_grid_csv(const Field& f, const GridSpec& g);

// Contour plot of H with evenly spaced levels between the 5% and 95%
// quantiles of the grid values.
std::string render_levels_svg(const Field& f, const GridSpec& g, int levels, int size_px = 600);

}  // namespace holo
