#pragma once

#include <string>
#include <vector>

#include "polycontain/geometry.hpp"

namespace polycontain::render {

using geo::AHPolytope;
using numerics::Matrix;

struct Style {
  double width = 480;
  double height = 480;
  double margin = 20;
  double fill_opacity = 0.35;
  double stroke_width = 1.5;
  // Cycled through by layer.
  std::vector<std::string> palette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                      "#8c564b"};
};

// Counter-clockwise convex hull of the columns of a 2 x k matrix.
Matrix hull_2d(const Matrix& points);

// Boundary polygon of a 2-D set, as columns.
Matrix outline(const AHPolytope& p);

// SVG text; sets are drawn in order, later ones on top.
std::string render_2d(const std::vector<AHPolytope>& sets, const Style& style = {});

}  // namespace polycontain::render
