#include "polycontain/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "polycontain/error.hpp"
#include "polycontain/optimize.hpp"
#include "polycontain/oracle.hpp"

namespace polycontain::render {

namespace {

using numerics::Index;
using numerics::Vector;

constexpr Index kSupportDirections = 256;

double cross(const Vector& o, const Vector& a, const Vector& b) {
  return (a(0) - o(0)) * (b(1) - o(1)) - (a(1) - o(1)) * (b(0) - o(0));
}

bool is_unit_box_base(const geo::HPolytope& p) {
  const Index n = p.dim();
  if (n == 0 || p.rows() != 2 * n) return false;
  const geo::HPolytope box = geo::unit_box(n);
  return p.H == box.H && p.h == box.h;
}

// Maximizers of c'x over the set for evenly spaced directions.
Matrix support_points(const AHPolytope& p) {
  Matrix out(2, kSupportDirections);
  for (Index k = 0; k < kSupportDirections; ++k) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / kSupportDirections;
    const Vector c = (Vector(2) << std::cos(a), std::sin(a)).finished();
    opt::LinearModel m;
    const opt::MatrixVar z = opt::add_matrix_var(m, p.map.cols(), 1);
    opt::add_matrix_less_equal(m, p.base.H * opt::AffineMatrix(z),
                               opt::AffineMatrix::column(p.base.h));
    const Vector w = p.map.transpose() * c;
    opt::LinExpr obj;
    for (Index j = 0; j < w.size(); ++j) obj.add_term(z(j, 0), w(j));
    m.set_objective(obj, opt::Sense::kMaximize);
    const opt::Solution s = opt::default_solver().solve(m);
    if (!s.optimal()) fail(ErrorCode::kInvalidInput, "render: set is empty or unbounded");
    out.col(k) = p.center + p.map * s.value(opt::AffineMatrix(z)).col(0);
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", std::abs(v) < 5e-4 ? 0.0 : v);
  return buf;
}

}  // namespace

Matrix hull_2d(const Matrix& points) {
  if (points.rows() != 2) fail(ErrorCode::kDimensionMismatch, "hull_2d: points must be 2-D");
  std::vector<Vector> pts;
  for (Index j = 0; j < points.cols(); ++j) pts.push_back(points.col(j));
  std::sort(pts.begin(), pts.end(), [](const Vector& a, const Vector& b) {
    return a(0) < b(0) || (a(0) == b(0) && a(1) < b(1));
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vector& a, const Vector& b) { return (a - b).norm() < 1e-9; }),
            pts.end());
  if (pts.size() < 3) {
    Matrix out(2, static_cast<Index>(pts.size()));
    for (size_t i = 0; i < pts.size(); ++i) out.col(static_cast<Index>(i)) = pts[i];
    return out;
  }
  // Monotone chain; collinear points are dropped.
  std::vector<Vector> h(2 * pts.size());
  size_t k = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 1e-12) --k;
    h[k++] = pts[i];
  }
  for (size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 1e-12) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  Matrix out(2, static_cast<Index>(h.size()));
  for (size_t i = 0; i < h.size(); ++i) out.col(static_cast<Index>(i)) = h[i];
  return out;
}

Matrix outline(const AHPolytope& p) {
  geo::validate(p);
  if (p.dim() != 2) {
    fail(ErrorCode::kDimensionMismatch,
         "render: sets must live in R^2, got R^" + std::to_string(p.dim()));
  }
  if (p.map.cols() == 0) return p.center;
  if (is_unit_box_base(p.base) && p.map.cols() <= oracle::kMaxZonotopeColumns) {
    return hull_2d(oracle::zonotope_vertex_candidates(geo::Zonotope{p.center, p.map}));
  }
  if (p.map.cols() <= 3) {
    try {
      return hull_2d(oracle::vertex_candidates(p));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kResourceLimit) throw;
    }
  }
  return hull_2d(support_points(p));
}

std::string render_2d(const std::vector<AHPolytope>& sets, const Style& style) {
  std::vector<Matrix> polys;
  double xmin = -1, xmax = 1, ymin = -1, ymax = 1;
  bool first = true;
  for (const auto& s : sets) {
    polys.push_back(outline(s));
    const Matrix& q = polys.back();
    if (q.cols() == 0) continue;
    const double a = q.row(0).minCoeff(), b = q.row(0).maxCoeff();
    const double c = q.row(1).minCoeff(), d = q.row(1).maxCoeff();
    if (first) {
      xmin = a, xmax = b, ymin = c, ymax = d;
      first = false;
    } else {
      xmin = std::min(xmin, a), xmax = std::max(xmax, b);
      ymin = std::min(ymin, c), ymax = std::max(ymax, d);
    }
  }
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-9});
  const double scale =
      std::min(style.width, style.height) - 2 * style.margin > 0
          ? (std::min(style.width, style.height) - 2 * style.margin) / span
          : 1.0;
  const double cx = 0.5 * (xmin + xmax);
  const double cy = 0.5 * (ymin + ymax);
  auto px = [&](double x) { return 0.5 * style.width + (x - cx) * scale; };
  auto py = [&](double y) { return 0.5 * style.height - (y - cy) * scale; };

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(style.width) +
                    "\" height=\"" + fmt(style.height) + "\" viewBox=\"0 0 " + fmt(style.width) +
                    " " + fmt(style.height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (size_t i = 0; i < polys.size(); ++i) {
    const Matrix& q = polys[i];
    const std::string& color =
        style.palette.empty() ? std::string("#000000") : style.palette[i % style.palette.size()];
    if (q.cols() == 1) {
      out += "<circle cx=\"" + fmt(px(q(0, 0))) + "\" cy=\"" + fmt(py(q(1, 0))) +
             "\" r=\"3\" fill=\"" + color + "\"/>\n";
      continue;
    }
    out += "<polygon points=\"";
    for (Index j = 0; j < q.cols(); ++j) {
      if (j > 0) out += " ";
      out += fmt(px(q(0, j))) + "," + fmt(py(q(1, j)));
    }
    out += "\" fill=\"" + color + "\" fill-opacity=\"" + fmt(style.fill_opacity) +
           "\" stroke=\"" + color + "\" stroke-width=\"" + fmt(style.stroke_width) + "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace polycontain::render
