#include "polycontain/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polycontain/containment.hpp"
#include "polycontain/error.hpp"
#include "polycontain/optimize.hpp"
#include "polycontain/random.hpp"

namespace polycontain::metrics {

namespace {

using contain::CircumbodyTerm;
using contain::InbodyTerm;

HPolytope resolve_ball(const std::optional<HPolytope>& ball, Index n) {
  if (!ball) return geo::unit_box(n);
  geo::validate(*ball);
  if (ball->dim() != n) {
    fail(ErrorCode::kDimensionMismatch, "ball lives in R^" + std::to_string(ball->dim()) +
                                            " but the sets in R^" + std::to_string(n));
  }
  return *ball;
}

void add_directed(opt::LinearModel& model, const AHPolytope& x1, const AHPolytope& x2,
                  const HPolytope& ball, opt::VarId d) {
  contain::encode_sum_circumbody(
      model, InbodyTerm::fixed(x1),
      {CircumbodyTerm::fixed(x2), CircumbodyTerm::scaled_ball(ball, d)});
}

double minimize(opt::LinearModel& model, opt::VarId d, const char* what) {
  model.set_objective(opt::LinExpr::var(d), opt::Sense::kMinimize);
  const opt::Solution s = opt::default_solver().solve(model);
  if (!s.optimal()) {
    fail(ErrorCode::kSolverFailure,
         std::string(what) + ": distance LP ended with status " + opt::to_string(s.status));
  }
  return std::max(0.0, s.value(d));
}

void require_same_dim(Index a, Index b) {
  if (a != b) {
    fail(ErrorCode::kDimensionMismatch, "hausdorff: sets live in R^" + std::to_string(a) +
                                            " and R^" + std::to_string(b));
  }
}

}  // namespace

double directed_upper(const AHPolytope& x1, const AHPolytope& x2,
                      const std::optional<HPolytope>& ball) {
  require_same_dim(x1.dim(), x2.dim());
  const HPolytope b = resolve_ball(ball, x1.dim());
  opt::LinearModel model;
  const opt::VarId d = model.add_variable(0.0, opt::kInf);
  add_directed(model, x1, x2, b, d);
  return minimize(model, d, "directed_upper");
}

HausdorffResult hausdorff_upper(const AHPolytope& x1, const AHPolytope& x2,
                                const std::optional<HPolytope>& ball) {
  require_same_dim(x1.dim(), x2.dim());
  HausdorffResult r;
  r.ball = resolve_ball(ball, x1.dim());
  r.d12_upper = directed_upper(x1, x2, r.ball);
  r.d21_upper = directed_upper(x2, x1, r.ball);
  r.d_upper = std::max(r.d12_upper, r.d21_upper);
  opt::LinearModel joint;
  const opt::VarId d = joint.add_variable(0.0, opt::kInf);
  add_directed(joint, x1, x2, r.ball, d);
  add_directed(joint, x2, x1, r.ball, d);
  r.d_joint = minimize(joint, d, "hausdorff_upper");
  return r;
}

double zonotope_directed_upper(const Zonotope& z1, const Zonotope& z2) {
  geo::validate(z1);
  geo::validate(z2);
  require_same_dim(z1.dim(), z2.dim());
  const Index n = z1.dim();
  const Index ny = z2.cols();
  opt::LinearModel model;
  const opt::VarId d = model.add_variable(0.0, opt::kInf);
  const auto g = opt::add_signed_matrix_var(model, ny, z1.cols());
  const auto b = opt::add_signed_matrix_var(model, ny, 1);
  const auto e = opt::add_signed_matrix_var(model, n, z1.cols());
  const auto f = opt::add_signed_matrix_var(model, n, 1);
  using opt::AffineMatrix;
  opt::add_matrix_equality(model, AffineMatrix::constant(z1.generator),
                           z2.generator * g.value() + e.value());
  opt::add_matrix_equality(model, AffineMatrix::column(z2.center - z1.center),
                           z2.generator * b.value() + f.value());
  opt::add_matrix_less_equal(model, opt::row_sums(g.magnitude()) + b.magnitude(),
                             AffineMatrix::column(Vector::Ones(ny)));
  opt::add_matrix_less_equal(model, opt::row_sums(e.magnitude()) + f.magnitude(),
                             AffineMatrix::scaled(Matrix::Ones(n, 1), d));
  return minimize(model, d, "zonotope_directed_upper");
}

HausdorffResult zonotope_hausdorff_upper(const Zonotope& z1, const Zonotope& z2) {
  HausdorffResult r;
  r.ball = geo::unit_box(std::max<Index>(z1.dim(), 1));
  r.d12_upper = zonotope_directed_upper(z1, z2);
  r.d21_upper = zonotope_directed_upper(z2, z1);
  r.d_upper = std::max(r.d12_upper, r.d21_upper);
  r.d_joint = r.d_upper;
  return r;
}

Matrix sample_box_boundary(Index n, Index count, std::uint64_t seed) {
  if (n < 1 || count < 1) fail(ErrorCode::kInvalidInput, "sample_box_boundary: n and count >= 1");
  Rng rng(seed);
  Matrix out(n, count);
  for (Index k = 0; k < count; ++k) {
    const auto facet = rng.integer(0, 2 * n - 1);
    for (Index i = 0; i < n; ++i) out(i, k) = rng.uniform(-1.0, 1.0);
    out(facet % n, k) = facet < n ? 1.0 : -1.0;
  }
  return out;
}

double hausdorff_lower_sampling(const AHPolytope& x1, const AHPolytope& x2, Index directions,
                                std::uint64_t seed, const std::optional<HPolytope>& ball) {
  require_same_dim(x1.dim(), x2.dim());
  if (directions < 1) fail(ErrorCode::kInvalidInput, "hausdorff_lower_sampling: directions >= 1");
  const HPolytope b = resolve_ball(ball, x1.dim());
  const AHPolytope ball_set = geo::as_ahpolytope(b);
  const Matrix dirs = sample_box_boundary(x1.dim(), directions, seed);
  double best = 0.0;
  for (Index k = 0; k < dirs.cols(); ++k) {
    const Vector c = dirs.col(k);
    const double norm = geo::support(ball_set, c);
    if (!(norm > 0)) continue;
    const double gap = std::abs(geo::support(x1, c) - geo::support(x2, c));
    best = std::max(best, gap / norm);
  }
  return best;
}

}  // namespace polycontain::metrics
