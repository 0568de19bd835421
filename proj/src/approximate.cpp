#include "polycontain/approximate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "polycontain/error.hpp"
#include "polycontain/optimize.hpp"
#include "polycontain/random.hpp"

namespace polycontain::approx {

namespace {

using opt::AffineMatrix;
using opt::LinearModel;
using opt::MatrixVar;
using opt::SignedMatrixVar;
using opt::VarId;

constexpr double kExact = 1e-9;
constexpr double kRadiusFloor = 1e-9;
constexpr double kStationary = 1e-10;
constexpr double kBootstrapInflation = 1.05;
constexpr int kBootstrapDraws = 32;

AffineMatrix C(const Matrix& m) { return AffineMatrix::constant(m); }
AffineMatrix ones_times(Index rows, VarId v) { return AffineMatrix::scaled(Matrix::Ones(rows, 1), v); }

SignedMatrixVar signed_var(LinearModel& m, Index rows, Index cols) {
  return opt::add_signed_matrix_var(m, rows, cols);
}

// Row sums of |v| at most `bound`.
void bound_rows(LinearModel& m, const SignedMatrixVar& v, const AffineMatrix& bound) {
  opt::add_matrix_less_equal(m, opt::row_sums(v.magnitude()), bound);
}

void unit_rows(LinearModel& m, const SignedMatrixVar& v) {
  bound_rows(m, v, C(Matrix::Ones(v.pos.rows, 1)));
}

MatrixVar box_var(LinearModel& m, Index rows, Index cols, double radius) {
  MatrixVar v = opt::add_matrix_var(m, rows, cols);
  for (VarId id : v.ids) m.set_bounds(id, -radius, radius);
  return v;
}

opt::Solution solve(const LinearModel& m) { return opt::default_solver().solve(m); }

// Gamma with target = basis Gamma and ||Gamma||_inf <= 1.
std::optional<Matrix> factor(const Matrix& target, const Matrix& basis) {
  LinearModel model;
  const auto g = signed_var(model, basis.cols(), target.cols());
  opt::add_matrix_equality(model, C(target), basis * g.value());
  unit_rows(model, g);
  const opt::Solution sol = solve(model);
  if (!sol.optimal()) return std::nullopt;
  return sol.value(g.value());
}

// Smallest s with X = basis Gamma, ||Gamma||_inf <= s.
std::optional<double> containment_scale(const Matrix& target, const Matrix& basis) {
  LinearModel model;
  const auto g = signed_var(model, basis.cols(), target.cols());
  const VarId s = model.add_variable(0.0, opt::kInf);
  opt::add_matrix_equality(model, C(target), basis * g.value());
  bound_rows(model, g, ones_times(basis.cols(), s));
  model.set_objective(opt::LinExpr::var(s), opt::Sense::kMinimize);
  const opt::Solution sol = solve(model);
  if (!sol.optimal()) return std::nullopt;
  return sol.value(s);
}

struct Fit {
  double delta = 0.0;
  Matrix gamma;
};

// min ||target - basis Gamma||_inf over ||Gamma||_inf <= 1.
Fit best_fit(const Matrix& target, const Matrix& basis) {
  LinearModel model;
  const auto g = signed_var(model, basis.cols(), target.cols());
  const auto d = signed_var(model, target.rows(), target.cols());
  const VarId delta = model.add_variable(0.0, opt::kInf);
  opt::add_matrix_equality(model, C(target), basis * g.value() + d.value());
  unit_rows(model, g);
  bound_rows(model, d, ones_times(target.rows(), delta));
  model.set_objective(opt::LinExpr::var(delta), opt::Sense::kMinimize);
  const opt::Solution sol = solve(model);
  if (!sol.optimal()) fail(ErrorCode::kSolverFailure, "reduction: distance LP did not solve");
  return {sol.value(delta), sol.value(g.value())};
}

void require_same_rows(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows()) {
    fail(ErrorCode::kDimensionMismatch, std::string(what) + ": generators in R^" +
                                            std::to_string(a.rows()) + " and R^" +
                                            std::to_string(b.rows()));
  }
}

// X = R M with ||row j of M||_1 <= d_j and sum d minimal; returns R diag(d)
// inflated, or nullopt when range(R) misses X.
std::optional<Matrix> bootstrap(const Matrix& X, const Matrix& R) {
  const Index r = R.cols();
  LinearModel model;
  const auto M = signed_var(model, r, X.cols());
  const MatrixVar d = opt::add_matrix_var(model, r, 1, true);
  opt::add_matrix_equality(model, C(X), R * M.value());
  opt::add_matrix_less_equal(model, opt::row_sums(M.magnitude()), AffineMatrix(d));
  opt::LinExpr total;
  for (VarId id : d.ids) total.add_term(id, 1.0);
  model.set_objective(total, opt::Sense::kMinimize);
  const opt::Solution sol = solve(model);
  if (!sol.optimal()) return std::nullopt;
  const Vector dv = sol.value(AffineMatrix(d)).col(0);
  return Matrix(kBootstrapInflation * R * dv.asDiagonal());
}

void validate(const AlternationConfig& cfg) {
  if (!(cfg.max_entry_step > 0) || !std::isfinite(cfg.max_entry_step)) {
    fail(ErrorCode::kInvalidInput, "alternation: max_entry_step must be positive");
  }
  if (cfg.max_iters < 0 || cfg.stall_window < 1 || !(cfg.stall_tolerance >= 0)) {
    fail(ErrorCode::kInvalidInput, "alternation: bad iteration or stall settings");
  }
}

void validate_reduction(const Zonotope& z, Index target, const AlternationConfig& cfg) {
  geo::validate(z);
  validate(cfg);
  if (target < 1 || target > z.cols()) {
    fail(ErrorCode::kInvalidInput, "reduce: target_cols must lie in [1, " +
                                       std::to_string(z.cols()) + "], got " +
                                       std::to_string(target));
  }
}

ReductionResult unchanged(const Zonotope& z, ReductionMode mode) {
  ReductionResult r;
  r.reduced = {z, 0.0, mode};
  r.trace.iterates.push_back({z.generator, 0.0});
  r.trace.converged = true;
  return r;
}

ReductionResult finish(const Zonotope& z, ReductionMode mode, AlternationTrace trace) {
  ReductionResult r;
  const Iterate& last = trace.iterates.back();
  r.reduced = {Zonotope{z.center, last.decision}, last.bound, mode};
  r.trace = std::move(trace);
  return r;
}

}  // namespace

const char* to_string(ReductionMode m) { return m == ReductionMode::kOuter ? "outer" : "inner"; }

StepResult slp_step(const Matrix& current, double current_bound, double radius,
                    const ProposeFn& propose, const VerifyFn& verify) {
  StepResult out{false, current, current_bound};
  const Proposal p = propose(current, radius);
  if (!p.solved) return out;
  if (p.predicted_bound >= current_bound - kStationary * (1.0 + std::abs(current_bound))) {
    out.accepted = true;
    return out;
  }
  const std::optional<double> b = verify(p.next);
  if (!b || *b > current_bound) return out;
  out.accepted = true;
  out.next = p.next;
  out.bound = *b;
  return out;
}

AlternationTrace run_slp(const Matrix& start, double start_bound, const ProposeFn& propose,
                         const VerifyFn& verify, const AlternationConfig& cfg) {
  validate(cfg);
  AlternationTrace trace;
  trace.iterates.push_back({start, start_bound});
  Matrix cur = start;
  double bound = start_bound;
  double radius = cfg.max_entry_step;
  while (trace.iterations < cfg.max_iters) {
    if (bound <= kExact) break;
    StepResult s = slp_step(cur, bound, radius, propose, verify);
    ++trace.iterations;
    if (!s.accepted) {
      ++trace.rejected;
      radius *= 0.5;
      if (radius < kRadiusFloor) return trace;
      continue;
    }
    radius = std::min(2.0 * radius, cfg.max_entry_step);
    cur = std::move(s.next);
    bound = s.bound;
    trace.iterates.push_back({cur, bound});
    const auto k = static_cast<long>(trace.iterates.size()) - 1;
    if (k >= cfg.stall_window) {
      const double before = trace.iterates[static_cast<size_t>(k - cfg.stall_window)].bound;
      if (before - bound <= cfg.stall_tolerance * std::max(before, kExact)) {
        trace.converged = true;
        return trace;
      }
    }
  }
  trace.converged = bound <= kExact;
  return trace;
}

std::optional<double> outer_bound(const Matrix& x, const Matrix& x_red) {
  require_same_rows(x, x_red, "outer_bound");
  if (!factor(x, x_red)) return std::nullopt;
  return best_fit(x_red, x).delta;
}

std::optional<double> inner_bound(const Matrix& x, const Matrix& x_red) {
  require_same_rows(x, x_red, "inner_bound");
  if (!factor(x_red, x)) return std::nullopt;
  return best_fit(x, x_red).delta;
}

ReductionResult reduce_outer(const Zonotope& z, Index target_cols, const AlternationConfig& cfg) {
  validate_reduction(z, target_cols, cfg);
  const Matrix& X = z.generator;
  const Index n = z.dim();
  const Index k = z.cols();
  const Index r = target_cols;
  if (r == k) return unchanged(z, ReductionMode::kOuter);

  Rng rng(cfg.seed);
  Matrix start;
  double b0 = opt::kInf;
  for (int draw = 0; draw < kBootstrapDraws; ++draw) {
    const std::optional<Matrix> cand = bootstrap(X, rng.matrix(n, r, -1.0, 1.0));
    if (!cand) continue;
    const std::optional<double> b = outer_bound(X, *cand);
    if (b && *b < b0) {
      b0 = *b;
      start = *cand;
    }
  }
  if (!std::isfinite(b0)) {
    fail(ErrorCode::kInitializationFailure,
         "reduce_outer: no initial zonotope with " + std::to_string(r) + " generators contains Z");
  }

  const ProposeFn propose = [&](const Matrix& cur, double radius) {
    Proposal p;
    const std::optional<Matrix> g0 = factor(X, cur);
    if (!g0) return p;
    LinearModel m;
    const MatrixVar step = box_var(m, n, r, radius);
    const auto G0 = signed_var(m, r, k);
    const auto G1 = signed_var(m, k, r);
    const auto D = signed_var(m, n, r);
    const VarId delta = m.add_variable(0.0, opt::kInf);
    // X_red' G0' ~ X_red G0' + (X_red' - X_red) G0
    opt::add_matrix_equality(m, C(X), cur * G0.value() + AffineMatrix(step) * *g0);
    opt::add_matrix_equality(m, C(cur) + AffineMatrix(step), X * G1.value() + D.value());
    unit_rows(m, G0);
    unit_rows(m, G1);
    bound_rows(m, D, ones_times(n, delta));
    m.set_objective(opt::LinExpr::var(delta), opt::Sense::kMinimize);
    const opt::Solution sol = solve(m);
    if (!sol.optimal()) return p;
    const Matrix moved = cur + sol.value(AffineMatrix(step));
    const std::optional<double> s = containment_scale(X, moved);
    if (!s) return p;
    p.solved = true;
    p.next = std::max(1.0, *s) * moved;
    p.predicted_bound = sol.value(delta);
    return p;
  };
  const VerifyFn verify = [&](const Matrix& cand) { return outer_bound(X, cand); };
  return finish(z, ReductionMode::kOuter, run_slp(start, b0, propose, verify, cfg));
}

ReductionResult reduce_inner(const Zonotope& z, Index target_cols, const AlternationConfig& cfg) {
  validate_reduction(z, target_cols, cfg);
  const Matrix& X = z.generator;
  const Index n = z.dim();
  const Index k = z.cols();
  const Index r = target_cols;
  if (r == k) return unchanged(z, ReductionMode::kInner);

  // Start from the r longest generators.
  std::vector<Index> order(static_cast<size_t>(k));
  for (Index j = 0; j < k; ++j) order[static_cast<size_t>(j)] = j;
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return X.col(a).norm() > X.col(b).norm();
  });
  Matrix start(n, r);
  for (Index j = 0; j < r; ++j) start.col(j) = X.col(order[static_cast<size_t>(j)]);
  const std::optional<double> b0 = inner_bound(X, start);
  if (!b0) fail(ErrorCode::kInitializationFailure, "reduce_inner: initial iterate failed to verify");

  const double stall = cfg.stall_tolerance;
  const ProposeFn propose = [&, stall](const Matrix& cur, double radius) {
    Proposal p;
    const Fit fit = best_fit(X, cur);
    const Matrix& g1 = fit.gamma;
    {
      // Alternation: Gamma1 fixed, X_red = X Gamma0 free.
      LinearModel m;
      const auto G0 = signed_var(m, k, r);
      const auto D = signed_var(m, n, k);
      const VarId delta = m.add_variable(0.0, opt::kInf);
      opt::add_matrix_equality(m, C(X), (X * G0.value()) * g1 + D.value());
      unit_rows(m, G0);
      bound_rows(m, D, ones_times(n, delta));
      m.set_objective(opt::LinExpr::var(delta), opt::Sense::kMinimize);
      const opt::Solution sol = solve(m);
      if (sol.optimal() && sol.value(delta) < fit.delta * (1.0 - stall) - kStationary) {
        p.solved = true;
        p.next = X * sol.value(G0.value());
        p.predicted_bound = sol.value(delta);
        return p;
      }
    }
    // Joint step linearized in (X_red, Gamma1) inside the trust region.
    LinearModel m;
    const auto G0 = signed_var(m, k, r);
    const auto G1 = signed_var(m, r, k);
    const auto D = signed_var(m, n, k);
    const VarId delta = m.add_variable(0.0, opt::kInf);
    const AffineMatrix next = X * G0.value();
    opt::add_matrix_less_equal(m, next - C(cur), C(Matrix::Constant(n, r, radius)));
    opt::add_matrix_less_equal(m, C(cur) - next, C(Matrix::Constant(n, r, radius)));
    opt::add_matrix_equality(m, C(X), next * g1 + cur * G1.value() - C(cur * g1) + D.value());
    unit_rows(m, G0);
    unit_rows(m, G1);
    bound_rows(m, D, ones_times(n, delta));
    m.set_objective(opt::LinExpr::var(delta), opt::Sense::kMinimize);
    const opt::Solution sol = solve(m);
    if (!sol.optimal()) return p;
    p.solved = true;
    p.next = sol.value(next);
    p.predicted_bound = sol.value(delta);
    return p;
  };
  const VerifyFn verify = [&](const Matrix& cand) { return inner_bound(X, cand); };
  return finish(z, ReductionMode::kInner, run_slp(start, *b0, propose, verify, cfg));
}

// ---------------------------------------------------------------------------

namespace {

struct Lifted {
  Matrix H;  // x part
  Matrix F;  // u part
  Vector g;
  Index n = 0;
  Index m = 0;
};

Lifted split(const HPolytope& lifted, Index n) {
  geo::validate(lifted);
  if (n < 1 || n > lifted.dim()) {
    fail(ErrorCode::kInvalidInput, "projection: n must lie in [1, " +
                                       std::to_string(lifted.dim()) + "], got " +
                                       std::to_string(n));
  }
  Lifted l;
  l.n = n;
  l.m = lifted.dim() - n;
  l.H = lifted.H.leftCols(n);
  l.F = lifted.H.rightCols(l.m);
  l.g = lifted.h;
  return l;
}

struct Inside {
  Matrix lambda0;
};

struct Cover {
  double epsilon = 0.0;
  Matrix X1;
  Matrix X2;
  Vector b;
};

// center + {H_x y <= 1} inside the projection.
std::optional<Inside> inside_certificate(const Lifted& l, const Vector& center, const Matrix& Hx) {
  LinearModel m;
  const Index p = l.H.rows();
  const MatrixVar L0 = opt::add_matrix_var(m, p, Hx.rows(), true);
  const MatrixVar G = opt::add_matrix_var(m, l.m, l.n);
  const MatrixVar bu = opt::add_matrix_var(m, l.m, 1);
  opt::add_matrix_equality(m, AffineMatrix(L0) * Hx, C(l.H) + l.F * AffineMatrix(G));
  opt::add_matrix_less_equal(m, AffineMatrix(L0) * Matrix(Vector::Ones(Hx.rows())),
                             C(l.g - l.H * center) - l.F * AffineMatrix(bu));
  const opt::Solution sol = solve(m);
  if (!sol.optimal()) return std::nullopt;
  return Inside{sol.value(AffineMatrix(L0))};
}

// Smallest epsilon with projection inside center + {H_x y <= 1} + epsilon B.
std::optional<Cover> cover_certificate(const Lifted& l, const Vector& center, const Matrix& Hx) {
  LinearModel m;
  const Index p = l.H.rows();
  const Index q = Hx.rows();
  const HPolytope ball = geo::unit_box(l.n);
  const MatrixVar L1 = opt::add_matrix_var(m, q, p, true);
  const MatrixVar L2 = opt::add_matrix_var(m, ball.rows(), p, true);
  const MatrixVar X1 = opt::add_matrix_var(m, l.n, l.n);
  const MatrixVar X2 = opt::add_matrix_var(m, l.n, l.m);
  const MatrixVar b = opt::add_matrix_var(m, l.n, 1);
  const VarId eps = m.add_variable(0.0, opt::kInf);
  const Matrix I = Matrix::Identity(l.n, l.n);
  opt::add_matrix_equality(m, AffineMatrix(L1) * l.H, Hx * AffineMatrix(X1));
  opt::add_matrix_equality(m, AffineMatrix(L1) * l.F, Hx * AffineMatrix(X2));
  opt::add_matrix_less_equal(m, AffineMatrix(L1) * Matrix(l.g),
                             C(Vector::Ones(q)) - Hx * AffineMatrix(b));
  opt::add_matrix_equality(m, AffineMatrix(L2) * l.H, ball.H * (C(I) - AffineMatrix(X1)));
  opt::add_matrix_equality(m, AffineMatrix(L2) * l.F, -1.0 * (ball.H * AffineMatrix(X2)));
  opt::add_matrix_less_equal(m, AffineMatrix(L2) * Matrix(l.g),
                             AffineMatrix::scaled(Matrix(ball.h), eps) + C(ball.H * center) +
                                 ball.H * AffineMatrix(b));
  m.set_objective(opt::LinExpr::var(eps), opt::Sense::kMinimize);
  const opt::Solution sol = solve(m);
  if (!sol.optimal()) return std::nullopt;
  return Cover{sol.value(eps), sol.value(AffineMatrix(X1)), sol.value(AffineMatrix(X2)),
               sol.value(AffineMatrix(b)).col(0)};
}

void require_center(const Lifted& l, const Vector& center) {
  if (center.size() != l.n) {
    fail(ErrorCode::kDimensionMismatch, "projection: center has length " +
                                            std::to_string(center.size()) + ", expected " +
                                            std::to_string(l.n));
  }
  // center +- t e_i in the projection for some t > 0; the cross-polytope they
  // span is a neighbourhood of the center.
  LinearModel m;
  const VarId t = m.add_variable(0.0, 1.0);
  for (Index i = 0; i < l.n; ++i) {
    for (double sign : {1.0, -1.0}) {
      const MatrixVar u = opt::add_matrix_var(m, l.m, 1);
      opt::add_matrix_less_equal(m, l.F * AffineMatrix(u) + AffineMatrix::scaled(sign * l.H.col(i), t),
                                 C(l.g - l.H * center));
    }
  }
  m.set_objective(opt::LinExpr::var(t), opt::Sense::kMaximize);
  const opt::Solution sol = solve(m);
  if (!sol.optimal() || sol.value(t) <= kExact) {
    fail(ErrorCode::kInvalidCenter, "projection: center is not in the interior of the projection");
  }
}

Matrix initial_directions(Index n, Index q, std::uint64_t seed) {
  Matrix D(q, n);
  if (n == 1) {
    for (Index i = 0; i < q; ++i) D(i, 0) = i % 2 == 0 ? 1.0 : -1.0;
    return D;
  }
  if (n == 2) {
    for (Index i = 0; i < q; ++i) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(q);
      D(i, 0) = std::cos(a);
      D(i, 1) = std::sin(a);
    }
    return D;
  }
  Rng rng(seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    for (Index i = 0; i < q; ++i) {
      Vector v = rng.vector(n, -1.0, 1.0);
      D.row(i) = v.normalized().transpose();
    }
    if (geo::is_bounded(HPolytope{D, Vector::Ones(q)})) return D;
  }
  fail(ErrorCode::kInitializationFailure, "projection: could not draw bounded initial directions");
}

// Largest t with center + {D y <= t} inside the projection, as H_x = D / t.
Matrix scaled_start(const Lifted& l, const Vector& center, const Matrix& D) {
  LinearModel m;
  const MatrixVar L0 = opt::add_matrix_var(m, l.H.rows(), D.rows(), true);
  const MatrixVar G = opt::add_matrix_var(m, l.m, l.n);
  const MatrixVar bu = opt::add_matrix_var(m, l.m, 1);
  const VarId t = m.add_variable(0.0, 1e6);
  opt::add_matrix_equality(m, AffineMatrix(L0) * D,
                           AffineMatrix::scaled(l.H, t) + l.F * AffineMatrix(G));
  opt::add_matrix_less_equal(m, AffineMatrix(L0) * Matrix(Vector::Ones(D.rows())),
                             C(l.g - l.H * center) - l.F * AffineMatrix(bu));
  m.set_objective(opt::LinExpr::var(t), opt::Sense::kMaximize);
  const opt::Solution sol = solve(m);
  if (!sol.optimal() || sol.value(t) <= kExact) {
    fail(ErrorCode::kInitializationFailure, "projection: no scaled start fits inside the projection");
  }
  return D / (sol.value(t) * (1.0 - 1e-6));
}

}  // namespace

std::optional<double> projection_bound(const HPolytope& lifted, Index n, const Vector& center,
                                       const Matrix& H_x) {
  const Lifted l = split(lifted, n);
  if (H_x.cols() != n) fail(ErrorCode::kDimensionMismatch, "projection_bound: H_x has wrong width");
  if (!inside_certificate(l, center, H_x)) return std::nullopt;
  const std::optional<Cover> c = cover_certificate(l, center, H_x);
  if (!c) return std::nullopt;
  return c->epsilon;
}

ProjectionResult project_inner(const HPolytope& lifted, Index n, Index num_rows,
                               const Vector& center, const AlternationConfig& cfg,
                               const std::optional<Matrix>& warm_start) {
  validate(cfg);
  const Lifted l = split(lifted, n);
  if (num_rows < n + 1) {
    fail(ErrorCode::kInvalidInput, "project_inner: need at least " + std::to_string(n + 1) +
                                       " rows, got " + std::to_string(num_rows));
  }
  require_center(l, center);
  Matrix start;
  if (warm_start) {
    if (warm_start->rows() != num_rows || warm_start->cols() != n) {
      fail(ErrorCode::kDimensionMismatch, "project_inner: warm start has the wrong shape");
    }
    start = *warm_start;
  } else {
    start = scaled_start(l, center, initial_directions(n, num_rows, cfg.seed));
  }
  // Certificates of the most recently verified H_x, reused by the next proposal.
  Matrix cached_hx;
  Inside cached_in;
  Cover cached_cov;
  const VerifyFn verify = [&](const Matrix& cand) -> std::optional<double> {
    std::optional<Inside> in = inside_certificate(l, center, cand);
    if (!in) return std::nullopt;
    std::optional<Cover> cov = cover_certificate(l, center, cand);
    if (!cov) return std::nullopt;
    cached_hx = cand;
    cached_in = std::move(*in);
    cached_cov = std::move(*cov);
    return cached_cov.epsilon;
  };
  const std::optional<double> e0 = verify(start);
  if (!e0) fail(ErrorCode::kInitializationFailure, "project_inner: initial H_x failed to verify");

  const ProposeFn propose = [&](const Matrix& cur, double radius) {
    Proposal prop;
    if (cur.rows() != cached_hx.rows() || cur != cached_hx) {
      if (!verify(cur)) return prop;
    }
    const Inside* in = &cached_in;
    const Cover* cov = &cached_cov;
    const Index p = l.H.rows();
    const Index q = cur.rows();
    const HPolytope ball = geo::unit_box(n);
    LinearModel m;
    const MatrixVar step = box_var(m, q, n, radius);
    const AffineMatrix S(step);
    const MatrixVar L0 = opt::add_matrix_var(m, p, q, true);
    const MatrixVar G = opt::add_matrix_var(m, l.m, n);
    const MatrixVar bu = opt::add_matrix_var(m, l.m, 1);
    const MatrixVar L1 = opt::add_matrix_var(m, q, p, true);
    const MatrixVar L2 = opt::add_matrix_var(m, ball.rows(), p, true);
    const MatrixVar X1 = opt::add_matrix_var(m, n, n);
    const MatrixVar X2 = opt::add_matrix_var(m, n, l.m);
    const MatrixVar b = opt::add_matrix_var(m, n, 1);
    const VarId eps = m.add_variable(0.0, opt::kInf);
    const Matrix I = Matrix::Identity(n, n);
    opt::add_matrix_equality(m, AffineMatrix(L0) * cur + in->lambda0 * S,
                             C(l.H) + l.F * AffineMatrix(G));
    opt::add_matrix_less_equal(m, AffineMatrix(L0) * Matrix(Vector::Ones(q)),
                               C(l.g - l.H * center) - l.F * AffineMatrix(bu));
    opt::add_matrix_equality(m, AffineMatrix(L1) * l.H, cur * AffineMatrix(X1) + S * cov->X1);
    opt::add_matrix_equality(m, AffineMatrix(L1) * l.F, cur * AffineMatrix(X2) + S * cov->X2);
    opt::add_matrix_less_equal(m, AffineMatrix(L1) * Matrix(l.g),
                               C(Vector::Ones(q)) - cur * AffineMatrix(b) - S * Matrix(cov->b));
    opt::add_matrix_equality(m, AffineMatrix(L2) * l.H, ball.H * (C(I) - AffineMatrix(X1)));
    opt::add_matrix_equality(m, AffineMatrix(L2) * l.F, -1.0 * (ball.H * AffineMatrix(X2)));
    opt::add_matrix_less_equal(m, AffineMatrix(L2) * Matrix(l.g),
                               AffineMatrix::scaled(Matrix(ball.h), eps) + C(ball.H * center) +
                                   ball.H * AffineMatrix(b));
    m.set_objective(opt::LinExpr::var(eps), opt::Sense::kMinimize);
    const opt::Solution sol = solve(m);
    if (!sol.optimal()) return prop;
    prop.solved = true;
    prop.next = cur + sol.value(S);
    prop.predicted_bound = sol.value(eps);
    return prop;
  };
  ProjectionResult out;
  out.trace = run_slp(start, *e0, propose, verify, cfg);
  const Iterate& last = out.trace.iterates.back();
  out.H_x = last.decision;
  out.center = center;
  out.epsilon = last.bound;
  out.set = HPolytope{out.H_x, Vector::Ones(num_rows) + out.H_x * center};
  return out;
}

HPolytope mpc_feasible_set(const Matrix& A, const Matrix& B, Index horizon, double x_bound,
                           double u_bound) {
  const Index n = A.rows();
  if (A.cols() != n || B.rows() != n || B.cols() < 1) {
    fail(ErrorCode::kDimensionMismatch, "mpc_feasible_set: A must be square and B must match it");
  }
  if (horizon < 1 || !(x_bound > 0) || !(u_bound > 0)) {
    fail(ErrorCode::kInvalidInput, "mpc_feasible_set: need horizon >= 1 and positive bounds");
  }
  const Index mu = B.cols();
  const Index dim = n + horizon * mu;
  std::vector<Matrix> rows;
  std::vector<Vector> rhs;
  // State x_t as a linear map of (x_0, u_0..u_{N-1}).
  Matrix xt = Matrix::Zero(n, dim);
  xt.leftCols(n) = Matrix::Identity(n, n);
  for (Index t = 0; t <= horizon; ++t) {
    rows.push_back(xt);
    rows.push_back(-xt);
    rhs.push_back(Vector::Constant(2 * n, x_bound));
    if (t < horizon) {
      Matrix next = A * xt;
      next.middleCols(n + t * mu, mu) += B;
      xt = next;
    }
  }
  rows.push_back(xt);
  rows.push_back(-xt);
  rhs.push_back(Vector::Zero(2 * n));
  Matrix U = Matrix::Zero(horizon * mu, dim);
  U.rightCols(horizon * mu) = Matrix::Identity(horizon * mu, horizon * mu);
  rows.push_back(U);
  rows.push_back(-U);
  rhs.push_back(Vector::Constant(2 * horizon * mu, u_bound));
  return geo::make_hpolytope(numerics::vstack(rows), numerics::concat(rhs));
}

HPolytope mpc_example(Index horizon) {
  Matrix A(2, 2);
  A << 1.0, 0.1, -0.1, 1.0;
  Matrix B(2, 1);
  B << 0.0, 0.1;
  return mpc_feasible_set(A, B, horizon, 1.0, 1.0);
}

}  // namespace polycontain::approx
