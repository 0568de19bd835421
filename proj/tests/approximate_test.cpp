#include "polycontain/approximate.hpp"

#include <gtest/gtest.h>

#include "polycontain/metrics.hpp"
#include "polycontain/oracle.hpp"
#include "polycontain/error.hpp"
#include "polycontain/random.hpp"

namespace polycontain::approx {
namespace {

using geo::as_ahpolytope;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInvalidInput;
}

Zonotope duplicated_box() {
  Matrix x(2, 4);
  x << 1, 0, 1, 0,  //
      0, 1, 0, 1;
  return {Vector::Zero(2), x};
}

Zonotope order6() {
  Rng rng(kDefaultSeed);
  return {Vector::Zero(2), rng.matrix(2, 12, -1, 1)};
}

void expect_monotone(const AlternationTrace& t) {
  for (size_t i = 1; i < t.iterates.size(); ++i) {
    EXPECT_LE(t.iterates[i].bound, t.iterates[i - 1].bound) << "iterate " << i;
  }
}

TEST(Slp, StationaryIterateTakesZeroStep) {
  const Matrix cur = Matrix::Ones(2, 2);
  const ProposeFn propose = [](const Matrix& c, double) { return Proposal{true, c, 1.0}; };
  const VerifyFn verify = [](const Matrix&) { return std::optional<double>(1.0); };
  const StepResult s = slp_step(cur, 1.0, 0.1, propose, verify);
  EXPECT_TRUE(s.accepted);
  EXPECT_EQ(s.next, cur);
  EXPECT_EQ(s.bound, 1.0);
}

TEST(Slp, RejectedStepsHalveTheRegion) {
  std::vector<double> radii;
  const ProposeFn propose = [&](const Matrix& c, double r) {
    radii.push_back(r);
    return Proposal{true, c.array() + r, 0.0};
  };
  // Exact constraints only tolerate moves below 0.01.
  const VerifyFn verify = [](const Matrix& m) -> std::optional<double> {
    if (m(0, 0) > 0.01) return std::nullopt;
    return 0.5;
  };
  AlternationConfig cfg;
  cfg.max_iters = 6;
  const AlternationTrace t = run_slp(Matrix::Zero(1, 1), 1.0, propose, verify, cfg);
  ASSERT_GE(radii.size(), 5u);
  EXPECT_DOUBLE_EQ(radii[1], radii[0] / 2);
  EXPECT_GT(t.rejected, 0);
  expect_monotone(t);
  EXPECT_LT(t.iterates.back().bound, 1.0);
}

TEST(Slp, TinyRegionStalls) {
  const ProposeFn propose = [](const Matrix& c, double) { return Proposal{true, c.array() + 1, 0.0}; };
  const VerifyFn verify = [](const Matrix&) { return std::optional<double>(); };
  AlternationConfig cfg;
  cfg.max_iters = 1000;
  const AlternationTrace t = run_slp(Matrix::Zero(1, 1), 1.0, propose, verify, cfg);
  EXPECT_FALSE(t.converged);
  EXPECT_LT(t.iterations, 100);
}

TEST(Reduce, FullOrderIsUnchanged) {
  const Zonotope z = order6();
  for (auto* f : {&reduce_outer, &reduce_inner}) {
    const ReductionResult r = (*f)(z, 12, {});
    EXPECT_EQ(r.reduced.bound, 0.0);
    EXPECT_EQ(r.reduced.zonotope.generator, z.generator);
  }
}

TEST(Reduce, DuplicatedBoxIsExact) {
  const Zonotope z = duplicated_box();
  for (auto* f : {&reduce_outer, &reduce_inner}) {
    const ReductionResult r = (*f)(z, 2, {});
    EXPECT_LE(r.reduced.bound, 1e-6);
    const Matrix a = r.reduced.zonotope.generator.cwiseAbs();
    // 2I up to column signs and order.
    EXPECT_NEAR(a.colwise().sum().maxCoeff(), 2, 1e-6);
    EXPECT_NEAR(a.rowwise().sum().minCoeff(), 2, 1e-6);
    EXPECT_NEAR(std::abs(r.reduced.zonotope.generator.determinant()), 4, 1e-5);
    EXPECT_LT(r.trace.iterates[1].bound, r.trace.iterates[0].bound);
  }
}

TEST(Reduce, OuterOrder6) {
  const Zonotope z = order6();
  const ReductionResult r = reduce_outer(z, 4, {});
  EXPECT_TRUE(r.trace.converged);
  EXPECT_LE(r.trace.iterations, 100);
  expect_monotone(r.trace);
  for (const auto& it : r.trace.iterates) {
    EXPECT_TRUE(oracle::containment_oracle(z, as_ahpolytope(Zonotope{z.center, it.decision})));
  }
  // Regression anchor from the first verified run.
  EXPECT_NEAR(r.reduced.bound, 0.2376, 1e-3);
  const auto ah = as_ahpolytope(z);
  const auto red = as_ahpolytope(r.reduced.zonotope);
  EXPECT_LE(metrics::hausdorff_lower_sampling(ah, red, 200, 5), r.reduced.bound + 1e-6);
}

TEST(Reduce, InnerOrder6) {
  const Zonotope z = order6();
  const ReductionResult r = reduce_inner(z, 4, {});
  EXPECT_TRUE(r.trace.converged);
  expect_monotone(r.trace);
  for (const auto& it : r.trace.iterates) {
    EXPECT_TRUE(oracle::containment_oracle(Zonotope{z.center, it.decision}, as_ahpolytope(z)));
  }
  EXPECT_NEAR(r.reduced.bound, 0.2152, 1e-3);
  EXPECT_LE(r.trace.iterations, reduce_outer(z, 4, {}).trace.iterations);
}

TEST(Reduce, Deterministic) {
  const Zonotope z = order6();
  const ReductionResult a = reduce_outer(z, 4, {});
  const ReductionResult b = reduce_outer(z, 4, {});
  ASSERT_EQ(a.trace.iterates.size(), b.trace.iterates.size());
  for (size_t i = 0; i < a.trace.iterates.size(); ++i) {
    EXPECT_EQ(a.trace.iterates[i].decision, b.trace.iterates[i].decision);
  }
}

TEST(Reduce, Errors) {
  const Zonotope z = order6();
  EXPECT_EQ(code_of([&] { reduce_outer(z, 1, {}); }), ErrorCode::kInitializationFailure);
  EXPECT_EQ(code_of([&] { reduce_outer(z, 0, {}); }), ErrorCode::kInvalidInput);
  EXPECT_EQ(code_of([&] { reduce_inner(z, 13, {}); }), ErrorCode::kInvalidInput);
  AlternationConfig bad;
  bad.max_entry_step = 0;
  EXPECT_EQ(code_of([&] { reduce_outer(z, 4, bad); }), ErrorCode::kInvalidInput);
}

TEST(Project, IdentityProjection) {
  HPolytope f = geo::unit_box(2);
  f.h *= 2.0;
  Matrix warm = f.H;
  for (Index i = 0; i < warm.rows(); ++i) warm.row(i) /= f.h(i);
  const ProjectionResult r = project_inner(f, 2, 4, Vector::Zero(2), {}, warm);
  EXPECT_LE(r.epsilon, 1e-6);
}

// x in the unit box, |x1 + u| <= 1, |u| <= 1: the projection is the box.
HPolytope coupled() {
  Matrix h(8, 3);
  h << 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0,  //
      1, 0, 1, -1, 0, -1, 0, 0, 1, 0, 0, -1;
  return {h, Vector::Ones(8)};
}

TEST(Project, CoupledBox) {
  AlternationConfig cfg;
  cfg.max_entry_step = 0.05;
  cfg.max_iters = 20;
  const ProjectionResult r = project_inner(coupled(), 2, 6, Vector::Zero(2), cfg);
  expect_monotone(r.trace);
  EXPECT_GT(r.trace.iterates.front().bound, 0.1);
  // Farthest box corner from X bounds epsilon from below.
  const auto x = as_ahpolytope(r.set);
  const auto box = as_ahpolytope(geo::unit_box(2));
  EXPECT_GE(r.epsilon + 1e-6, metrics::hausdorff_lower_sampling(box, x, 200, 1));
  // Samples of X lift into F.
  const geo::AHPolytope proj{Vector::Zero(2), Matrix::Identity(2, 3), coupled()};
  Rng rng(2);
  int inside = 0;
  for (int i = 0; i < 300; ++i) {
    const Vector p = rng.vector(2, -1.5, 1.5);
    if ((r.set.H * p - r.set.h).maxCoeff() > 0) continue;
    ++inside;
    EXPECT_TRUE(oracle::contains_point(proj, p));
  }
  EXPECT_GT(inside, 0);
  EXPECT_LT(r.epsilon, r.trace.iterates.front().bound);
}

TEST(Project, InvalidCenter) {
  EXPECT_EQ(code_of([&] { project_inner(coupled(), 2, 4, Vector::Constant(2, 5.0), {}); }),
            ErrorCode::kInvalidCenter);
  EXPECT_EQ(code_of([&] { project_inner(coupled(), 2, 2, Vector::Zero(2), {}); }),
            ErrorCode::kInvalidInput);
}

TEST(Project, MpcInstance) {
  const HPolytope f = mpc_example();
  EXPECT_EQ(f.rows(), 128);
  EXPECT_EQ(f.dim(), 22);
  AlternationConfig cfg;
  cfg.max_entry_step = 0.05;
  cfg.max_iters = 2;
  const ProjectionResult r = project_inner(f, 2, 4, Vector::Zero(2), cfg);
  expect_monotone(r.trace);
  // Every vertex of X is the x part of a lifted point.
  const Matrix v = oracle::hpolytope_vertices_smalldim(r.set);
  EXPECT_EQ(v.cols(), 4);
  for (Index j = 0; j < v.cols(); ++j) {
    const geo::AHPolytope proj{Vector::Zero(2), Matrix::Identity(2, 22), f};
    EXPECT_TRUE(oracle::contains_point(proj, v.col(j)));
  }
}

}  // namespace
}  // namespace polycontain::approx
