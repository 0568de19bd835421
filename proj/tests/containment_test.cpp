#include "polycontain/containment.hpp"

#include <gtest/gtest.h>

#include "instances.hpp"
#include "polycontain/error.hpp"
#include "polycontain/oracle.hpp"
#include "polycontain/random.hpp"

namespace polycontain::contain {
namespace {

using geo::as_ahpolytope;
using geo::point_set;
using geo::unit_box;

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

HPolytope box_at(const Vector& c, double r) {
  HPolytope b = unit_box(c.size());
  b.h = r * b.h + b.H * c;
  return b;
}

HPolytope scaled(const HPolytope& p, double s) { return {p.H, s * p.h}; }

bool feasible(opt::LinearModel& m) { return opt::default_solver().solve(m).optimal(); }

ContainmentQuery query(AHPolytope in, Circumbody out, std::optional<Encoding> m = {}) {
  return {{std::move(in)}, std::move(out), m};
}

TEST(Lemma1, SquareInDoubleSquare) {
  opt::LinearModel m;
  const auto v = encode_h_in_h(m, unit_box(2), scaled(unit_box(2), 2));
  const opt::Solution s = opt::default_solver().solve(m);
  ASSERT_TRUE(s.optimal());
  const Certificate c = extract(v, s);
  EXPECT_EQ(c.encoding, Encoding::kLemma1);
  EXPECT_GE(c.lambdas[0].minCoeff(), -1e-9);
  // With the doubled square written as {0.5 [I; -I] x <= 1}, 0.5 I is a witness.
  const HPolytope doubled{0.5 * unit_box(2).H, Vector::Ones(4)};
  const auto q = query(as_ahpolytope(unit_box(2)), Circumbody::h(doubled));
  Certificate witness = c;
  witness.lambdas[0] = 0.5 * Matrix::Identity(4, 4);
  EXPECT_LE(certificate_residual(q, witness), 1e-12);
  EXPECT_EQ(check(q).verdict, Verdict::kContainedCertified);
}

TEST(Lemma1, DoubleSquareNotInSquareIsRefuted) {
  opt::LinearModel m;
  encode_h_in_h(m, scaled(unit_box(2), 2), unit_box(2));
  EXPECT_FALSE(feasible(m));
  const CheckResult r =
      check(query(as_ahpolytope(scaled(unit_box(2), 2)), Circumbody::h(unit_box(2))));
  EXPECT_EQ(r.encoding, Encoding::kLemma1);
  EXPECT_EQ(r.verdict, Verdict::kRefuted);
}

TEST(Cor2, PointMembership) {
  const auto in = check(query(point_set(vec({0.5, -0.5})), Circumbody::h(unit_box(2))));
  EXPECT_EQ(in.verdict, Verdict::kContainedCertified);
  EXPECT_EQ(in.encoding, Encoding::kCor2);
  const auto out = check(query(point_set(vec({1.5, 0})), Circumbody::h(unit_box(2))));
  EXPECT_EQ(out.verdict, Verdict::kRefuted);
}

TEST(Cor2, UnitZonotopeInSquare) {
  const auto r = check(query(as_ahpolytope(Zonotope{Vector::Zero(2), Matrix::Identity(2, 2)}),
                             Circumbody::h(unit_box(2))));
  ASSERT_EQ(r.verdict, Verdict::kContainedCertified);
  // Lambda H_x = H_y with both equal to [I; -I] forces the identity pattern.
  EXPECT_TRUE(r.certificate->lambdas[0].isApprox(Matrix::Identity(4, 4), 1e-7));
}

TEST(Thm1, SetInItself) {
  const AHPolytope p = as_ahpolytope(testdata::skewed_inbody());
  opt::LinearModel m;
  encode_ah_in_ah(m, InbodyTerm::fixed(p), p);
  EXPECT_TRUE(feasible(m));
}

TEST(Thm1, SkewedPair) {
  const AHPolytope x = as_ahpolytope(testdata::skewed_inbody());
  const auto yes = check(query(x, Circumbody::ah(as_ahpolytope(testdata::skewed_circumbody())),
                               Encoding::kThm1));
  EXPECT_EQ(yes.verdict, Verdict::kContainedCertified);
  const auto no = check(query(
      x, Circumbody::ah(as_ahpolytope(testdata::skewed_circumbody_dropped())), Encoding::kThm1));
  // Y is wide, so the encoding is only sufficient.
  EXPECT_EQ(no.verdict, Verdict::kNotCertified);
  const auto autoroute =
      check(query(x, Circumbody::ah(as_ahpolytope(testdata::skewed_circumbody()))));
  EXPECT_EQ(autoroute.encoding, Encoding::kThm3);
  EXPECT_EQ(autoroute.verdict, Verdict::kContainedCertified);
}

TEST(Thm3, SkewedPairBothWays) {
  const auto x = as_ahpolytope(testdata::skewed_inbody());
  const auto ok = check(
      query(x, Circumbody::ah(as_ahpolytope(testdata::skewed_circumbody())), Encoding::kThm3));
  ASSERT_EQ(ok.verdict, Verdict::kContainedCertified);
  const auto q =
      query(x, Circumbody::ah(as_ahpolytope(testdata::skewed_circumbody())), Encoding::kThm3);
  EXPECT_LE(certificate_residual(q, *ok.certificate), 1e-7);
  const auto no = check(query(
      x, Circumbody::ah(as_ahpolytope(testdata::skewed_circumbody_dropped())), Encoding::kThm3));
  EXPECT_EQ(no.verdict, Verdict::kNotCertified);
}

TEST(Thm3, TightPairScalingGap) {
  const auto x = as_ahpolytope(testdata::tight_inbody());
  const auto y = as_ahpolytope(testdata::tight_circumbody());
  EXPECT_TRUE(oracle::containment_oracle(x, y));
  const auto q = query(x, Circumbody::ah(y), Encoding::kThm3);
  EXPECT_EQ(check(q).verdict, Verdict::kNotCertified);
  const ScalingResult s = max_scaling(q);
  ASSERT_TRUE(s.feasible);
  EXPECT_NEAR(s.lambda, 0.9915, 1e-3);
}

TEST(Thm3, HalfGamma) {
  opt::LinearModel m;
  const auto v = encode_zono_in_zono(
      m, InbodyTerm::fixed(as_ahpolytope(Zonotope{Vector::Zero(2), Matrix::Identity(2, 2)})),
      Zonotope{Vector::Zero(2), 2 * Matrix::Identity(2, 2)});
  const auto s = opt::default_solver().solve(m);
  ASSERT_TRUE(s.optimal());
  EXPECT_TRUE(extract(v, s).gammas[0].isApprox(0.5 * Matrix::Identity(2, 2), 1e-9));
}

TEST(MaxScaling, IdenticalZonotopes) {
  const auto z = as_ahpolytope(testdata::skewed_circumbody());
  const ScalingResult s = max_scaling(query(z, Circumbody::ah(z), Encoding::kThm3));
  EXPECT_NEAR(s.lambda, 1.0, 1e-7);
}

TEST(MaxScaling, Monotone) {
  const auto x = as_ahpolytope(testdata::tight_inbody());
  const auto y = as_ahpolytope(testdata::tight_circumbody());
  const double star = max_scaling(query(x, Circumbody::ah(y), Encoding::kThm3)).lambda;
  for (double f : {0.0, 0.25, 0.5, 0.9, 0.999}) {
    const auto q = query(geo::scale_about_center(x, f * star), Circumbody::ah(y), Encoding::kThm3);
    EXPECT_EQ(check(q).verdict, Verdict::kContainedCertified) << f;
  }
  const auto over = query(geo::scale_about_center(x, 1.01 * star), Circumbody::ah(y),
                          Encoding::kThm3);
  EXPECT_EQ(check(over).verdict, Verdict::kNotCertified);
}

TEST(Prop2, SingleTermMatchesCor2) {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const auto z = as_ahpolytope(Zonotope{rng.vector(2, -0.5, 0.5), rng.matrix(2, 3, -0.6, 0.6)});
    opt::LinearModel a;
    encode_sum_inbody(a, {InbodyTerm::fixed(z)}, unit_box(2));
    opt::LinearModel b;
    encode_ah_in_h(b, InbodyTerm::fixed(z), unit_box(2));
    EXPECT_EQ(a.num_constraints(), b.num_constraints());
    EXPECT_EQ(feasible(a), feasible(b));
  }
}

TEST(Prop2, Segments) {
  const auto sx = as_ahpolytope(Zonotope{Vector::Zero(2), (Matrix(2, 1) << 1, 0).finished()});
  const auto sy = as_ahpolytope(Zonotope{Vector::Zero(2), (Matrix(2, 1) << 0, 1).finished()});
  ContainmentQuery q{{sx, sy}, Circumbody::h(unit_box(2)), {}};
  const auto r = check(q);
  EXPECT_EQ(r.encoding, Encoding::kProp2);
  EXPECT_EQ(r.verdict, Verdict::kContainedCertified);
  EXPECT_LE(certificate_residual(q, *r.certificate), 1e-7);

  const auto wide = as_ahpolytope(Zonotope{Vector::Zero(2), (Matrix(2, 1) << 0.6, 0).finished()});
  ContainmentQuery too_big{{wide, wide}, Circumbody::h(unit_box(2)), {}};
  EXPECT_EQ(check(too_big).verdict, Verdict::kRefuted);
  EXPECT_FALSE(oracle::containment_oracle(geo::minkowski_sum(wide, wide),
                                          as_ahpolytope(unit_box(2))));
}

TEST(Prop3, SummandInSum) {
  const auto p1 = as_ahpolytope(testdata::triangle());
  const auto p2 = as_ahpolytope(box_at(vec({0, 0}), 0.5));
  const auto r = check(query(p1, Circumbody::sum({p1, p2})));
  EXPECT_EQ(r.encoding, Encoding::kProp3);
  EXPECT_EQ(r.verdict, Verdict::kContainedCertified);
  EXPECT_EQ(check(query(p2, Circumbody::sum({p1, p2}))).verdict, Verdict::kContainedCertified);
}

TEST(Prop3, TriangleBarScaling) {
  const auto p1 = as_ahpolytope(testdata::triangle());
  const auto p2 = as_ahpolytope(testdata::bar());
  const auto sum = as_ahpolytope(testdata::triangle_bar_sum());
  const auto q = query(sum, Circumbody::sum({p1, p2}));
  EXPECT_EQ(check(q).verdict, Verdict::kNotCertified);
  const ScalingResult s = max_scaling(q);
  ASSERT_TRUE(s.feasible);
  EXPECT_NEAR(s.lambda, 0.68, 0.01);
}

TEST(Prop3, DegeneratePoints) {
  const auto zero = point_set(Vector::Zero(2));
  EXPECT_EQ(check(query(zero, Circumbody::sum({zero, zero}))).verdict,
            Verdict::kContainedCertified);
}

TEST(Cor4, PartsInHull) {
  const auto a = as_ahpolytope(box_at(vec({-2, 0}), 1));
  const auto b = as_ahpolytope(testdata::triangle());
  for (const auto& p : {a, b}) {
    const auto q = query(p, Circumbody::hull({a, b}));
    const auto r = check(q);
    EXPECT_EQ(r.encoding, Encoding::kCor4);
    ASSERT_EQ(r.verdict, Verdict::kContainedCertified);
    EXPECT_LE(certificate_residual(q, *r.certificate), 1e-7);
  }
}

TEST(Cor4, PointParts) {
  const std::vector<AHPolytope> pts{point_set(vec({0, 0})), point_set(vec({1, 0})),
                                    point_set(vec({0, 1}))};
  // Only point inbodies can be certified: interpolated centers pass, a
  // segment between two of the points does not.
  EXPECT_EQ(check(query(point_set(vec({0.5, 0})), Circumbody::hull(pts))).verdict,
            Verdict::kContainedCertified);
  EXPECT_EQ(check(query(point_set(vec({0.3, 0.3})), Circumbody::hull(pts))).verdict,
            Verdict::kContainedCertified);
  EXPECT_EQ(check(query(point_set(vec({0.6, 0.6})), Circumbody::hull(pts))).verdict,
            Verdict::kNotCertified);
  const auto seg = as_ahpolytope(Zonotope{vec({0.5, 0}), (Matrix(2, 1) << 0.5, 0).finished()});
  EXPECT_EQ(check(query(seg, Circumbody::hull(pts), Encoding::kCor4)).verdict,
            Verdict::kNotCertified);
  EXPECT_TRUE(oracle::containment_oracle(seg, geo::convex_hull_ahrep(pts)));
  // A full-dimensional inbody cannot be certified against points.
  const auto tiny = as_ahpolytope(Zonotope{vec({0.2, 0.2}), 0.01 * Matrix::Identity(2, 2)});
  EXPECT_EQ(check(query(tiny, Circumbody::hull(pts), Encoding::kCor4)).verdict,
            Verdict::kNotCertified);
  EXPECT_TRUE(oracle::containment_oracle(tiny, geo::convex_hull_ahrep(pts)));
}

TEST(Cor5, SinglePartIsThm3) {
  const auto x = as_ahpolytope(testdata::tight_inbody());
  const auto y = as_ahpolytope(testdata::tight_circumbody());
  const double a = max_scaling(query(x, Circumbody::hull({y}), Encoding::kCor5)).lambda;
  const double b = max_scaling(query(x, Circumbody::ah(y), Encoding::kThm3)).lambda;
  EXPECT_NEAR(a, b, 1e-7);
}

TEST(Cor5, MidpointZonotope) {
  Rng rng(9);
  const Matrix g = rng.matrix(2, 3, -1, 1);
  const Zonotope z1{vec({-1, 0}), g};
  const Zonotope z2{vec({1, 0.5}), g};
  const Zonotope mid{vec({0, 0.25}), g};
  const auto parts = std::vector<AHPolytope>{as_ahpolytope(z1), as_ahpolytope(z2)};
  const auto q = query(as_ahpolytope(mid), Circumbody::hull(parts));
  const auto r = check(q);
  EXPECT_EQ(r.encoding, Encoding::kCor5);
  ASSERT_EQ(r.verdict, Verdict::kContainedCertified);
  EXPECT_LE(certificate_residual(q, *r.certificate), 1e-7);
  EXPECT_EQ(check(query(as_ahpolytope(z1), Circumbody::hull(parts))).verdict,
            Verdict::kContainedCertified);
  EXPECT_TRUE(oracle::containment_oracle(as_ahpolytope(mid), geo::convex_hull_ahrep(parts)));
}

TEST(Prop5, PicksTheRightBox) {
  const std::vector<AHPolytope> boxes{as_ahpolytope(box_at(vec({-3, 0}), 1)),
                                      as_ahpolytope(box_at(vec({0, 0}), 1)),
                                      as_ahpolytope(box_at(vec({3, 0}), 1))};
  const auto in = as_ahpolytope(Zonotope{vec({0.2, 0.1}), 0.5 * Matrix::Identity(2, 2)});
  const auto q = query(in, Circumbody::disjunction(boxes));
  const auto r = check(q);
  EXPECT_EQ(r.encoding, Encoding::kProp5);
  ASSERT_EQ(r.verdict, Verdict::kContainedCertified);
  EXPECT_EQ(r.certificate->mixers, (std::vector<double>{0, 1, 0}));
  EXPECT_LE(certificate_residual(q, *r.certificate), 1e-7);
}

TEST(Prop5, StraddlingIsRefutedWhileHullCertifies) {
  const std::vector<AHPolytope> boxes{as_ahpolytope(box_at(vec({-1, 0}), 1)),
                                      as_ahpolytope(box_at(vec({1, 0}), 1))};
  const auto in = as_ahpolytope(Zonotope{vec({0, 0}), 0.5 * Matrix::Identity(2, 2)});
  EXPECT_EQ(check(query(in, Circumbody::disjunction(boxes))).verdict, Verdict::kRefuted);
  for (const auto& b : boxes) {
    EXPECT_EQ(check(query(in, Circumbody::h(b.base))).verdict, Verdict::kRefuted);
  }
  EXPECT_EQ(check(query(in, Circumbody::hull(boxes))).verdict, Verdict::kContainedCertified);
}

TEST(Prop5, SingleMemberMatchesCor2) {
  Rng rng(10);
  for (int t = 0; t < 20; ++t) {
    const auto z = as_ahpolytope(Zonotope{rng.vector(2, -0.5, 0.5), rng.matrix(2, 3, -0.6, 0.6)});
    const auto a = check(query(z, Circumbody::disjunction({as_ahpolytope(unit_box(2))})));
    const auto b = check(query(z, Circumbody::h(unit_box(2))));
    EXPECT_EQ(a.verdict, b.verdict);
  }
}

TEST(Cor6, SelectsMatchingMember) {
  const auto z1 = as_ahpolytope(testdata::skewed_circumbody());
  const auto z2 = as_ahpolytope(Zonotope{vec({10, 10}), Matrix::Identity(2, 2)});
  const auto r = check(query(z1, Circumbody::disjunction({z2, z1}), Encoding::kCor6));
  ASSERT_EQ(r.verdict, Verdict::kContainedCertified);
  EXPECT_EQ(r.certificate->mixers, (std::vector<double>{0, 1}));
  const auto far = as_ahpolytope(Zonotope{vec({-10, 0}), Matrix::Identity(2, 2)});
  EXPECT_EQ(check(query(far, Circumbody::disjunction({z2, z1}), Encoding::kCor6)).verdict,
            Verdict::kNotCertified);
}

TEST(Cor6, AgreesWithSeparateThm3Calls) {
  Rng rng(12);
  for (int t = 0; t < 100; ++t) {
    const auto x = as_ahpolytope(Zonotope{rng.vector(2, -0.5, 0.5), rng.matrix(2, 2, -0.5, 0.5)});
    std::vector<AHPolytope> ys;
    bool any = false;
    for (int k = 0; k < 3; ++k) {
      ys.push_back(as_ahpolytope(Zonotope{rng.vector(2, -1, 1), rng.matrix(2, 3, -1, 1)}));
      any = any || check(query(x, Circumbody::ah(ys.back()), Encoding::kThm3)).verdict ==
                       Verdict::kContainedCertified;
    }
    const auto r = check(query(x, Circumbody::disjunction(ys), Encoding::kCor6));
    EXPECT_EQ(r.verdict == Verdict::kContainedCertified, any) << "trial " << t;
  }
}

TEST(Necessity, FullColumnRank) {
  Rng rng(13);
  const Matrix y = rng.matrix(3, 2, -1, 1);
  EXPECT_TRUE(necessity_holds(y, unit_box(2).H));
}

TEST(Necessity, ZeroMap) {
  EXPECT_FALSE(necessity_holds(Matrix::Zero(2, 2), Matrix::Identity(2, 2)));
}

TEST(Necessity, WideMapMatchesStackedRank) {
  Rng rng(14);
  for (int t = 0; t < 20; ++t) {
    const Matrix y = rng.matrix(2, 5, -1, 1);
    const Matrix hy = unit_box(5).H;
    const Matrix m = numerics::pseudo_inverse(Matrix(hy.transpose())) * y.transpose();
    Eigen::JacobiSVD<Matrix> range(m, Eigen::ComputeFullU);
    const Index r = (range.singularValues().array() > 1e-9 * range.singularValues()(0)).count();
    const Matrix kernel = numerics::rank_kernel(Matrix(hy.transpose())).kernel_basis;
    const Matrix stacked = numerics::hstack({Matrix(range.matrixU().leftCols(r)), kernel});
    Eigen::JacobiSVD<Matrix> all(stacked);
    const Index rank = (all.singularValues().array() > 1e-9).count();
    EXPECT_EQ(necessity_holds(y, hy), rank == hy.rows());
  }
}

TEST(Routing, MethodMismatchIsRejected) {
  const auto h = as_ahpolytope(unit_box(2));
  const auto z = as_ahpolytope(testdata::skewed_inbody());
  EXPECT_THROW(select_encoding(query(z, Circumbody::h(unit_box(2)), Encoding::kLemma1)), Error);
  EXPECT_THROW(select_encoding(query(z, Circumbody::ah(h), Encoding::kCor5)), Error);
  EXPECT_THROW(select_encoding(query(as_ahpolytope(unit_box(3)), Circumbody::ah(h))), Error);
  EXPECT_EQ(parse_encoding("prop3"), Encoding::kProp3);
  EXPECT_THROW(parse_encoding("bogus"), Error);
}

TEST(Diagnostics, ChebyshevRadius) {
  EXPECT_NEAR(chebyshev_radius(unit_box(2)), 1.0, 1e-9);
  const HPolytope flat{(Matrix(4, 2) << 1, 0, -1, 0, 0, 1, 0, -1).finished(), vec({1, 1, 0, 0})};
  EXPECT_NEAR(chebyshev_radius(flat), 0.0, 1e-9);
}

}  // namespace
}  // namespace polycontain::contain
