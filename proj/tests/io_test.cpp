#include "polycontain/io.hpp"

#include <gtest/gtest.h>

#include "instances.hpp"
#include "polycontain/error.hpp"
#include "polycontain/render.hpp"

namespace polycontain::io {
namespace {

ErrorCode code_of(std::string_view text) {
  try {
    parse_shape(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

TEST(Io, ZonotopeRoundTrip) {
  const Zonotope z = testdata::skewed_inbody();
  const Shape back = parse_shape(write_shape(Shape::of(z)));
  ASSERT_EQ(back.kind, ShapeKind::kZonotope);
  EXPECT_EQ(back.zonotope.center, z.center);
  EXPECT_EQ(back.zonotope.generator, z.generator);
  EXPECT_EQ(write_shape(back), write_shape(Shape::of(z)));
}

TEST(Io, HAndAhRoundTrip) {
  const HPolytope t = testdata::triangle();
  const Shape h = parse_shape(write_shape(Shape::of(t)));
  ASSERT_EQ(h.kind, ShapeKind::kH);
  EXPECT_EQ(h.h.H, t.H);
  EXPECT_EQ(h.h.h, t.h);
  EXPECT_EQ(h.dim(), 2);

  const AHPolytope a = geo::as_ahpolytope(testdata::tight_circumbody());
  const Shape ah = parse_shape(write_shape(Shape::of(a)));
  ASSERT_EQ(ah.kind, ShapeKind::kAH);
  EXPECT_EQ(ah.ah.map, a.map);
  EXPECT_EQ(ah.ah.base.h, a.base.h);
}

TEST(Io, ParseErrorPosition) {
  try {
    parse_shape("{\n  \"type\": \"H\",\n  \"H\": [[1, 0]],, \n}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("column"), std::string::npos);
  }
}

TEST(Io, SchemaErrors) {
  EXPECT_EQ(code_of("[1, 2]"), ErrorCode::kInvalidInput);
  EXPECT_EQ(code_of(R"({"type": "ball"})"), ErrorCode::kInvalidInput);
  EXPECT_EQ(code_of(R"({"type": "H", "H": [[1, 0], [0]], "h": [1, 1]})"),
            ErrorCode::kInvalidInput);
  EXPECT_EQ(code_of(R"({"type": "zonotope", "center": [0, 0], "generator": [[1, 0]]})"),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(code_of(R"({"type": "H", "H": [[1]], "h": ["x"]})"), ErrorCode::kInvalidInput);
}

TEST(Io, CertificateRoundTrip) {
  contain::ContainmentQuery q;
  q.inbody = {geo::as_ahpolytope(testdata::skewed_inbody())};
  q.circumbody = contain::Circumbody::ah(geo::as_ahpolytope(testdata::skewed_circumbody()));
  const contain::CheckResult r = contain::check(q);
  ASSERT_TRUE(r.certificate.has_value());
  const contain::Certificate c = parse_certificate(certificate_json(*r.certificate));
  EXPECT_EQ(c.encoding, r.certificate->encoding);
  ASSERT_EQ(c.gammas.size(), r.certificate->gammas.size());
  EXPECT_EQ(c.gammas[0], r.certificate->gammas[0]);
  EXPECT_NE(check_json(r).find("contained_certified"), std::string::npos);
}

TEST(Io, TraceCsv) {
  approx::AlternationTrace t;
  t.iterates = {{Matrix::Zero(1, 1), 2.0}, {Matrix::Zero(1, 1), 1.5}};
  EXPECT_EQ(trace_csv(t), "iteration,bound\n0,2\n1,1.5\n");
}

TEST(Render, HullDropsInteriorAndCollinear) {
  Matrix p(2, 6);
  p << 0, 1, 1, 0, 0.5, 0.5,
       0, 0, 1, 1, 0.5, 0;
  const Matrix h = render::hull_2d(p);
  EXPECT_EQ(h.cols(), 4);
  EXPECT_EQ(h.col(0), Vector::Zero(2));
}

TEST(Render, SvgIsDeterministic) {
  const std::vector<AHPolytope> sets = {geo::as_ahpolytope(testdata::skewed_circumbody()),
                                        geo::as_ahpolytope(testdata::skewed_inbody()),
                                        geo::as_ahpolytope(testdata::triangle())};
  const std::string a = render::render_2d(sets);
  EXPECT_EQ(a, render::render_2d(sets));
  EXPECT_EQ(a.rfind("<svg", 0), 0u);
  size_t polygons = 0;
  for (size_t at = a.find("<polygon"); at != std::string::npos; at = a.find("<polygon", at + 1)) {
    ++polygons;
  }
  EXPECT_EQ(polygons, 3u);
}

TEST(Render, EmptyListAndWrongDimension) {
  EXPECT_NE(render::render_2d({}).find("</svg>"), std::string::npos);
  try {
    render::render_2d({geo::as_ahpolytope(geo::unit_box(3))});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(Render, ProjectionOutline) {
  // Square lifted into R^3 and projected; base has 3 columns so candidates are enumerated.
  AHPolytope p = geo::as_ahpolytope(geo::unit_box(3));
  p.center = Vector::Zero(2);
  p.map = Matrix::Zero(2, 3);
  p.map << 1, 0, 0.5,
           0, 1, 0;
  const Matrix h = render::outline(p);
  EXPECT_EQ(h.cols(), 4);
  EXPECT_NEAR(h.row(0).maxCoeff(), 1.5, 1e-9);
}

}  // namespace
}  // namespace polycontain::io
