#include "polycontain/geometry.hpp"

#include <string>

#include "polycontain/error.hpp"
#include "polycontain/optimize.hpp"

namespace polycontain::geo {

namespace {

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_dim(Index a, Index b, const char* op) {
  if (a != b) {
    fail(ErrorCode::kDimensionMismatch, std::string(op) + ": ambient dimensions " +
                                            std::to_string(a) + " and " + std::to_string(b) +
                                            " differ");
  }
}

}  // namespace

void validate(const HPolytope& p) {
  if (p.H.rows() < 1) fail(ErrorCode::kInvalidInput, "HPolytope: needs at least one row");
  if (p.h.size() != p.H.rows()) {
    fail(ErrorCode::kDimensionMismatch, "HPolytope: H is " + shape(p.H) + " but h has " +
                                            std::to_string(p.h.size()) + " entries");
  }
  numerics::require_finite(p.H, "HPolytope H");
  numerics::require_finite(p.h, "HPolytope h");
  if (p.H.cols() > 0 && !numerics::has_full_column_rank(p.H)) {
    fail(ErrorCode::kInvalidInput, "HPolytope: H must have a trivial kernel");
  }
}

void validate(const AHPolytope& p) {
  validate(p.base);
  if (p.map.rows() != p.center.size()) {
    fail(ErrorCode::kDimensionMismatch, "AHPolytope: map is " + shape(p.map) +
                                            " but center has " +
                                            std::to_string(p.center.size()) + " entries");
  }
  if (p.map.cols() != p.base.dim()) {
    fail(ErrorCode::kDimensionMismatch, "AHPolytope: map is " + shape(p.map) +
                                            " but base has dimension " +
                                            std::to_string(p.base.dim()));
  }
  numerics::require_finite(p.center, "AHPolytope center");
  numerics::require_finite(p.map, "AHPolytope map");
}

void validate(const Zonotope& z) {
  if (z.generator.rows() != z.center.size()) {
    fail(ErrorCode::kDimensionMismatch, "Zonotope: generator is " + shape(z.generator) +
                                            " but center has " +
                                            std::to_string(z.center.size()) + " entries");
  }
  numerics::require_finite(z.center, "Zonotope center");
  numerics::require_finite(z.generator, "Zonotope generator");
}

HPolytope make_hpolytope(Matrix H, Vector h) {
  HPolytope p{std::move(H), std::move(h)};
  validate(p);
  return p;
}

AHPolytope make_ahpolytope(Vector center, Matrix map, HPolytope base) {
  AHPolytope p{std::move(center), std::move(map), std::move(base)};
  validate(p);
  return p;
}

Zonotope make_zonotope(Vector center, Matrix generator) {
  Zonotope z{std::move(center), std::move(generator)};
  validate(z);
  return z;
}

HPolytope unit_box(Index n) {
  if (n < 1) fail(ErrorCode::kInvalidInput, "unit_box: n must be >= 1");
  HPolytope p;
  p.H.resize(2 * n, n);
  p.H << Matrix::Identity(n, n), -Matrix::Identity(n, n);
  p.h = Vector::Ones(2 * n);
  return p;
}

AHPolytope as_ahpolytope(const Zonotope& z) {
  if (z.cols() == 0) return point_set(z.center);
  return {z.center, z.generator, unit_box(z.cols())};
}

AHPolytope as_ahpolytope(const HPolytope& p) {
  return {Vector::Zero(p.dim()), Matrix::Identity(p.dim(), p.dim()), p};
}

AHPolytope point_set(const Vector& point) {
  return {point, Matrix(point.size(), 0), HPolytope{Matrix(1, 0), Vector::Zero(1)}};
}

AHPolytope affine_map(const Matrix& G, const Vector& g, const AHPolytope& p) {
  if (G.cols() != p.dim()) {
    fail(ErrorCode::kDimensionMismatch,
         "affine_map: G is " + shape(G) + " but the set lives in R^" + std::to_string(p.dim()));
  }
  if (g.size() != G.rows()) {
    fail(ErrorCode::kDimensionMismatch, "affine_map: offset length does not match G rows");
  }
  return {G * p.center + g, G * p.map, p.base};
}

Zonotope affine_map(const Matrix& G, const Vector& g, const Zonotope& z) {
  if (G.cols() != z.dim() || g.size() != G.rows()) {
    fail(ErrorCode::kDimensionMismatch, "affine_map: G is " + shape(G) +
                                            " but the zonotope lives in R^" +
                                            std::to_string(z.dim()));
  }
  return {G * z.center + g, G * z.generator};
}

AHPolytope scale_about_center(const AHPolytope& p, double s) {
  return {p.center, s * p.map, p.base};
}

Zonotope scale_about_center(const Zonotope& z, double s) { return {z.center, s * z.generator}; }

AHPolytope minkowski_sum(const AHPolytope& a, const AHPolytope& b) {
  require_same_dim(a.dim(), b.dim(), "minkowski_sum");
  AHPolytope out;
  out.center = a.center + b.center;
  out.map = numerics::hstack({a.map, b.map});
  out.base.H = numerics::block_diagonal({a.base.H, b.base.H});
  out.base.h = numerics::concat({a.base.h, b.base.h});
  return out;
}

Zonotope minkowski_sum(const Zonotope& a, const Zonotope& b) {
  require_same_dim(a.dim(), b.dim(), "minkowski_sum");
  return {a.center + b.center, numerics::hstack({a.generator, b.generator})};
}

AHPolytope intersect(const AHPolytope& a, const AHPolytope& b) {
  require_same_dim(a.dim(), b.dim(), "intersect");
  const Index n = a.dim();
  const Matrix pinv = numerics::pseudo_inverse(b.map);
  const Matrix kernel = numerics::rank_kernel(b.map).kernel_basis;
  // Directions orthogonal to range(X_b).
  const Matrix normal =
      n == 0 ? Matrix(0, 0) : numerics::rank_kernel(Matrix(b.map.transpose())).kernel_basis;
  const Index k = kernel.cols();
  const Vector offset = b.center - a.center;

  const Matrix HbP = b.base.H * pinv;
  std::vector<Matrix> rows;
  std::vector<Vector> rhs;
  rows.push_back(numerics::hstack({a.base.H, Matrix::Zero(a.base.rows(), k)}));
  rhs.push_back(a.base.h);
  rows.push_back(numerics::hstack({HbP * a.map, b.base.H * kernel}));
  rhs.push_back(b.base.h + HbP * offset);
  if (normal.cols() > 0) {
    const Matrix NX = normal.transpose() * a.map;
    const Vector Nd = normal.transpose() * offset;
    rows.push_back(numerics::hstack({NX, Matrix::Zero(NX.rows(), k)}));
    rhs.push_back(Nd);
    rows.push_back(numerics::hstack({Matrix(-NX), Matrix::Zero(NX.rows(), k)}));
    rhs.push_back(-Nd);
  }
  AHPolytope out;
  out.center = a.center;
  out.map = numerics::hstack({a.map, Matrix::Zero(n, k)});
  out.base.H = numerics::vstack(rows);
  out.base.h = numerics::concat(rhs);
  return out;
}

AHPolytope convex_hull_ahrep(const std::vector<AHPolytope>& parts) {
  if (parts.empty()) fail(ErrorCode::kInvalidInput, "convex_hull_ahrep: no parts");
  const Index n = parts.front().dim();
  for (const auto& p : parts) require_same_dim(n, p.dim(), "convex_hull_ahrep");
  const auto N = static_cast<Index>(parts.size());

  std::vector<Matrix> maps;
  std::vector<Matrix> Hs;
  std::vector<Matrix> hs;
  Matrix centers(n, N);
  for (Index i = 0; i < N; ++i) {
    const auto& p = parts[static_cast<size_t>(i)];
    maps.push_back(p.map);
    Hs.push_back(p.base.H);
    hs.push_back(Matrix(p.base.h));
    centers.col(i) = p.center;
  }
  const Matrix blkH = numerics::block_diagonal(Hs);
  const Matrix blkh = numerics::block_diagonal(hs);
  const Index z = blkH.cols();

  AHPolytope out;
  out.center = Vector::Zero(n);
  out.map = numerics::hstack({numerics::hstack(maps), centers});
  Matrix ones = Matrix::Ones(1, N);
  out.base.H = numerics::vstack({
      numerics::hstack({blkH, Matrix(-blkh)}),
      numerics::hstack({Matrix::Zero(N, z), Matrix(-Matrix::Identity(N, N))}),
      numerics::hstack({Matrix::Zero(1, z), ones}),
      numerics::hstack({Matrix::Zero(1, z), Matrix(-ones)}),
  });
  out.base.h = numerics::concat(
      {Vector::Zero(blkH.rows()), Vector::Zero(N), Vector::Ones(1), Vector::Constant(1, -1.0)});
  return out;
}

HPolytope ah_to_hpolytope(const AHPolytope& p, double tol) {
  validate(p);
  const Index n = p.dim();
  if (p.map.cols() == 0) {
    // A point: x = c written as two inequalities per coordinate.
    HPolytope out;
    out.H = numerics::vstack({Matrix::Identity(n, n), Matrix(-Matrix::Identity(n, n))});
    out.h = numerics::concat({p.center, Vector(-p.center)});
    return out;
  }
  if (!numerics::has_full_column_rank(p.map, tol)) {
    fail(ErrorCode::kUnsupportedConversion,
         "ah_to_hpolytope: map " + shape(p.map) +
             " is rank deficient; elimination is not supported");
  }
  const Matrix pinv = numerics::pseudo_inverse(p.map, tol);
  const Matrix HP = p.base.H * pinv;
  std::vector<Matrix> rows{HP};
  std::vector<Vector> rhs{p.base.h + HP * p.center};
  if (p.map.cols() < n) {
    const Matrix normal = numerics::rank_kernel(Matrix(p.map.transpose()), tol).kernel_basis;
    const Matrix Nt = normal.transpose();
    rows.push_back(Nt);
    rhs.push_back(Nt * p.center);
    rows.push_back(-Nt);
    rhs.push_back(-(Nt * p.center));
  }
  return {numerics::vstack(rows), numerics::concat(rhs)};
}

HPolytope ah_to_hpolytope(const AHPolytope& p) {
  return ah_to_hpolytope(p, numerics::default_tolerance(p.map));
}

namespace {

opt::Solution base_lp(const HPolytope& base, const Vector* objective, opt::MatrixVar& z) {
  opt::LinearModel model;
  z = opt::add_matrix_var(model, base.dim(), 1);
  opt::add_matrix_less_equal(model, base.H * opt::AffineMatrix(z),
                             opt::AffineMatrix::column(base.h));
  if (objective != nullptr) {
    opt::LinExpr obj;
    for (Index j = 0; j < base.dim(); ++j) obj.add_term(z(j, 0), (*objective)(j));
    model.set_objective(obj, opt::Sense::kMaximize);
  }
  return opt::default_solver().solve(model);
}

}  // namespace

bool is_empty(const HPolytope& p) {
  opt::MatrixVar z;
  return base_lp(p, nullptr, z).status == opt::Status::kInfeasible;
}

bool is_empty(const AHPolytope& p) { return is_empty(p.base); }

double support(const AHPolytope& p, const Vector& c) {
  if (c.size() != p.dim()) {
    fail(ErrorCode::kDimensionMismatch, "support: direction length does not match dimension");
  }
  const Vector w = p.map.transpose() * c;
  opt::MatrixVar z;
  const opt::Solution s = base_lp(p.base, &w, z);
  if (s.status == opt::Status::kInfeasible) fail(ErrorCode::kInvalidInput, "support: empty set");
  if (s.status == opt::Status::kUnbounded) {
    fail(ErrorCode::kInvalidInput, "support: set is unbounded in the given direction");
  }
  return c.dot(p.center) + s.objective_value;
}

bool is_bounded(const HPolytope& p) {
  for (Index j = 0; j < p.dim(); ++j) {
    for (double sign : {1.0, -1.0}) {
      Vector c = Vector::Zero(p.dim());
      c(j) = sign;
      opt::MatrixVar z;
      if (base_lp(p, &c, z).status == opt::Status::kUnbounded) return false;
    }
  }
  return true;
}

bool contains(const HPolytope& p, const Vector& x, double slack) {
  if (x.size() != p.dim()) {
    fail(ErrorCode::kDimensionMismatch, "contains: point length does not match dimension");
  }
  return ((p.H * x - p.h).array() <= slack).all();
}

}  // namespace polycontain::geo
