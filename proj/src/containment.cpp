#include "polycontain/containment.hpp"

#include <cmath>
#include <string>

#include "polycontain/error.hpp"

namespace polycontain::contain {

using opt::AffineMatrix;
using opt::LinearModel;
using opt::MatrixVar;

namespace {

constexpr struct {
  Encoding e;
  const char* name;
} kEncodingNames[] = {
    {Encoding::kLemma1, "lemma1"}, {Encoding::kCor2, "cor2"},   {Encoding::kThm1, "thm1"},
    {Encoding::kThm3, "thm3"},     {Encoding::kProp2, "prop2"}, {Encoding::kProp3, "prop3"},
    {Encoding::kCor4, "cor4"},     {Encoding::kProp5, "prop5"}, {Encoding::kCor5, "cor5"},
    {Encoding::kCor6, "cor6"},
};

void require_dim(Index a, Index b, const std::string& what) {
  if (a != b) {
    fail(ErrorCode::kDimensionMismatch, what + ": inbody lives in R^" + std::to_string(a) +
                                            " but circumbody in R^" + std::to_string(b));
  }
}

void require_parts(size_t n, const char* what) {
  if (n == 0) fail(ErrorCode::kInvalidInput, std::string(what) + ": empty list of parts");
}

AffineMatrix C(const Matrix& m) { return AffineMatrix::constant(m); }
AffineMatrix Col(const Vector& v) { return AffineMatrix::column(v); }

// Row sums of |[G b]| bounded by r (an n x 1 affine column).
void add_abs_row_bound(LinearModel& model, const opt::SignedMatrixVar& g,
                       const opt::SignedMatrixVar& b, const AffineMatrix& r) {
  opt::add_matrix_less_equal(model, opt::row_sums(g.magnitude()) + b.magnitude(), r);
}

AffineMatrix repeat(const opt::LinExpr& e, Index rows) {
  AffineMatrix out(rows, 1);
  for (Index i = 0; i < rows; ++i) out(i, 0) = e;
  return out;
}

Matrix rowabs(const Matrix& g, const Vector& b) {
  return g.cwiseAbs().rowwise().sum() + b.cwiseAbs();
}

// max(0, entries) for "<= 0" residuals and |entries| for "= 0" residuals.
double pos(const Matrix& m) { return m.size() == 0 ? 0.0 : std::max(0.0, m.maxCoeff()); }
double mag(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

const char* to_string(Encoding e) {
  for (const auto& entry : kEncodingNames) {
    if (entry.e == e) return entry.name;
  }
  return "unknown";
}

Encoding parse_encoding(std::string_view name) {
  for (const auto& entry : kEncodingNames) {
    if (name == entry.name) return entry.e;
  }
  fail(ErrorCode::kInvalidInput, "unknown containment method '" + std::string(name) + "'");
}

const char* to_string(CircumbodyKind k) {
  switch (k) {
    case CircumbodyKind::kAH: return "AH";
    case CircumbodyKind::kH: return "H";
    case CircumbodyKind::kSum: return "sum";
    case CircumbodyKind::kHull: return "hull";
    case CircumbodyKind::kDisjunction: return "disjunction";
  }
  return "unknown";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kContainedCertified: return "contained_certified";
    case Verdict::kNotCertified: return "not_certified";
    case Verdict::kRefuted: return "refuted";
  }
  return "unknown";
}

InbodyTerm InbodyTerm::fixed(const AHPolytope& p) {
  geo::validate(p);
  return {Col(p.center), C(p.map), p.base};
}

InbodyTerm InbodyTerm::scaled(const AHPolytope& p, opt::VarId s) {
  geo::validate(p);
  return {Col(p.center), AffineMatrix::scaled(p.map, s), p.base};
}

CircumbodyTerm CircumbodyTerm::fixed(const AHPolytope& p) {
  geo::validate(p);
  return {p.center, p.map, p.base.H, Col(p.base.h)};
}

CircumbodyTerm CircumbodyTerm::scaled_ball(const HPolytope& ball, opt::VarId r) {
  geo::validate(ball);
  const Index n = ball.dim();
  return {Vector::Zero(n), Matrix::Identity(n, n), ball.H, AffineMatrix::scaled(Matrix(ball.h), r)};
}

Certificate extract(const CertificateVars& vars, const opt::Solution& solution) {
  Certificate c;
  c.encoding = vars.encoding;
  c.binary_mixers = vars.binary_mixers;
  for (const auto& m : vars.lambdas) c.lambdas.push_back(solution.value(m));
  for (const auto& m : vars.gammas) c.gammas.push_back(solution.value(m));
  for (const auto& m : vars.betas) c.betas.push_back(solution.value(m).col(0));
  for (const auto& e : vars.mixers) {
    double v = solution.value(e);
    if (vars.binary_mixers) v = std::round(v);
    c.mixers.push_back(v);
  }
  return c;
}

CertificateVars encode_ah_in_h(LinearModel& model, const InbodyTerm& x, const HPolytope& py) {
  require_dim(x.dim(), py.dim(), "encode_ah_in_h");
  CertificateVars v;
  v.encoding = Encoding::kCor2;
  const MatrixVar lambda = opt::add_matrix_var(model, py.rows(), x.base.rows(), true);
  opt::add_matrix_equality(model, AffineMatrix(lambda) * x.base.H, py.H * x.map);
  opt::add_matrix_less_equal(model, AffineMatrix(lambda) * Matrix(x.base.h),
                             Col(py.h) - py.H * x.center);
  v.lambdas.emplace_back(lambda);
  return v;
}

CertificateVars encode_h_in_h(LinearModel& model, const HPolytope& px, const HPolytope& py) {
  require_dim(px.dim(), py.dim(), "encode_h_in_h");
  CertificateVars v = encode_ah_in_h(model, InbodyTerm::fixed(geo::as_ahpolytope(px)), py);
  v.encoding = Encoding::kLemma1;
  return v;
}

CertificateVars encode_ah_in_ah(LinearModel& model, const InbodyTerm& x, const AHPolytope& y) {
  require_dim(x.dim(), y.dim(), "encode_ah_in_ah");
  CertificateVars v;
  v.encoding = Encoding::kThm1;
  const Index ny = y.map.cols();
  const MatrixVar gamma = opt::add_matrix_var(model, ny, x.map.cols());
  const MatrixVar beta = opt::add_matrix_var(model, ny, 1);
  const MatrixVar lambda = opt::add_matrix_var(model, y.base.rows(), x.base.rows(), true);
  opt::add_matrix_equality(model, x.map, y.map * AffineMatrix(gamma));
  opt::add_matrix_equality(model, Col(y.center) - x.center, y.map * AffineMatrix(beta));
  opt::add_matrix_equality(model, AffineMatrix(lambda) * x.base.H, y.base.H * AffineMatrix(gamma));
  opt::add_matrix_less_equal(model, AffineMatrix(lambda) * Matrix(x.base.h),
                             Col(y.base.h) + y.base.H * AffineMatrix(beta));
  v.lambdas.emplace_back(lambda);
  v.gammas.emplace_back(gamma);
  v.betas.emplace_back(beta);
  return v;
}

CertificateVars encode_zono_in_zono(LinearModel& model, const InbodyTerm& x, const Zonotope& y) {
  require_dim(x.dim(), y.dim(), "encode_zono_in_zono");
  CertificateVars v;
  v.encoding = Encoding::kThm3;
  const Index ny = y.cols();
  const auto gamma = opt::add_signed_matrix_var(model, ny, x.map.cols());
  const auto beta = opt::add_signed_matrix_var(model, ny, 1);
  opt::add_matrix_equality(model, x.map, y.generator * gamma.value());
  opt::add_matrix_equality(model, Col(y.center) - x.center, y.generator * beta.value());
  add_abs_row_bound(model, gamma, beta, Col(Vector::Ones(ny)));
  v.gammas.push_back(gamma.value());
  v.betas.push_back(beta.value());
  return v;
}

CertificateVars encode_sum_inbody(LinearModel& model, const std::vector<InbodyTerm>& parts,
                                  const HPolytope& py) {
  require_parts(parts.size(), "encode_sum_inbody");
  CertificateVars v;
  v.encoding = Encoding::kProp2;
  AffineMatrix total(py.rows(), 1);
  AffineMatrix centers(py.dim(), 1);
  for (const auto& p : parts) {
    require_dim(p.dim(), py.dim(), "encode_sum_inbody");
    const MatrixVar lambda = opt::add_matrix_var(model, py.rows(), p.base.rows(), true);
    opt::add_matrix_equality(model, AffineMatrix(lambda) * p.base.H, py.H * p.map);
    total += AffineMatrix(lambda) * Matrix(p.base.h);
    centers += p.center;
    v.lambdas.emplace_back(lambda);
  }
  opt::add_matrix_less_equal(model, total, Col(py.h) - py.H * centers);
  return v;
}

CertificateVars encode_sum_circumbody(LinearModel& model, const InbodyTerm& x,
                                      const std::vector<CircumbodyTerm>& parts) {
  require_parts(parts.size(), "encode_sum_circumbody");
  CertificateVars v;
  v.encoding = Encoding::kProp3;
  const Index n = x.dim();
  AffineMatrix center_sum(n, 1);
  AffineMatrix map_sum(n, x.map.cols());
  for (const auto& p : parts) {
    require_dim(n, p.dim(), "encode_sum_circumbody");
    const Index ny = p.map.cols();
    const MatrixVar gamma = opt::add_matrix_var(model, ny, x.map.cols());
    const MatrixVar beta = opt::add_matrix_var(model, ny, 1);
    const MatrixVar lambda = opt::add_matrix_var(model, p.H.rows(), x.base.rows(), true);
    opt::add_matrix_equality(model, AffineMatrix(lambda) * x.base.H, p.H * AffineMatrix(gamma));
    opt::add_matrix_less_equal(model, AffineMatrix(lambda) * Matrix(x.base.h),
                               p.h + p.H * AffineMatrix(beta));
    center_sum += Col(p.center) - p.map * AffineMatrix(beta);
    map_sum += p.map * AffineMatrix(gamma);
    v.lambdas.emplace_back(lambda);
    v.gammas.emplace_back(gamma);
    v.betas.emplace_back(beta);
  }
  opt::add_matrix_equality(model, center_sum, x.center);
  opt::add_matrix_equality(model, map_sum, x.map);
  return v;
}

CertificateVars encode_hull_circumbody(LinearModel& model, const InbodyTerm& x,
                                       const std::vector<AHPolytope>& parts) {
  require_parts(parts.size(), "encode_hull_circumbody");
  CertificateVars v;
  v.encoding = Encoding::kCor4;
  const Index n = x.dim();
  AffineMatrix center_sum(n, 1);
  AffineMatrix map_sum(n, x.map.cols());
  opt::LinExpr weight_sum;
  for (const auto& p : parts) {
    require_dim(n, p.dim(), "encode_hull_circumbody");
    const Index ny = p.map.cols();
    const MatrixVar gamma = opt::add_matrix_var(model, ny, x.map.cols());
    const MatrixVar beta = opt::add_matrix_var(model, ny, 1);
    const MatrixVar lambda = opt::add_matrix_var(model, p.base.rows(), x.base.rows(), true);
    const opt::VarId w = model.add_variable(0.0, opt::kInf);
    opt::add_matrix_equality(model, AffineMatrix(lambda) * x.base.H,
                             p.base.H * AffineMatrix(gamma));
    opt::add_matrix_less_equal(model, AffineMatrix(lambda) * Matrix(x.base.h),
                               AffineMatrix::scaled(Matrix(p.base.h), w) +
                                   p.base.H * AffineMatrix(beta));
    center_sum += AffineMatrix::scaled(Matrix(p.center), w) - p.map * AffineMatrix(beta);
    map_sum += p.map * AffineMatrix(gamma);
    weight_sum.add_term(w, 1.0);
    v.lambdas.emplace_back(lambda);
    v.gammas.emplace_back(gamma);
    v.betas.emplace_back(beta);
    v.mixers.push_back(opt::LinExpr::var(w));
  }
  model.add_constraint(weight_sum, opt::Relation::kEqual, 1.0);
  opt::add_matrix_equality(model, center_sum, x.center);
  opt::add_matrix_equality(model, map_sum, x.map);
  return v;
}

namespace {

// Shared body of the hull and disjunctive zonotope encodings.
CertificateVars encode_zono_mixture(LinearModel& model, const InbodyTerm& x,
                                    const std::vector<Zonotope>& parts, bool binary,
                                    Encoding tag) {
  require_parts(parts.size(), to_string(tag));
  CertificateVars v;
  v.encoding = tag;
  v.binary_mixers = binary;
  const Index n = x.dim();
  AffineMatrix center_sum(n, 1);
  AffineMatrix map_sum(n, x.map.cols());
  opt::LinExpr weight_sum;
  for (const auto& p : parts) {
    require_dim(n, p.dim(), to_string(tag));
    const Index ny = p.cols();
    const auto gamma = opt::add_signed_matrix_var(model, ny, x.map.cols());
    const auto beta = opt::add_signed_matrix_var(model, ny, 1);
    const opt::VarId w = model.add_variable(0.0, binary ? 1.0 : opt::kInf,
                                            binary ? opt::VarKind::kBinary
                                                   : opt::VarKind::kContinuous);
    add_abs_row_bound(model, gamma, beta, repeat(opt::LinExpr::var(w), ny));
    center_sum += p.generator * beta.value() + AffineMatrix::scaled(Matrix(p.center), w);
    map_sum += p.generator * gamma.value();
    weight_sum.add_term(w, 1.0);
    v.gammas.push_back(gamma.value());
    v.betas.push_back(beta.value());
    v.mixers.push_back(opt::LinExpr::var(w));
  }
  model.add_constraint(weight_sum, opt::Relation::kEqual, 1.0);
  opt::add_matrix_equality(model, center_sum, x.center);
  opt::add_matrix_equality(model, map_sum, x.map);
  return v;
}

}  // namespace

CertificateVars encode_zono_in_hull(LinearModel& model, const InbodyTerm& x,
                                    const std::vector<Zonotope>& parts) {
  return encode_zono_mixture(model, x, parts, false, Encoding::kCor5);
}

CertificateVars encode_zono_disjunctive(LinearModel& model, const InbodyTerm& x,
                                        const std::vector<Zonotope>& circumbodies) {
  return encode_zono_mixture(model, x, circumbodies, true, Encoding::kCor6);
}

CertificateVars encode_disjunctive(LinearModel& model, const InbodyTerm& x,
                                   const std::vector<HPolytope>& circumbodies) {
  require_parts(circumbodies.size(), "encode_disjunctive");
  CertificateVars v;
  v.encoding = Encoding::kProp5;
  v.binary_mixers = true;
  const Index n = x.dim();
  AffineMatrix beta_sum(n, 1);
  AffineMatrix gamma_sum(n, x.map.cols());
  opt::LinExpr delta_sum;
  for (const auto& p : circumbodies) {
    require_dim(n, p.dim(), "encode_disjunctive");
    const MatrixVar gamma = opt::add_matrix_var(model, n, x.map.cols());
    const MatrixVar beta = opt::add_matrix_var(model, n, 1);
    const MatrixVar lambda = opt::add_matrix_var(model, p.rows(), x.base.rows(), true);
    const opt::VarId d = model.add_variable(0.0, 1.0, opt::VarKind::kBinary);
    opt::add_matrix_equality(model, AffineMatrix(lambda) * x.base.H, p.H * AffineMatrix(gamma));
    opt::add_matrix_less_equal(model, AffineMatrix(lambda) * Matrix(x.base.h),
                               AffineMatrix::scaled(Matrix(p.h), d) - p.H * AffineMatrix(beta));
    beta_sum += AffineMatrix(beta);
    gamma_sum += AffineMatrix(gamma);
    delta_sum.add_term(d, 1.0);
    v.lambdas.emplace_back(lambda);
    v.gammas.emplace_back(gamma);
    v.betas.emplace_back(beta);
    v.mixers.push_back(opt::LinExpr::var(d));
  }
  model.add_constraint(delta_sum, opt::Relation::kEqual, 1.0);
  opt::add_matrix_equality(model, beta_sum, x.center);
  opt::add_matrix_equality(model, gamma_sum, x.map);
  return v;
}

// ---------------------------------------------------------------------------

bool is_zonotope(const AHPolytope& p) {
  const Index m = p.map.cols();
  if (m == 0) return true;
  if (p.base.rows() != 2 * m || p.base.dim() != m) return false;
  const HPolytope box = geo::unit_box(m);
  return p.base.H == box.H && p.base.h == box.h;
}

Zonotope to_zonotope(const AHPolytope& p) {
  if (!is_zonotope(p)) fail(ErrorCode::kInvalidInput, "set is not a zonotope");
  return {p.center, p.map};
}

bool is_plain_h(const AHPolytope& p) {
  const Index n = p.dim();
  return p.map.rows() == n && p.map.cols() == n && p.map.isIdentity(0.0) &&
         p.center.isZero(0.0);
}

namespace {

AHPolytope collapse(const std::vector<AHPolytope>& parts) {
  require_parts(parts.size(), "inbody");
  AHPolytope out = parts.front();
  for (size_t i = 1; i < parts.size(); ++i) out = geo::minkowski_sum(out, parts[i]);
  return out;
}

bool all_zonotopes(const std::vector<AHPolytope>& parts) {
  for (const auto& p : parts) {
    if (!is_zonotope(p)) return false;
  }
  return true;
}

bool h_convertible(const AHPolytope& p) {
  return is_plain_h(p) || (p.map.cols() > 0 && numerics::has_full_column_rank(p.map));
}

HPolytope to_h(const AHPolytope& p) { return is_plain_h(p) ? p.base : geo::ah_to_hpolytope(p); }

std::vector<Zonotope> zonotopes_of(const std::vector<AHPolytope>& parts) {
  std::vector<Zonotope> out;
  for (const auto& p : parts) out.push_back(to_zonotope(p));
  return out;
}

void validate_query(const ContainmentQuery& q) {
  require_parts(q.inbody.size(), "inbody");
  require_parts(q.circumbody.parts.size(), "circumbody");
  for (const auto& p : q.inbody) geo::validate(p);
  for (const auto& p : q.circumbody.parts) geo::validate(p);
  const Index n = q.inbody.front().dim();
  for (const auto& p : q.inbody) require_dim(n, p.dim(), "containment query");
  for (const auto& p : q.circumbody.parts) require_dim(n, p.dim(), "containment query");
  const auto kind = q.circumbody.kind;
  if ((kind == CircumbodyKind::kAH || kind == CircumbodyKind::kH) &&
      q.circumbody.parts.size() != 1) {
    fail(ErrorCode::kInvalidInput, std::string("circumbody of kind ") + to_string(kind) +
                                       " takes exactly one set");
  }
  if (kind == CircumbodyKind::kH && !is_plain_h(q.circumbody.parts.front())) {
    fail(ErrorCode::kInvalidInput, "circumbody of kind H must be an H-polytope");
  }
}

[[noreturn]] void bad_method(Encoding e, const ContainmentQuery& q, const char* why) {
  fail(ErrorCode::kInvalidInput, std::string("method ") + to_string(e) + " does not apply to a " +
                                     to_string(q.circumbody.kind) + " circumbody: " + why);
}

}  // namespace

Encoding select_encoding(const ContainmentQuery& q) {
  validate_query(q);
  const auto& parts = q.circumbody.parts;
  const bool multi = q.inbody.size() > 1;
  const AHPolytope& in0 = q.inbody.front();
  switch (q.circumbody.kind) {
    case CircumbodyKind::kH:
      if (!q.method) {
        if (multi) return Encoding::kProp2;
        return is_plain_h(in0) ? Encoding::kLemma1 : Encoding::kCor2;
      }
      switch (*q.method) {
        case Encoding::kLemma1:
          if (multi || !is_plain_h(in0)) bad_method(*q.method, q, "inbody must be an H-polytope");
          return *q.method;
        case Encoding::kCor2:
        case Encoding::kProp2:
        case Encoding::kThm1:
        case Encoding::kProp3:
          return *q.method;
        default:
          bad_method(*q.method, q, "use lemma1, cor2, prop2, thm1 or prop3");
      }
    case CircumbodyKind::kAH: {
      const AHPolytope& y = parts.front();
      if (!q.method) {
        if (multi && is_plain_h(y)) return Encoding::kProp2;
        if (is_plain_h(y)) return Encoding::kCor2;
        if (numerics::has_full_column_rank(y.map)) return Encoding::kThm1;
        if (all_zonotopes(q.inbody) && is_zonotope(y)) return Encoding::kThm3;
        return Encoding::kThm1;
      }
      switch (*q.method) {
        case Encoding::kThm1:
        case Encoding::kProp3:
          return *q.method;
        case Encoding::kThm3:
          if (!all_zonotopes(q.inbody) || !is_zonotope(y)) {
            bad_method(*q.method, q, "both sets must be zonotopes");
          }
          return *q.method;
        case Encoding::kCor2:
        case Encoding::kProp2:
          if (!h_convertible(y)) bad_method(*q.method, q, "circumbody map is rank deficient");
          return *q.method;
        case Encoding::kLemma1:
          if (multi || !is_plain_h(in0) || !h_convertible(y)) {
            bad_method(*q.method, q, "both sets must be H-polytopes");
          }
          return *q.method;
        default:
          bad_method(*q.method, q, "use thm1, thm3, cor2 or prop3");
      }
    }
    case CircumbodyKind::kSum:
      if (!q.method || *q.method == Encoding::kProp3) return Encoding::kProp3;
      bad_method(*q.method, q, "use prop3");
    case CircumbodyKind::kHull: {
      const bool zono = all_zonotopes(q.inbody) && all_zonotopes(parts);
      if (!q.method) return zono ? Encoding::kCor5 : Encoding::kCor4;
      if (*q.method == Encoding::kCor4) return *q.method;
      if (*q.method == Encoding::kCor5) {
        if (!zono) bad_method(*q.method, q, "all sets must be zonotopes");
        return *q.method;
      }
      bad_method(*q.method, q, "use cor4 or cor5");
    }
    case CircumbodyKind::kDisjunction: {
      bool convertible = true;
      for (const auto& p : parts) convertible = convertible && h_convertible(p);
      const bool zono = all_zonotopes(q.inbody) && all_zonotopes(parts);
      if (!q.method) {
        if (convertible) return Encoding::kProp5;
        if (zono) return Encoding::kCor6;
        fail(ErrorCode::kUnsupportedConversion,
             "disjunction: members are neither H-convertible nor zonotopes");
      }
      if (*q.method == Encoding::kProp5) {
        if (!convertible) bad_method(*q.method, q, "members must be H-convertible");
        return *q.method;
      }
      if (*q.method == Encoding::kCor6) {
        if (!zono) bad_method(*q.method, q, "all sets must be zonotopes");
        return *q.method;
      }
      bad_method(*q.method, q, "use prop5 or cor6");
    }
  }
  fail(ErrorCode::kInvalidInput, "unknown circumbody kind");
}

bool is_lossless(const ContainmentQuery& q, Encoding e) {
  switch (e) {
    case Encoding::kLemma1:
    case Encoding::kCor2:
    case Encoding::kProp2:
    case Encoding::kProp5:
      return true;
    case Encoding::kThm1: {
      if (q.circumbody.kind == CircumbodyKind::kH) return true;
      if (q.circumbody.kind != CircumbodyKind::kAH) return false;
      return numerics::has_full_column_rank(q.circumbody.parts.front().map);
    }
    default:
      return false;
  }
}

namespace {

// Inbody terms for the query; scaled by `s` when s >= 0.
std::vector<InbodyTerm> inbody_terms(const ContainmentQuery& q, opt::VarId s) {
  std::vector<InbodyTerm> out;
  for (const auto& p : q.inbody) {
    out.push_back(s >= 0 ? InbodyTerm::scaled(p, s) : InbodyTerm::fixed(p));
  }
  return out;
}

InbodyTerm single_inbody(const ContainmentQuery& q, opt::VarId s) {
  const AHPolytope in = collapse(q.inbody);
  return s >= 0 ? InbodyTerm::scaled(in, s) : InbodyTerm::fixed(in);
}

std::vector<CircumbodyTerm> circumbody_terms(const std::vector<AHPolytope>& parts) {
  std::vector<CircumbodyTerm> out;
  for (const auto& p : parts) out.push_back(CircumbodyTerm::fixed(p));
  return out;
}

CertificateVars build(LinearModel& model, const ContainmentQuery& q, Encoding e, opt::VarId s) {
  const auto& parts = q.circumbody.parts;
  switch (e) {
    case Encoding::kLemma1:
    case Encoding::kCor2: {
      CertificateVars v = encode_ah_in_h(model, single_inbody(q, s), to_h(parts.front()));
      v.encoding = e;
      return v;
    }
    case Encoding::kProp2:
      return encode_sum_inbody(model, inbody_terms(q, s), to_h(parts.front()));
    case Encoding::kThm1:
      return encode_ah_in_ah(model, single_inbody(q, s), parts.front());
    case Encoding::kThm3:
      return encode_zono_in_zono(model, single_inbody(q, s), to_zonotope(parts.front()));
    case Encoding::kProp3:
      return encode_sum_circumbody(model, single_inbody(q, s), circumbody_terms(parts));
    case Encoding::kCor4:
      return encode_hull_circumbody(model, single_inbody(q, s), parts);
    case Encoding::kCor5:
      return encode_zono_in_hull(model, single_inbody(q, s), zonotopes_of(parts));
    case Encoding::kProp5: {
      std::vector<HPolytope> hs;
      for (const auto& p : parts) hs.push_back(to_h(p));
      return encode_disjunctive(model, single_inbody(q, s), hs);
    }
    case Encoding::kCor6:
      return encode_zono_disjunctive(model, single_inbody(q, s), zonotopes_of(parts));
  }
  fail(ErrorCode::kInvalidInput, "unknown encoding");
}

}  // namespace

CheckResult check(const ContainmentQuery& query) {
  CheckResult r;
  r.encoding = select_encoding(query);
  r.lossless = is_lossless(query, r.encoding);
  LinearModel model;
  const CertificateVars vars = build(model, query, r.encoding, -1);
  const opt::Solution sol = opt::default_solver().solve(model);
  if (sol.status == opt::Status::kOptimal) {
    r.verdict = Verdict::kContainedCertified;
    r.certificate = extract(vars, sol);
  } else {
    r.verdict = r.lossless ? Verdict::kRefuted : Verdict::kNotCertified;
  }
  return r;
}

ScalingResult max_scaling(const ContainmentQuery& query) {
  ScalingResult r;
  r.encoding = select_encoding(query);
  LinearModel model;
  const opt::VarId s = model.add_variable(0.0, opt::kInf);
  const CertificateVars vars = build(model, query, r.encoding, s);
  model.set_objective(opt::LinExpr::var(s), opt::Sense::kMaximize);
  const opt::Solution sol = opt::default_solver().solve(model);
  switch (sol.status) {
    case opt::Status::kInfeasible:
      r.feasible = false;
      r.lambda = 0.0;
      break;
    case opt::Status::kUnbounded:
      r.feasible = true;
      r.unbounded = true;
      r.lambda = opt::kInf;
      break;
    case opt::Status::kOptimal:
      r.feasible = true;
      r.lambda = sol.value(s);
      r.certificate = extract(vars, sol);
      break;
  }
  return r;
}

// ---------------------------------------------------------------------------

namespace {

struct Residual {
  double worst = 0.0;
  void le(const Matrix& m) { worst = std::max(worst, pos(m)); }
  void eq(const Matrix& m) { worst = std::max(worst, mag(m)); }
  void nonneg(const Matrix& m) { worst = std::max(worst, pos(-m)); }
};

void require_counts(const Certificate& c, size_t lambdas, size_t gammas, size_t betas,
                    size_t mixers) {
  if (c.lambdas.size() != lambdas || c.gammas.size() != gammas || c.betas.size() != betas ||
      c.mixers.size() != mixers) {
    fail(ErrorCode::kInvalidInput, std::string("certificate does not match encoding ") +
                                       to_string(c.encoding));
  }
}

void require_shape(const Matrix& m, Index r, Index c) {
  if (m.rows() != r || m.cols() != c) {
    fail(ErrorCode::kDimensionMismatch, "certificate block has shape " +
                                            std::to_string(m.rows()) + "x" +
                                            std::to_string(m.cols()) + ", expected " +
                                            std::to_string(r) + "x" + std::to_string(c));
  }
}

}  // namespace

double certificate_residual(const ContainmentQuery& q, const Certificate& c) {
  validate_query(q);
  const auto& parts = q.circumbody.parts;
  const size_t N = parts.size();
  Residual res;
  const Vector mix =
      Eigen::Map<const Vector>(c.mixers.data(), static_cast<Index>(c.mixers.size()));

  if (c.encoding == Encoding::kProp2) {
    require_counts(c, q.inbody.size(), 0, 0, 0);
    const HPolytope py = to_h(parts.front());
    Vector total = Vector::Zero(py.rows());
    Vector centers = Vector::Zero(py.dim());
    for (size_t i = 0; i < q.inbody.size(); ++i) {
      const auto& p = q.inbody[i];
      const Matrix& L = c.lambdas[i];
      require_shape(L, py.rows(), p.base.rows());
      res.nonneg(L);
      res.eq(L * p.base.H - py.H * p.map);
      total += L * p.base.h;
      centers += p.center;
    }
    res.le(total - py.h + py.H * centers);
    return res.worst;
  }

  const AHPolytope x = collapse(q.inbody);
  const Matrix& X = x.map;
  const Vector& xc = x.center;
  const Matrix& Hx = x.base.H;
  const Vector& hx = x.base.h;
  switch (c.encoding) {
    case Encoding::kLemma1:
    case Encoding::kCor2: {
      require_counts(c, 1, 0, 0, 0);
      const HPolytope py = to_h(parts.front());
      const Matrix& L = c.lambdas[0];
      require_shape(L, py.rows(), Hx.rows());
      res.nonneg(L);
      res.eq(L * Hx - py.H * X);
      res.le(L * hx - py.h + py.H * xc);
      break;
    }
    case Encoding::kThm1: {
      require_counts(c, 1, 1, 1, 0);
      const AHPolytope& y = parts.front();
      const Matrix& L = c.lambdas[0];
      const Matrix& G = c.gammas[0];
      const Vector& b = c.betas[0];
      require_shape(L, y.base.rows(), Hx.rows());
      require_shape(G, y.map.cols(), X.cols());
      require_shape(b, y.map.cols(), 1);
      res.nonneg(L);
      res.eq(X - y.map * G);
      res.eq(y.center - xc - y.map * b);
      res.eq(L * Hx - y.base.H * G);
      res.le(L * hx - y.base.h - y.base.H * b);
      break;
    }
    case Encoding::kThm3: {
      require_counts(c, 0, 1, 1, 0);
      const Zonotope y = to_zonotope(parts.front());
      const Matrix& G = c.gammas[0];
      const Vector& b = c.betas[0];
      require_shape(G, y.cols(), X.cols());
      require_shape(b, y.cols(), 1);
      res.eq(X - y.generator * G);
      res.eq(y.center - xc - y.generator * b);
      res.le(rowabs(G, b).array() - 1.0);
      break;
    }
    case Encoding::kProp3:
    case Encoding::kCor4: {
      const bool hull = c.encoding == Encoding::kCor4;
      require_counts(c, N, N, N, hull ? N : 0);
      Vector center_sum = Vector::Zero(x.dim());
      Matrix map_sum = Matrix::Zero(x.dim(), X.cols());
      for (size_t i = 0; i < N; ++i) {
        const auto& y = parts[i];
        const Matrix& L = c.lambdas[i];
        const Matrix& G = c.gammas[i];
        const Vector& b = c.betas[i];
        require_shape(L, y.base.rows(), Hx.rows());
        require_shape(G, y.map.cols(), X.cols());
        require_shape(b, y.map.cols(), 1);
        const double w = hull ? mix(static_cast<Index>(i)) : 1.0;
        res.nonneg(L);
        res.eq(L * Hx - y.base.H * G);
        res.le(L * hx - w * y.base.h - y.base.H * b);
        center_sum += w * y.center - y.map * b;
        map_sum += y.map * G;
      }
      if (hull) {
        res.nonneg(mix);
        res.eq(Vector::Constant(1, mix.sum() - 1.0));
      }
      res.eq(center_sum - xc);
      res.eq(map_sum - X);
      break;
    }
    case Encoding::kProp5: {
      require_counts(c, N, N, N, N);
      Vector beta_sum = Vector::Zero(x.dim());
      Matrix gamma_sum = Matrix::Zero(x.dim(), X.cols());
      for (size_t i = 0; i < N; ++i) {
        const HPolytope py = to_h(parts[i]);
        const Matrix& L = c.lambdas[i];
        const Matrix& G = c.gammas[i];
        const Vector& b = c.betas[i];
        require_shape(L, py.rows(), Hx.rows());
        require_shape(G, x.dim(), X.cols());
        require_shape(b, x.dim(), 1);
        const double d = mix(static_cast<Index>(i));
        res.nonneg(L);
        res.eq(L * Hx - py.H * G);
        res.le(L * hx - d * py.h + py.H * b);
        beta_sum += b;
        gamma_sum += G;
      }
      res.eq((mix.array() * (1.0 - mix.array())).matrix());
      res.eq(Vector::Constant(1, mix.sum() - 1.0));
      res.eq(beta_sum - xc);
      res.eq(gamma_sum - X);
      break;
    }
    case Encoding::kCor5:
    case Encoding::kCor6: {
      require_counts(c, 0, N, N, N);
      Vector center_sum = Vector::Zero(x.dim());
      Matrix map_sum = Matrix::Zero(x.dim(), X.cols());
      for (size_t i = 0; i < N; ++i) {
        const Zonotope y = to_zonotope(parts[i]);
        const Matrix& G = c.gammas[i];
        const Vector& b = c.betas[i];
        require_shape(G, y.cols(), X.cols());
        require_shape(b, y.cols(), 1);
        const double w = mix(static_cast<Index>(i));
        res.le(rowabs(G, b).array() - w);
        center_sum += y.generator * b + w * y.center;
        map_sum += y.generator * G;
      }
      res.nonneg(mix);
      if (c.encoding == Encoding::kCor6) {
        res.eq((mix.array() * (1.0 - mix.array())).matrix());
      }
      res.eq(Vector::Constant(1, mix.sum() - 1.0));
      res.eq(center_sum - xc);
      res.eq(map_sum - X);
      break;
    }
    case Encoding::kProp2:
      break;
  }
  return res.worst;
}

bool necessity_holds(const Matrix& Y, const Matrix& Hy) {
  if (Y.cols() != Hy.cols()) {
    fail(ErrorCode::kDimensionMismatch, "necessity_holds: Y has " + std::to_string(Y.cols()) +
                                            " columns but Hy has " + std::to_string(Hy.cols()));
  }
  const Index q = Hy.rows();
  if (q == 0) return true;
  const Matrix Ht = Hy.transpose();
  const Matrix M = numerics::pseudo_inverse(Ht) * Y.transpose();
  const Matrix range = numerics::range_basis(M, numerics::default_tolerance(M));
  const Matrix kernel = numerics::rank_kernel(Ht).kernel_basis;
  const Matrix stacked = numerics::hstack({range, kernel});
  if (stacked.cols() < q) return false;
  return numerics::rank_kernel(stacked).rank == q;
}

double chebyshev_radius(const HPolytope& p) {
  LinearModel model;
  const MatrixVar x = opt::add_matrix_var(model, p.dim(), 1);
  const opt::VarId r = model.add_variable(-opt::kInf, opt::kInf);
  const Vector norms = p.H.rowwise().norm();
  opt::add_matrix_less_equal(model, p.H * AffineMatrix(x) + AffineMatrix::scaled(Matrix(norms), r),
                             Col(p.h));
  // The cap keeps the LP bounded for polytopes that are not.
  model.set_bounds(r, -opt::kInf, 1e6);
  model.set_objective(opt::LinExpr::var(r), opt::Sense::kMaximize);
  const opt::Solution s = opt::default_solver().solve(model);
  if (s.status != opt::Status::kOptimal) return -opt::kInf;
  return s.value(r);
}

}  // namespace polycontain::contain
