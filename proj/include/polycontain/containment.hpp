#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polycontain/geometry.hpp"
#include "polycontain/optimize.hpp"

namespace polycontain::contain {

using geo::AHPolytope;
using geo::HPolytope;
using geo::Zonotope;
using numerics::Index;
using numerics::Matrix;
using numerics::Vector;

enum class Encoding {
  kLemma1,  // H in H
  kCor2,    // AH in H
  kThm1,    // AH in AH
  kThm3,    // zonotope in zonotope
  kProp2,   // sum of AH in H
  kProp3,   // AH in sum of AH
  kCor4,    // AH in hull of AH
  kProp5,   // AH in union of H
  kCor5,    // zonotope in hull of zonotopes
  kCor6,    // zonotope in union of zonotopes
};

const char* to_string(Encoding e);
Encoding parse_encoding(std::string_view name);

// Inbody with center and map given as affine expressions, so a scale variable
// can multiply the map.
struct InbodyTerm {
  opt::AffineMatrix center;  // n x 1
  opt::AffineMatrix map;     // n x m
  HPolytope base;

  Index dim() const { return center.rows(); }
  static InbodyTerm fixed(const AHPolytope& p);
  // center + s * map
  static InbodyTerm scaled(const AHPolytope& p, opt::VarId s);
};

// Circumbody part whose right-hand side may depend on decision variables.
struct CircumbodyTerm {
  Vector center;
  Matrix map;
  Matrix H;
  opt::AffineMatrix h;  // rows x 1

  Index dim() const { return center.size(); }
  static CircumbodyTerm fixed(const AHPolytope& p);
  // {x | H x <= r h} for a nonnegative scalar variable r.
  static CircumbodyTerm scaled_ball(const HPolytope& ball, opt::VarId r);
};

// Decision variables of an encoding inside a caller-owned model.
struct CertificateVars {
  Encoding encoding = Encoding::kThm1;
  std::vector<opt::AffineMatrix> lambdas;
  std::vector<opt::AffineMatrix> gammas;
  std::vector<opt::AffineMatrix> betas;
  std::vector<opt::LinExpr> mixers;
  bool binary_mixers = false;
};

struct Certificate {
  Encoding encoding = Encoding::kThm1;
  std::vector<Matrix> lambdas;
  std::vector<Matrix> gammas;
  std::vector<Vector> betas;
  std::vector<double> mixers;
  bool binary_mixers = false;
};

Certificate extract(const CertificateVars& vars, const opt::Solution& solution);

// Encoders. Each adds variables and rows to `model` and returns the handles.
CertificateVars encode_h_in_h(opt::LinearModel& model, const HPolytope& px, const HPolytope& py);
CertificateVars encode_ah_in_h(opt::LinearModel& model, const InbodyTerm& x, const HPolytope& py);
CertificateVars encode_ah_in_ah(opt::LinearModel& model, const InbodyTerm& x,
                                const AHPolytope& y);
// The inbody base must be the unit box of matching size.
CertificateVars encode_zono_in_zono(opt::LinearModel& model, const InbodyTerm& x,
                                    const Zonotope& y);
CertificateVars encode_sum_inbody(opt::LinearModel& model, const std::vector<InbodyTerm>& parts,
                                  const HPolytope& py);
CertificateVars encode_sum_circumbody(opt::LinearModel& model, const InbodyTerm& x,
                                      const std::vector<CircumbodyTerm>& parts);
CertificateVars encode_hull_circumbody(opt::LinearModel& model, const InbodyTerm& x,
                                       const std::vector<AHPolytope>& parts);
CertificateVars encode_zono_in_hull(opt::LinearModel& model, const InbodyTerm& x,
                                    const std::vector<Zonotope>& parts);
CertificateVars encode_disjunctive(opt::LinearModel& model, const InbodyTerm& x,
                                   const std::vector<HPolytope>& circumbodies);
CertificateVars encode_zono_disjunctive(opt::LinearModel& model, const InbodyTerm& x,
                                        const std::vector<Zonotope>& circumbodies);

enum class CircumbodyKind { kAH, kH, kSum, kHull, kDisjunction };
const char* to_string(CircumbodyKind k);

struct Circumbody {
  CircumbodyKind kind = CircumbodyKind::kAH;
  // kH uses parts[0]'s base (identity map, zero center); kDisjunction parts
  // must be H-convertible or all zonotopes.
  std::vector<AHPolytope> parts;

  static Circumbody ah(AHPolytope p) { return {CircumbodyKind::kAH, {std::move(p)}}; }
  static Circumbody h(const HPolytope& p) {
    return {CircumbodyKind::kH, {geo::as_ahpolytope(p)}};
  }
  static Circumbody sum(std::vector<AHPolytope> p) { return {CircumbodyKind::kSum, std::move(p)}; }
  static Circumbody hull(std::vector<AHPolytope> p) {
    return {CircumbodyKind::kHull, std::move(p)};
  }
  static Circumbody disjunction(std::vector<AHPolytope> p) {
    return {CircumbodyKind::kDisjunction, std::move(p)};
  }
};

struct ContainmentQuery {
  // Summands of the inbody; one entry for a plain set.
  std::vector<AHPolytope> inbody;
  Circumbody circumbody;
  std::optional<Encoding> method;  // empty means auto
};

enum class Verdict { kContainedCertified, kNotCertified, kRefuted };
const char* to_string(Verdict v);

struct CheckResult {
  Verdict verdict = Verdict::kNotCertified;
  Encoding encoding = Encoding::kThm1;
  bool lossless = false;
  std::optional<Certificate> certificate;
};

// Encoding that `check` would use; throws kInvalidInput when `method` does
// not fit the query shape.
Encoding select_encoding(const ContainmentQuery& query);
bool is_lossless(const ContainmentQuery& query, Encoding e);

CheckResult check(const ContainmentQuery& query);

struct ScalingResult {
  double lambda = 0.0;  // +inf when unbounded
  bool feasible = false;
  bool unbounded = false;
  Encoding encoding = Encoding::kThm1;
  std::optional<Certificate> certificate;
};

// max s such that the inbody, with its map scaled by s about its own center,
// is certified inside the circumbody.
ScalingResult max_scaling(const ContainmentQuery& query);

// Largest violation of the encoding's rows when the certificate is
// substituted. Independent of any solver.
double certificate_residual(const ContainmentQuery& query, const Certificate& cert);

// rank([range(pinv(Hy') Y') | kernel(Hy')]) == rows(Hy).
bool necessity_holds(const Matrix& Y, const Matrix& Hy);

// Radius of the largest ball (Euclidean) inside the polytope; <= 0 means the
// polytope has empty interior.
double chebyshev_radius(const HPolytope& p);

bool is_zonotope(const AHPolytope& p);
Zonotope to_zonotope(const AHPolytope& p);
// True when p is an H-polytope embedded with identity map and zero center.
bool is_plain_h(const AHPolytope& p);

}  // namespace polycontain::contain
