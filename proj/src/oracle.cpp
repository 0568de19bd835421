#include "polycontain/oracle.hpp"

#include <string>

#include "polycontain/error.hpp"
#include "polycontain/optimize.hpp"

namespace polycontain::oracle {

namespace {

constexpr long kMaxSubsets = 2'000'000;

bool is_unit_box(const HPolytope& p) {
  const Index n = p.dim();
  if (n == 0 || p.rows() != 2 * n) return false;
  const HPolytope box = geo::unit_box(n);
  return p.H == box.H && p.h == box.h;
}

long binomial(Index n, Index k) {
  if (k < 0 || k > n) return 0;
  double r = 1;
  for (Index i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r > 1e15 ? static_cast<long>(1e15) : static_cast<long>(r + 0.5);
}

Matrix enumerate_vertices(const HPolytope& p) {
  const Index m = p.dim();
  const Index q = p.rows();
  if (m == 0) return Matrix(0, 1);
  if (binomial(q, m) > kMaxSubsets) {
    fail(ErrorCode::kResourceLimit, "vertex enumeration: too many row subsets (" +
                                        std::to_string(q) + " choose " + std::to_string(m) +
                                        ")");
  }
  std::vector<Vector> found;
  std::vector<Index> pick(static_cast<size_t>(m));
  for (Index i = 0; i < m; ++i) pick[static_cast<size_t>(i)] = i;
  Matrix A(m, m);
  Vector b(m);
  const double scale = std::max(1.0, p.h.cwiseAbs().maxCoeff());
  for (;;) {
    for (Index i = 0; i < m; ++i) {
      A.row(i) = p.H.row(pick[static_cast<size_t>(i)]);
      b(i) = p.h(pick[static_cast<size_t>(i)]);
    }
    Eigen::FullPivLU<Matrix> lu(A);
    lu.setThreshold(1e-10);
    if (lu.isInvertible()) {
      const Vector v = lu.solve(b);
      if (((p.H * v - p.h).array() <= 1e-7 * scale).all()) {
        bool dup = false;
        for (const auto& w : found) {
          if ((w - v).cwiseAbs().maxCoeff() <= 1e-7) {
            dup = true;
            break;
          }
        }
        if (!dup) found.push_back(v);
      }
    }
    // Next combination in lexicographic order.
    Index i = m - 1;
    while (i >= 0 && pick[static_cast<size_t>(i)] == q - m + i) --i;
    if (i < 0) break;
    ++pick[static_cast<size_t>(i)];
    for (Index j = i + 1; j < m; ++j) pick[static_cast<size_t>(j)] = pick[static_cast<size_t>(j - 1)] + 1;
  }
  Matrix out(m, static_cast<Index>(found.size()));
  for (size_t k = 0; k < found.size(); ++k) out.col(static_cast<Index>(k)) = found[k];
  return out;
}

}  // namespace

Matrix zonotope_vertex_candidates(const Zonotope& z) {
  geo::validate(z);
  const Index k = z.cols();
  if (k > kMaxZonotopeColumns) {
    fail(ErrorCode::kResourceLimit, "zonotope_vertex_candidates: " + std::to_string(k) +
                                        " generators exceed the cap of " +
                                        std::to_string(kMaxZonotopeColumns));
  }
  const Index count = Index{1} << k;
  Matrix out(z.dim(), count);
  Vector s(k);
  for (Index mask = 0; mask < count; ++mask) {
    for (Index j = 0; j < k; ++j) s(j) = ((mask >> j) & 1) ? 1.0 : -1.0;
    out.col(mask) = z.center + z.generator * s;
  }
  return out;
}

bool contains_point(const AHPolytope& set, const Vector& p, double tol) {
  if (p.size() != set.dim()) {
    fail(ErrorCode::kDimensionMismatch, "contains_point: point has length " +
                                            std::to_string(p.size()) + ", set lives in R^" +
                                            std::to_string(set.dim()));
  }
  opt::LinearModel model;
  const opt::MatrixVar zeta = opt::add_matrix_var(model, set.map.cols(), 1);
  opt::add_matrix_less_equal(model, set.base.H * opt::AffineMatrix(zeta),
                             opt::AffineMatrix::column(set.base.h));
  opt::add_matrix_equality(model, set.map * opt::AffineMatrix(zeta),
                           opt::AffineMatrix::column(p - set.center));
  opt::SolverOptions options = opt::default_options();
  options.feasibility_tol = tol;
  return opt::solve_lp(model, options).status != opt::Status::kInfeasible;
}

Matrix hpolytope_vertices_smalldim(const HPolytope& p) {
  geo::validate(p);
  if (p.dim() > 3) {
    fail(ErrorCode::kInvalidInput, "hpolytope_vertices_smalldim: dimension " +
                                       std::to_string(p.dim()) + " exceeds 3");
  }
  return enumerate_vertices(p);
}

Matrix vertex_candidates(const AHPolytope& p) {
  if (is_unit_box(p.base) && p.map.cols() <= kMaxZonotopeColumns) {
    return zonotope_vertex_candidates(Zonotope{p.center, p.map});
  }
  const Matrix base = enumerate_vertices(p.base);
  if (p.map.cols() == 0) return p.center;
  return (p.map * base).colwise() + p.center;
}

bool containment_oracle(const Zonotope& inbody, const AHPolytope& circumbody) {
  return containment_oracle(geo::as_ahpolytope(inbody), circumbody);
}

bool containment_oracle(const AHPolytope& inbody, const AHPolytope& circumbody) {
  if (inbody.dim() != circumbody.dim()) {
    fail(ErrorCode::kDimensionMismatch, "containment_oracle: inbody in R^" +
                                            std::to_string(inbody.dim()) + ", circumbody in R^" +
                                            std::to_string(circumbody.dim()));
  }
  const Matrix v = vertex_candidates(inbody);
  for (Index j = 0; j < v.cols(); ++j) {
    if (!contains_point(circumbody, v.col(j))) return false;
  }
  return true;
}

bool containment_oracle(const AHPolytope& inbody, const std::vector<AHPolytope>& members) {
  for (const auto& m : members) {
    if (containment_oracle(inbody, m)) return true;
  }
  return false;
}

}  // namespace polycontain::oracle
