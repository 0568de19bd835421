#include "polycontain/numerics.hpp"

#include <algorithm>
#include <string>

#include "polycontain/error.hpp"

namespace polycontain::numerics {

namespace {

Eigen::JacobiSVD<Matrix> full_svd(const Matrix& m) {
  return Eigen::JacobiSVD<Matrix>(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

Index count_above(const Vector& sigma, double cutoff) {
  Index r = 0;
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) ++r;
  }
  return r;
}

}  // namespace

double default_tolerance(const Matrix& m) {
  return 1e-9 * static_cast<double>(std::max<Index>({m.rows(), m.cols(), 1}));
}

void require_finite(const Matrix& m, std::string_view what) {
  if (!m.allFinite()) {
    fail(ErrorCode::kInvalidInput,
         std::string(what) + ": matrix contains non-finite entries");
  }
}

Decomposition rank_kernel(const Matrix& m, double tol) {
  require_finite(m, "rank_kernel");
  if (!(tol > 0)) fail(ErrorCode::kInvalidInput, "rank_kernel: tol must be > 0");
  Decomposition out;
  if (m.cols() == 0) {
    out.kernel_basis = Matrix(0, 0);
    return out;
  }
  if (m.rows() == 0) {
    out.kernel_basis = Matrix::Identity(m.cols(), m.cols());
    return out;
  }
  auto svd = full_svd(m);
  const Vector& sigma = svd.singularValues();
  const double norm = sigma.size() > 0 ? sigma(0) : 0.0;
  out.rank = count_above(sigma, tol * norm);
  out.kernel_basis = svd.matrixV().rightCols(m.cols() - out.rank);
  return out;
}

Matrix pseudo_inverse(const Matrix& m, double tol) {
  require_finite(m, "pseudo_inverse");
  if (!(tol > 0)) fail(ErrorCode::kInvalidInput, "pseudo_inverse: tol must be > 0");
  if (m.rows() == 0 || m.cols() == 0) return Matrix::Zero(m.cols(), m.rows());
  auto svd = Eigen::JacobiSVD<Matrix>(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  const double cutoff = tol * sigma(0);
  Vector inv = Vector::Zero(sigma.size());
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) inv(i) = 1.0 / sigma(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Matrix range_basis(const Matrix& m, double tol) {
  require_finite(m, "range_basis");
  if (m.rows() == 0 || m.cols() == 0) return Matrix(m.rows(), 0);
  auto svd = Eigen::JacobiSVD<Matrix>(m, Eigen::ComputeThinU);
  const Vector& sigma = svd.singularValues();
  Index r = count_above(sigma, tol * sigma(0));
  return svd.matrixU().leftCols(r);
}

bool has_full_column_rank(const Matrix& m, double tol) {
  if (m.cols() == 0) return true;
  if (m.rows() < m.cols()) return false;
  return rank_kernel(m, tol).rank == m.cols();
}

Matrix hstack(const std::vector<Matrix>& blocks) {
  Index rows = -1;
  Index cols = 0;
  for (const auto& b : blocks) {
    if (rows < 0) rows = b.rows();
    if (b.rows() != rows) fail(ErrorCode::kDimensionMismatch, "hstack: row counts differ");
    cols += b.cols();
  }
  Matrix out(std::max<Index>(rows, 0), cols);
  Index c = 0;
  for (const auto& b : blocks) {
    out.middleCols(c, b.cols()) = b;
    c += b.cols();
  }
  return out;
}

Matrix vstack(const std::vector<Matrix>& blocks) {
  Index cols = -1;
  Index rows = 0;
  for (const auto& b : blocks) {
    if (cols < 0) cols = b.cols();
    if (b.cols() != cols) fail(ErrorCode::kDimensionMismatch, "vstack: column counts differ");
    rows += b.rows();
  }
  Matrix out(rows, std::max<Index>(cols, 0));
  Index r = 0;
  for (const auto& b : blocks) {
    out.middleRows(r, b.rows()) = b;
    r += b.rows();
  }
  return out;
}

Matrix block_diagonal(const std::vector<Matrix>& blocks) {
  Index rows = 0;
  Index cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  Matrix out = Matrix::Zero(rows, cols);
  Index r = 0;
  Index c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

Vector concat(const std::vector<Vector>& parts) {
  Index n = 0;
  for (const auto& p : parts) n += p.size();
  Vector out(n);
  Index k = 0;
  for (const auto& p : parts) {
    out.segment(k, p.size()) = p;
    k += p.size();
  }
  return out;
}

double inf_norm(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace polycontain::numerics
