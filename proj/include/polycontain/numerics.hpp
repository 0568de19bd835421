#pragma once

#include <Eigen/Dense>
#include <string_view>
#include <vector>

namespace polycontain::numerics {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

struct Decomposition {
  Index rank = 0;
  Matrix kernel_basis;  // columns are an orthonormal basis of the null space
  Matrix pinv;          // left empty by rank_kernel()
};

// 1e-9 * max(rows, cols), the rank cutoff relative to the spectral norm.
double default_tolerance(const Matrix& m);

// Throws kInvalidInput if any entry is NaN or infinite.
void require_finite(const Matrix& m, std::string_view what);

// Rank counts singular values above tol * ||M||_2.
Decomposition rank_kernel(const Matrix& m, double tol);
inline Decomposition rank_kernel(const Matrix& m) {
  return rank_kernel(m, default_tolerance(m));
}

Matrix pseudo_inverse(const Matrix& m, double tol);
inline Matrix pseudo_inverse(const Matrix& m) {
  return pseudo_inverse(m, default_tolerance(m));
}

// Orthonormal basis of the column space.
Matrix range_basis(const Matrix& m, double tol);

bool has_full_column_rank(const Matrix& m, double tol);
inline bool has_full_column_rank(const Matrix& m) {
  return has_full_column_rank(m, default_tolerance(m));
}

Matrix hstack(const std::vector<Matrix>& blocks);
Matrix vstack(const std::vector<Matrix>& blocks);
Matrix block_diagonal(const std::vector<Matrix>& blocks);
Vector concat(const std::vector<Vector>& parts);

// Maximum absolute row sum.
double inf_norm(const Matrix& m);

}  // namespace polycontain::numerics
