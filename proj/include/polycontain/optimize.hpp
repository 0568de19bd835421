#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "polycontain/numerics.hpp"

namespace polycontain::opt {

using numerics::Index;
using numerics::Matrix;
using numerics::Vector;

using VarId = std::int32_t;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { kContinuous, kBinary };
enum class Relation { kLessEqual, kEqual };
enum class Sense { kMinimize, kMaximize, kFeasibility };

struct Variable {
  double lower = 0.0;
  double upper = kInf;
  VarKind kind = VarKind::kContinuous;
};

struct Term {
  VarId var;
  double coef;
};

// Affine scalar expression sum(coef * var) + constant. Duplicate variables are
// allowed and merged when the expression is turned into a constraint row.
class LinExpr {
 public:
  LinExpr() = default;
  LinExpr(double constant) : constant_(constant) {}  // NOLINT(implicit)
  static LinExpr var(VarId id, double coef = 1.0) {
    LinExpr e;
    e.terms_.push_back({id, coef});
    return e;
  }

  const std::vector<Term>& terms() const { return terms_; }
  double constant() const { return constant_; }

  LinExpr& add_term(VarId id, double coef) {
    if (coef != 0.0) terms_.push_back({id, coef});
    return *this;
  }
  LinExpr& add_scaled(const LinExpr& other, double s);
  LinExpr& operator+=(const LinExpr& o) { return add_scaled(o, 1.0); }
  LinExpr& operator-=(const LinExpr& o) { return add_scaled(o, -1.0); }
  LinExpr& operator*=(double s);

  // Value under a full assignment of model variables.
  double evaluate(const std::vector<double>& values) const;

 private:
  std::vector<Term> terms_;
  double constant_ = 0.0;
};

LinExpr operator+(LinExpr a, const LinExpr& b);
LinExpr operator-(LinExpr a, const LinExpr& b);
LinExpr operator*(double s, LinExpr a);
inline LinExpr operator-(LinExpr a) { return -1.0 * std::move(a); }

struct Constraint {
  std::vector<Term> terms;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
};

class LinearModel {
 public:
  VarId add_variable(double lower = 0.0, double upper = kInf,
                     VarKind kind = VarKind::kContinuous);
  // lhs (relation) rhs; constants of both sides are folded into the row rhs.
  void add_constraint(const LinExpr& lhs, Relation relation, const LinExpr& rhs);
  void set_objective(const LinExpr& objective, Sense sense);

  Index num_variables() const { return static_cast<Index>(variables_.size()); }
  Index num_constraints() const { return static_cast<Index>(constraints_.size()); }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const LinExpr& objective() const { return objective_; }
  Sense sense() const { return sense_; }
  bool has_binaries() const;

  void set_bounds(VarId id, double lower, double upper);
  void set_kind(VarId id, VarKind kind);

  // Line-oriented text dump for debugging; not a stable format.
  std::string dump() const;

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  LinExpr objective_;
  Sense sense_ = Sense::kFeasibility;
};

struct MatrixVar {
  Index rows = 0;
  Index cols = 0;
  std::vector<VarId> ids;  // row-major
  bool nonnegative = false;

  VarId operator()(Index i, Index j) const { return ids[static_cast<size_t>(i * cols + j)]; }
};

MatrixVar add_matrix_var(LinearModel& model, Index rows, Index cols,
                         bool nonnegative = false, bool binary = false);

// Matrix of affine expressions; the carrier for encodings such as
// X = Y * Gamma where either side may mix constants and decision variables.
class AffineMatrix {
 public:
  AffineMatrix() = default;
  AffineMatrix(Index rows, Index cols)
      : rows_(rows), cols_(cols), entries_(static_cast<size_t>(rows * cols)) {}
  AffineMatrix(const MatrixVar& v);  // NOLINT(implicit)
  static AffineMatrix constant(const Matrix& m);
  static AffineMatrix column(const Vector& v) { return constant(Matrix(v)); }
  // m * var, entrywise.
  static AffineMatrix scaled(const Matrix& m, VarId var);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  LinExpr& operator()(Index i, Index j) { return entries_[static_cast<size_t>(i * cols_ + j)]; }
  const LinExpr& operator()(Index i, Index j) const {
    return entries_[static_cast<size_t>(i * cols_ + j)];
  }

  AffineMatrix block(Index r, Index c, Index nr, Index nc) const;
  AffineMatrix transpose() const;
  AffineMatrix& operator+=(const AffineMatrix& o);
  AffineMatrix& operator-=(const AffineMatrix& o);
  AffineMatrix& operator*=(double s);

  Matrix evaluate(const std::vector<double>& values) const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<LinExpr> entries_;
};

AffineMatrix operator+(AffineMatrix a, const AffineMatrix& b);
AffineMatrix operator-(AffineMatrix a, const AffineMatrix& b);
AffineMatrix operator*(const Matrix& a, const AffineMatrix& b);
AffineMatrix operator*(const AffineMatrix& a, const Matrix& b);
AffineMatrix operator*(double s, AffineMatrix a);
AffineMatrix hstack(const std::vector<AffineMatrix>& blocks);
AffineMatrix vstack(const std::vector<AffineMatrix>& blocks);
// Row sums, as a column.
AffineMatrix row_sums(const AffineMatrix& m);

void add_matrix_equality(LinearModel& model, const AffineMatrix& lhs, const AffineMatrix& rhs);
void add_matrix_less_equal(LinearModel& model, const AffineMatrix& lhs, const AffineMatrix& rhs);

// A free matrix written as pos - neg with both parts nonnegative, so that
// entrywise absolute values are bounded by pos + neg without extra rows.
struct SignedMatrixVar {
  MatrixVar pos;
  MatrixVar neg;
  AffineMatrix value() const { return AffineMatrix(pos) - AffineMatrix(neg); }
  AffineMatrix magnitude() const { return AffineMatrix(pos) + AffineMatrix(neg); }
};

SignedMatrixVar add_signed_matrix_var(LinearModel& model, Index rows, Index cols);

enum class Status { kOptimal, kInfeasible, kUnbounded };
const char* to_string(Status s);

struct Solution {
  Status status = Status::kInfeasible;
  std::vector<double> values;
  double objective_value = 0.0;
  long iterations = 0;
  long nodes = 0;

  bool optimal() const { return status == Status::kOptimal; }
  double value(VarId id) const { return values[static_cast<size_t>(id)]; }
  Matrix value(const AffineMatrix& m) const { return m.evaluate(values); }
  double value(const LinExpr& e) const { return e.evaluate(values); }
};

struct SolverOptions {
  double feasibility_tol = 1e-7;
  double pivot_tol = 1e-9;
  long iteration_limit = 2'000'000;
  long node_limit = 100'000;
};

// Two-phase dense tableau simplex. Rejects models with binary variables.
Solution solve_lp(const LinearModel& model, const SolverOptions& options = {});
// Branch-and-bound over the LP relaxation. Pure LPs are solved directly.
Solution solve_milp(const LinearModel& model, const SolverOptions& options = {});

// Largest violation of bounds, constraints and integrality by `values`.
double max_violation(const LinearModel& model, const std::vector<double>& values);

// Hook for delegating to an external engine. The built-in solver is the
// default everywhere.
class Solver {
 public:
  virtual ~Solver() = default;
  virtual Solution solve(const LinearModel& model) const = 0;
};

class BuiltinSolver final : public Solver {
 public:
  explicit BuiltinSolver(SolverOptions options = {}) : options_(options) {}
  Solution solve(const LinearModel& model) const override;

 private:
  SolverOptions options_;
};

const Solver& default_solver();
// Replaces the process-wide default; pass nullptr to restore the built-in one.
void set_default_solver(std::shared_ptr<const Solver> solver);

// Tolerance overrides used by default_solver(); exposed for the CLI --tol flag.
void set_default_options(const SolverOptions& options);
SolverOptions default_options();

}  // namespace polycontain::opt
