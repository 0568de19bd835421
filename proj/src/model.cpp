#include <algorithm>
#include <cmath>
#include <sstream>

#include "polycontain/error.hpp"
#include "polycontain/optimize.hpp"

namespace polycontain::opt {

LinExpr& LinExpr::add_scaled(const LinExpr& other, double s) {
  if (s == 0.0) return *this;
  terms_.reserve(terms_.size() + other.terms_.size());
  for (const auto& t : other.terms_) terms_.push_back({t.var, t.coef * s});
  constant_ += s * other.constant_;
  return *this;
}

LinExpr& LinExpr::operator*=(double s) {
  for (auto& t : terms_) t.coef *= s;
  constant_ *= s;
  return *this;
}

double LinExpr::evaluate(const std::vector<double>& values) const {
  double v = constant_;
  for (const auto& t : terms_) v += t.coef * values[static_cast<size_t>(t.var)];
  return v;
}

LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
LinExpr operator*(double s, LinExpr a) { return a *= s; }

VarId LinearModel::add_variable(double lower, double upper, VarKind kind) {
  if (std::isnan(lower) || std::isnan(upper)) {
    fail(ErrorCode::kInvalidInput, "add_variable: NaN bound");
  }
  if (kind == VarKind::kBinary) {
    lower = std::max(lower, 0.0);
    upper = std::min(upper, 1.0);
  }
  variables_.push_back({lower, upper, kind});
  return static_cast<VarId>(variables_.size() - 1);
}

void LinearModel::set_bounds(VarId id, double lower, double upper) {
  auto& v = variables_.at(static_cast<size_t>(id));
  v.lower = lower;
  v.upper = upper;
}

void LinearModel::set_kind(VarId id, VarKind kind) {
  auto& v = variables_.at(static_cast<size_t>(id));
  v.kind = kind;
  if (kind == VarKind::kBinary) {
    v.lower = std::max(v.lower, 0.0);
    v.upper = std::min(v.upper, 1.0);
  }
}

void LinearModel::add_constraint(const LinExpr& lhs, Relation relation, const LinExpr& rhs) {
  Constraint c;
  c.relation = relation;
  c.rhs = rhs.constant() - lhs.constant();
  if (!std::isfinite(c.rhs)) fail(ErrorCode::kInvalidInput, "add_constraint: non-finite rhs");
  c.terms.reserve(lhs.terms().size() + rhs.terms().size());
  for (const auto& t : lhs.terms()) c.terms.push_back(t);
  for (const auto& t : rhs.terms()) c.terms.push_back({t.var, -t.coef});
  const auto n = static_cast<VarId>(variables_.size());
  for (const auto& t : c.terms) {
    if (t.var < 0 || t.var >= n) fail(ErrorCode::kInvalidInput, "add_constraint: unknown variable");
    if (!std::isfinite(t.coef)) fail(ErrorCode::kInvalidInput, "add_constraint: non-finite coefficient");
  }
  std::sort(c.terms.begin(), c.terms.end(),
            [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> merged;
  merged.reserve(c.terms.size());
  for (const auto& t : c.terms) {
    if (!merged.empty() && merged.back().var == t.var) {
      merged.back().coef += t.coef;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
  c.terms = std::move(merged);
  constraints_.push_back(std::move(c));
}

void LinearModel::set_objective(const LinExpr& objective, Sense sense) {
  objective_ = objective;
  sense_ = sense;
}

bool LinearModel::has_binaries() const {
  return std::any_of(variables_.begin(), variables_.end(),
                     [](const Variable& v) { return v.kind == VarKind::kBinary; });
}

std::string LinearModel::dump() const {
  std::ostringstream out;
  out.precision(17);
  auto write_terms = [&](const std::vector<Term>& terms) {
    if (terms.empty()) out << "0";
    for (size_t k = 0; k < terms.size(); ++k) {
      if (k > 0) out << " + ";
      out << terms[k].coef << " x" << terms[k].var;
    }
  };
  switch (sense_) {
    case Sense::kMinimize: out << "minimize: "; break;
    case Sense::kMaximize: out << "maximize: "; break;
    case Sense::kFeasibility: out << "feasibility: "; break;
  }
  write_terms(objective_.terms());
  out << " + " << objective_.constant() << "\n";
  for (size_t i = 0; i < constraints_.size(); ++i) {
    const auto& c = constraints_[i];
    out << "c" << i << ": ";
    write_terms(c.terms);
    out << (c.relation == Relation::kEqual ? " = " : " <= ") << c.rhs << "\n";
  }
  for (size_t j = 0; j < variables_.size(); ++j) {
    const auto& v = variables_[j];
    out << "x" << j << " in [" << v.lower << ", " << v.upper << "]"
        << (v.kind == VarKind::kBinary ? " binary" : "") << "\n";
  }
  return out.str();
}

MatrixVar add_matrix_var(LinearModel& model, Index rows, Index cols, bool nonnegative,
                         bool binary) {
  if (rows < 0 || cols < 0) fail(ErrorCode::kInvalidInput, "add_matrix_var: negative shape");
  MatrixVar m;
  m.rows = rows;
  m.cols = cols;
  m.nonnegative = nonnegative || binary;
  m.ids.reserve(static_cast<size_t>(rows * cols));
  const double lower = m.nonnegative ? 0.0 : -kInf;
  const VarKind kind = binary ? VarKind::kBinary : VarKind::kContinuous;
  for (Index k = 0; k < rows * cols; ++k) {
    m.ids.push_back(model.add_variable(lower, binary ? 1.0 : kInf, kind));
  }
  return m;
}

SignedMatrixVar add_signed_matrix_var(LinearModel& model, Index rows, Index cols) {
  return {add_matrix_var(model, rows, cols, true), add_matrix_var(model, rows, cols, true)};
}

AffineMatrix::AffineMatrix(const MatrixVar& v) : AffineMatrix(v.rows, v.cols) {
  for (Index i = 0; i < rows_; ++i) {
    for (Index j = 0; j < cols_; ++j) (*this)(i, j) = LinExpr::var(v(i, j));
  }
}

AffineMatrix AffineMatrix::constant(const Matrix& m) {
  AffineMatrix out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out(i, j) = LinExpr(m(i, j));
  }
  return out;
}

AffineMatrix AffineMatrix::scaled(const Matrix& m, VarId var) {
  AffineMatrix out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out(i, j).add_term(var, m(i, j));
  }
  return out;
}

AffineMatrix AffineMatrix::block(Index r, Index c, Index nr, Index nc) const {
  if (r < 0 || c < 0 || r + nr > rows_ || c + nc > cols_) {
    fail(ErrorCode::kDimensionMismatch, "AffineMatrix::block out of range");
  }
  AffineMatrix out(nr, nc);
  for (Index i = 0; i < nr; ++i) {
    for (Index j = 0; j < nc; ++j) out(i, j) = (*this)(r + i, c + j);
  }
  return out;
}

AffineMatrix AffineMatrix::transpose() const {
  AffineMatrix out(cols_, rows_);
  for (Index i = 0; i < rows_; ++i) {
    for (Index j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  }
  return out;
}

AffineMatrix& AffineMatrix::operator+=(const AffineMatrix& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_) {
    fail(ErrorCode::kDimensionMismatch, "AffineMatrix +: shape mismatch");
  }
  for (size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
  return *this;
}

AffineMatrix& AffineMatrix::operator-=(const AffineMatrix& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_) {
    fail(ErrorCode::kDimensionMismatch, "AffineMatrix -: shape mismatch");
  }
  for (size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
  return *this;
}

AffineMatrix& AffineMatrix::operator*=(double s) {
  for (auto& e : entries_) e *= s;
  return *this;
}

Matrix AffineMatrix::evaluate(const std::vector<double>& values) const {
  Matrix out(rows_, cols_);
  for (Index i = 0; i < rows_; ++i) {
    for (Index j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j).evaluate(values);
  }
  return out;
}

AffineMatrix operator+(AffineMatrix a, const AffineMatrix& b) { return a += b; }
AffineMatrix operator-(AffineMatrix a, const AffineMatrix& b) { return a -= b; }
AffineMatrix operator*(double s, AffineMatrix a) { return a *= s; }

AffineMatrix operator*(const Matrix& a, const AffineMatrix& b) {
  if (a.cols() != b.rows()) fail(ErrorCode::kDimensionMismatch, "Matrix * AffineMatrix: shape mismatch");
  AffineMatrix out(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index k = 0; k < a.cols(); ++k) {
      const double s = a(i, k);
      if (s == 0.0) continue;
      for (Index j = 0; j < b.cols(); ++j) out(i, j).add_scaled(b(k, j), s);
    }
  }
  return out;
}

AffineMatrix operator*(const AffineMatrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) fail(ErrorCode::kDimensionMismatch, "AffineMatrix * Matrix: shape mismatch");
  AffineMatrix out(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index k = 0; k < a.cols(); ++k) {
      for (Index j = 0; j < b.cols(); ++j) {
        const double s = b(k, j);
        if (s != 0.0) out(i, j).add_scaled(a(i, k), s);
      }
    }
  }
  return out;
}

AffineMatrix hstack(const std::vector<AffineMatrix>& blocks) {
  Index rows = blocks.empty() ? 0 : blocks.front().rows();
  Index cols = 0;
  for (const auto& b : blocks) {
    if (b.rows() != rows) fail(ErrorCode::kDimensionMismatch, "hstack: row counts differ");
    cols += b.cols();
  }
  AffineMatrix out(rows, cols);
  Index c0 = 0;
  for (const auto& b : blocks) {
    for (Index i = 0; i < rows; ++i) {
      for (Index j = 0; j < b.cols(); ++j) out(i, c0 + j) = b(i, j);
    }
    c0 += b.cols();
  }
  return out;
}

AffineMatrix vstack(const std::vector<AffineMatrix>& blocks) {
  Index cols = blocks.empty() ? 0 : blocks.front().cols();
  Index rows = 0;
  for (const auto& b : blocks) {
    if (b.cols() != cols) fail(ErrorCode::kDimensionMismatch, "vstack: column counts differ");
    rows += b.rows();
  }
  AffineMatrix out(rows, cols);
  Index r0 = 0;
  for (const auto& b : blocks) {
    for (Index i = 0; i < b.rows(); ++i) {
      for (Index j = 0; j < cols; ++j) out(r0 + i, j) = b(i, j);
    }
    r0 += b.rows();
  }
  return out;
}

AffineMatrix row_sums(const AffineMatrix& m) {
  AffineMatrix out(m.rows(), 1);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out(i, 0) += m(i, j);
  }
  return out;
}

namespace {

void add_matrix_relation(LinearModel& model, const AffineMatrix& lhs, const AffineMatrix& rhs,
                         Relation rel) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
    fail(ErrorCode::kDimensionMismatch,
         "matrix relation: lhs is " + std::to_string(lhs.rows()) + "x" +
             std::to_string(lhs.cols()) + ", rhs is " + std::to_string(rhs.rows()) + "x" +
             std::to_string(rhs.cols()));
  }
  for (Index i = 0; i < lhs.rows(); ++i) {
    for (Index j = 0; j < lhs.cols(); ++j) model.add_constraint(lhs(i, j), rel, rhs(i, j));
  }
}

}  // namespace

void add_matrix_equality(LinearModel& model, const AffineMatrix& lhs, const AffineMatrix& rhs) {
  add_matrix_relation(model, lhs, rhs, Relation::kEqual);
}

void add_matrix_less_equal(LinearModel& model, const AffineMatrix& lhs, const AffineMatrix& rhs) {
  add_matrix_relation(model, lhs, rhs, Relation::kLessEqual);
}

const char* to_string(Status s) {
  switch (s) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
  }
  return "unknown";
}

double max_violation(const LinearModel& model, const std::vector<double>& values) {
  double worst = 0.0;
  const auto& vars = model.variables();
  for (size_t j = 0; j < vars.size(); ++j) {
    const double x = values[j];
    worst = std::max({worst, vars[j].lower - x, x - vars[j].upper});
    if (vars[j].kind == VarKind::kBinary) {
      worst = std::max(worst, std::min(std::abs(x), std::abs(x - 1.0)));
    }
  }
  for (const auto& c : model.constraints()) {
    double lhs = 0.0;
    for (const auto& t : c.terms) lhs += t.coef * values[static_cast<size_t>(t.var)];
    const double r = lhs - c.rhs;
    worst = std::max(worst, c.relation == Relation::kEqual ? std::abs(r) : r);
  }
  return worst;
}

}  // namespace polycontain::opt
