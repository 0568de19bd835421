// Dense two-phase tableau simplex and a branch-and-bound layer on top of it.
//
// Model variables are mapped to nonnegative columns (shifted, reflected or
// split), finite upper bounds become explicit rows, and every row is scaled to
// unit max-norm before the tableau is built.

#include <algorithm>
#include <cmath>
#include <mutex>
#include <queue>
#include <string>

#include "polycontain/error.hpp"
#include "polycontain/optimize.hpp"

namespace polycontain::opt {

namespace {

enum class MapKind { kFixed, kShift, kReflect, kSplit };

struct ColumnMap {
  MapKind kind = MapKind::kFixed;
  Index col = -1;
  double offset = 0.0;
};

struct StandardForm {
  Index rows = 0;
  Index cols = 0;
  std::vector<double> a;  // rows x cols, row-major
  std::vector<double> b;
  std::vector<char> inequality;
  std::vector<double> c;
  std::vector<ColumnMap> maps;
  bool infeasible = false;
};

StandardForm to_standard_form(const LinearModel& model, const std::vector<double>& lower,
                              const std::vector<double>& upper, double feas_tol) {
  StandardForm sf;
  const auto nv = static_cast<size_t>(model.num_variables());
  sf.maps.resize(nv);
  std::vector<std::pair<Index, double>> upper_rows;
  for (size_t j = 0; j < nv; ++j) {
    const double l = lower[j];
    const double u = upper[j];
    auto& m = sf.maps[j];
    if (l > u + feas_tol) {
      sf.infeasible = true;
      return sf;
    }
    if (std::isfinite(l) && std::isfinite(u) && u - l <= 1e-12) {
      m = {MapKind::kFixed, -1, l};
    } else if (std::isfinite(l)) {
      m = {MapKind::kShift, sf.cols++, l};
      if (std::isfinite(u)) upper_rows.emplace_back(m.col, u - l);
    } else if (std::isfinite(u)) {
      m = {MapKind::kReflect, sf.cols++, u};
    } else {
      m = {MapKind::kSplit, sf.cols, 0.0};
      sf.cols += 2;
    }
  }

  std::vector<double> row(static_cast<size_t>(sf.cols));
  auto push_row = [&](double rhs, bool ineq) {
    double scale = 0.0;
    for (double v : row) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) {
      const bool ok = ineq ? rhs >= -feas_tol : std::abs(rhs) <= feas_tol;
      if (!ok) sf.infeasible = true;
      return;
    }
    const double inv = 1.0 / scale;
    for (double v : row) sf.a.push_back(v * inv);
    sf.b.push_back(rhs * inv);
    sf.inequality.push_back(ineq ? 1 : 0);
    ++sf.rows;
  };

  for (const auto& con : model.constraints()) {
    std::fill(row.begin(), row.end(), 0.0);
    double rhs = con.rhs;
    for (const auto& t : con.terms) {
      const auto& m = sf.maps[static_cast<size_t>(t.var)];
      switch (m.kind) {
        case MapKind::kFixed: rhs -= t.coef * m.offset; break;
        case MapKind::kShift:
          rhs -= t.coef * m.offset;
          row[static_cast<size_t>(m.col)] += t.coef;
          break;
        case MapKind::kReflect:
          rhs -= t.coef * m.offset;
          row[static_cast<size_t>(m.col)] -= t.coef;
          break;
        case MapKind::kSplit:
          row[static_cast<size_t>(m.col)] += t.coef;
          row[static_cast<size_t>(m.col + 1)] -= t.coef;
          break;
      }
    }
    push_row(rhs, con.relation == Relation::kLessEqual);
    if (sf.infeasible) return sf;
  }
  for (const auto& [col, bound] : upper_rows) {
    std::fill(row.begin(), row.end(), 0.0);
    row[static_cast<size_t>(col)] = 1.0;
    push_row(bound, true);
  }

  sf.c.assign(static_cast<size_t>(sf.cols), 0.0);
  if (model.sense() != Sense::kFeasibility) {
    const double sign = model.sense() == Sense::kMaximize ? -1.0 : 1.0;
    for (const auto& t : model.objective().terms()) {
      const auto& m = sf.maps[static_cast<size_t>(t.var)];
      switch (m.kind) {
        case MapKind::kFixed: break;
        case MapKind::kShift: sf.c[static_cast<size_t>(m.col)] += sign * t.coef; break;
        case MapKind::kReflect: sf.c[static_cast<size_t>(m.col)] -= sign * t.coef; break;
        case MapKind::kSplit:
          sf.c[static_cast<size_t>(m.col)] += sign * t.coef;
          sf.c[static_cast<size_t>(m.col + 1)] -= sign * t.coef;
          break;
      }
    }
  }
  return sf;
}

struct TableauResult {
  Status status = Status::kInfeasible;
  std::vector<double> x;  // structural columns
  long iterations = 0;
};

class Tableau {
 public:
  Tableau(const StandardForm& sf, const SolverOptions& opt) : sf_(sf), opt_(opt) {
    m_ = sf.rows;
    n_ = sf.cols;
    // Slack columns for inequality rows, artificial columns where no slack
    // can start in the basis.
    slack_col_.assign(static_cast<size_t>(m_), -1);
    art_col_.assign(static_cast<size_t>(m_), -1);
    sign_.assign(static_cast<size_t>(m_), 1.0);
    Index next = n_;
    for (Index i = 0; i < m_; ++i) {
      if (sf.inequality[static_cast<size_t>(i)]) slack_col_[static_cast<size_t>(i)] = next++;
    }
    slack_end_ = next;
    for (Index i = 0; i < m_; ++i) {
      const bool neg = sf.b[static_cast<size_t>(i)] < 0;
      sign_[static_cast<size_t>(i)] = neg ? -1.0 : 1.0;
      if (!sf.inequality[static_cast<size_t>(i)] || neg) art_col_[static_cast<size_t>(i)] = next++;
    }
    total_ = next;
    w_ = total_ + 1;
    t_.assign(static_cast<size_t>(m_ * w_), 0.0);
    basis_.assign(static_cast<size_t>(m_), -1);
    for (Index i = 0; i < m_; ++i) {
      const double s = sign_[static_cast<size_t>(i)];
      double* r = row(i);
      for (Index j = 0; j < n_; ++j) r[j] = s * sf.a[static_cast<size_t>(i * n_ + j)];
      if (slack_col_[static_cast<size_t>(i)] >= 0) r[slack_col_[static_cast<size_t>(i)]] = s;
      if (art_col_[static_cast<size_t>(i)] >= 0) {
        r[art_col_[static_cast<size_t>(i)]] = 1.0;
        basis_[static_cast<size_t>(i)] = art_col_[static_cast<size_t>(i)];
      } else {
        basis_[static_cast<size_t>(i)] = slack_col_[static_cast<size_t>(i)];
      }
      r[total_] = s * sf.b[static_cast<size_t>(i)];
    }
    cost1_.assign(static_cast<size_t>(w_), 0.0);
    cost2_.assign(static_cast<size_t>(w_), 0.0);
    for (Index j = 0; j < n_; ++j) cost2_[static_cast<size_t>(j)] = sf.c[static_cast<size_t>(j)];
    double cmax = 0.0;
    for (double v : sf.c) cmax = std::max(cmax, std::abs(v));
    opt_tol2_ = 1e-9 * std::max(1.0, cmax);
    for (Index i = 0; i < m_; ++i) {
      if (art_col_[static_cast<size_t>(i)] < 0) continue;
      const double* r = row(i);
      for (Index j = 0; j < w_; ++j) cost1_[static_cast<size_t>(j)] -= r[j];
      cost1_[static_cast<size_t>(art_col_[static_cast<size_t>(i)])] = 0.0;
    }
    bmax_ = 0.0;
    for (double v : sf.b) bmax_ = std::max(bmax_, std::abs(v));
  }

  TableauResult run() {
    TableauResult res;
    bool has_art = std::any_of(art_col_.begin(), art_col_.end(), [](Index c) { return c >= 0; });
    if (has_art) {
      phase_ = 1;
      const Status s1 = iterate(cost1_, slack_end_ + (total_ - slack_end_), res.iterations);
      (void)s1;
      const double infeas = -cost1_[static_cast<size_t>(total_)];
      if (infeas > opt_.feasibility_tol * (1.0 + bmax_)) {
        res.status = Status::kInfeasible;
        return res;
      }
      drive_out_artificials();
    }
    phase_ = 2;
    const Status s2 = iterate(cost2_, slack_end_, res.iterations);
    res.status = s2;
    res.x = primal_values();
    return res;
  }

 private:
  double* row(Index i) { return t_.data() + i * w_; }
  const double* row(Index i) const { return t_.data() + i * w_; }

  bool is_artificial(Index col) const { return col >= slack_end_; }

  // Columns [0, entering_end) may enter the basis.
  Status iterate(std::vector<double>& cost, Index entering_end, long& iterations) {
    const double opt_tol = phase_ == 1 ? 1e-9 : opt_tol2_;
    long degenerate_run = 0;
    bool bland = false;
    for (;;) {
      if (iterations >= opt_.iteration_limit) {
        fail(ErrorCode::kSolverFailure,
             "simplex: iteration limit reached (" + std::to_string(iterations) + " pivots, " +
                 std::to_string(m_) + " rows)");
      }
      Index enter = -1;
      if (bland) {
        for (Index j = 0; j < entering_end; ++j) {
          if (cost[static_cast<size_t>(j)] < -opt_tol) {
            enter = j;
            break;
          }
        }
      } else {
        double best = -opt_tol;
        for (Index j = 0; j < entering_end; ++j) {
          if (cost[static_cast<size_t>(j)] < best) {
            best = cost[static_cast<size_t>(j)];
            enter = j;
          }
        }
      }
      if (enter < 0) {
        // Confirm against a fresh factorization before stopping.
        if (since_reinvert_ == 0 || !reinvert()) return Status::kOptimal;
        continue;
      }

      const Index leave = ratio_test(enter);
      if (leave < 0) return Status::kUnbounded;
      const double step = std::max(row(leave)[total_], 0.0) / row(leave)[enter];
      if (step <= 1e-12) {
        if (++degenerate_run > 50) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
      pivot(leave, enter);
      ++iterations;
      if (++since_reinvert_ >= std::max<long>(kReinvertEvery, m_)) reinvert();
    }
  }

  // Rebuilds the tableau and both cost rows from the original data using an
  // LU of the current basis. Returns false when the basis is too close to
  // singular, leaving the tableau untouched.
  bool reinvert() {
    since_reinvert_ = 0;
    if (m_ == 0) return true;
    const Index active_end = phase_ == 1 ? total_ : slack_end_;
    Matrix basis(m_, m_);
    for (Index k = 0; k < m_; ++k) {
      const Index col = basis_[static_cast<size_t>(k)];
      for (Index i = 0; i < m_; ++i) basis(i, k) = column_entry(i, col);
    }
    Eigen::PartialPivLU<Matrix> lu(basis);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-12)) return false;
    Matrix orig(m_, active_end + 1);
    for (Index i = 0; i < m_; ++i) {
      for (Index j = 0; j < active_end; ++j) orig(i, j) = column_entry(i, j);
      orig(i, active_end) = sign_[static_cast<size_t>(i)] * sf_.b[static_cast<size_t>(i)];
    }
    const Matrix fresh = lu.solve(orig);
    if (!fresh.allFinite()) return false;
    for (Index i = 0; i < m_; ++i) {
      double* r = row(i);
      for (Index j = 0; j < active_end; ++j) {
        const double v = fresh(i, j);
        r[j] = std::abs(v) < 1e-13 ? 0.0 : v;
      }
      r[total_] = fresh(i, active_end);
      r[basis_[static_cast<size_t>(i)]] = 1.0;
    }
    auto rebuild = [&](std::vector<double>& cost, auto&& original) {
      for (Index j = 0; j < active_end; ++j) cost[static_cast<size_t>(j)] = original(j);
      cost[static_cast<size_t>(total_)] = 0.0;
      for (Index i = 0; i < m_; ++i) {
        const double cb = original(basis_[static_cast<size_t>(i)]);
        if (cb == 0.0) continue;
        const double* r = row(i);
        for (Index j = 0; j < active_end; ++j) cost[static_cast<size_t>(j)] -= cb * r[j];
        cost[static_cast<size_t>(total_)] -= cb * r[total_];
      }
      for (Index i = 0; i < m_; ++i) cost[static_cast<size_t>(basis_[static_cast<size_t>(i)])] = 0.0;
    };
    rebuild(cost2_, [&](Index j) { return j < n_ ? sf_.c[static_cast<size_t>(j)] : 0.0; });
    if (phase_ == 1) rebuild(cost1_, [&](Index j) { return is_artificial(j) ? 1.0 : 0.0; });
    return true;
  }

  Index ratio_test(Index enter) const {
    const double ptol = opt_.pivot_tol;
    if (phase_ == 2) {
      // A basic artificial must stay at zero, so any nonzero entry blocks.
      for (Index i = 0; i < m_; ++i) {
        if (is_artificial(basis_[static_cast<size_t>(i)]) && std::abs(row(i)[enter]) > ptol) return i;
      }
    }
    // Harris two-pass: relaxed bound first, then the largest pivot within it.
    const double relax = 1e-9;
    double bound = kInf;
    for (Index i = 0; i < m_; ++i) {
      const double a = row(i)[enter];
      if (a <= ptol) continue;
      bound = std::min(bound, (std::max(row(i)[total_], 0.0) + relax) / a);
    }
    if (!std::isfinite(bound)) return -1;
    Index leave = -1;
    double best_a = 0.0;
    for (Index i = 0; i < m_; ++i) {
      const double a = row(i)[enter];
      if (a <= ptol) continue;
      if (std::max(row(i)[total_], 0.0) / a <= bound && a > best_a) {
        best_a = a;
        leave = i;
      }
    }
    return leave;
  }

  void pivot(Index r, Index c) {
    double* pr = row(r);
    const double inv = 1.0 / pr[c];
    // Phase 2 never looks at artificial columns again.
    const Index active_end = phase_ == 1 ? total_ : slack_end_;
    nz_.clear();
    for (Index j = 0; j < active_end; ++j) {
      if (pr[j] != 0.0) {
        pr[j] *= inv;
        if (std::abs(pr[j]) < 1e-14) {
          pr[j] = 0.0;
        } else {
          nz_.push_back(j);
        }
      }
    }
    pr[total_] *= inv;
    pr[c] = 1.0;
    nz_.push_back(total_);
    auto eliminate = [&](double* target) {
      const double f = target[c];
      if (f == 0.0) return;
      for (Index j : nz_) {
        double v = target[j] - f * pr[j];
        target[j] = std::abs(v) < 1e-13 ? 0.0 : v;
      }
      target[c] = 0.0;
    };
    for (Index i = 0; i < m_; ++i) {
      if (i != r) eliminate(row(i));
    }
    eliminate(cost2_.data());
    if (phase_ == 1) eliminate(cost1_.data());
    basis_[static_cast<size_t>(r)] = c;
  }

  void drive_out_artificials() {
    for (Index i = 0; i < m_; ++i) {
      if (!is_artificial(basis_[static_cast<size_t>(i)])) continue;
      const double* r = row(i);
      Index best = -1;
      double best_a = 1e-7;
      for (Index j = 0; j < slack_end_; ++j) {
        if (std::abs(r[j]) > best_a) {
          best_a = std::abs(r[j]);
          best = j;
        }
      }
      // No candidate means the row is redundant; the artificial stays basic at zero.
      if (best >= 0) pivot(i, best);
    }
  }

  std::vector<double> primal_values() const {
    std::vector<double> full(static_cast<size_t>(total_), 0.0);
    for (Index i = 0; i < m_; ++i) {
      full[static_cast<size_t>(basis_[static_cast<size_t>(i)])] = row(i)[total_];
    }
    refine(full);
    std::vector<double> x(full.begin(), full.begin() + n_);
    for (double& v : x) v = std::max(v, 0.0);
    return x;
  }

  // Recomputes basic values from the unmodified rows with a fresh LU of the
  // basis; keeps whichever solution has the smaller residual.
  void refine(std::vector<double>& full) const {
    if (m_ == 0) return;
    Matrix basis(m_, m_);
    Vector rhs(m_);
    for (Index i = 0; i < m_; ++i) rhs(i) = sign_[static_cast<size_t>(i)] * sf_.b[static_cast<size_t>(i)];
    for (Index k = 0; k < m_; ++k) {
      const Index col = basis_[static_cast<size_t>(k)];
      for (Index i = 0; i < m_; ++i) basis(i, k) = column_entry(i, col);
    }
    Eigen::PartialPivLU<Matrix> lu(basis);
    Vector xb = lu.solve(rhs);
    if (!xb.allFinite()) return;
    auto residual = [&](const std::vector<double>& v) {
      double worst = 0.0;
      for (Index i = 0; i < m_; ++i) {
        double s = 0.0;
        for (Index j = 0; j < total_; ++j) {
          const double x = v[static_cast<size_t>(j)];
          if (x != 0.0) s += column_entry(i, j) * x;
        }
        worst = std::max(worst, std::abs(s - rhs(i)));
      }
      for (double x : v) worst = std::max(worst, -x);
      return worst;
    };
    std::vector<double> candidate(static_cast<size_t>(total_), 0.0);
    for (Index k = 0; k < m_; ++k) {
      candidate[static_cast<size_t>(basis_[static_cast<size_t>(k)])] = xb(k);
    }
    if (residual(candidate) <= residual(full)) full = std::move(candidate);
  }

  double column_entry(Index i, Index col) const {
    const double s = sign_[static_cast<size_t>(i)];
    if (col < n_) return s * sf_.a[static_cast<size_t>(i * n_ + col)];
    if (col < slack_end_) return slack_col_[static_cast<size_t>(i)] == col ? s : 0.0;
    return art_col_[static_cast<size_t>(i)] == col ? 1.0 : 0.0;
  }

  const StandardForm& sf_;
  const SolverOptions& opt_;
  Index m_ = 0;
  Index n_ = 0;
  Index slack_end_ = 0;
  Index total_ = 0;
  Index w_ = 0;
  int phase_ = 1;
  long since_reinvert_ = 0;
  static constexpr long kReinvertEvery = 100;
  double opt_tol2_ = 1e-9;
  double bmax_ = 0.0;
  std::vector<Index> slack_col_;
  std::vector<Index> art_col_;
  std::vector<double> sign_;
  std::vector<double> t_;
  std::vector<double> cost1_;
  std::vector<double> cost2_;
  std::vector<Index> basis_;
  std::vector<Index> nz_;
};

constexpr double kAcceptDrift = 1e-6;

// Largest row violation relative to the magnitude of the terms in that row.
double relative_violation(const LinearModel& model, const std::vector<double>& values) {
  double worst = 0.0;
  for (const auto& c : model.constraints()) {
    double lhs = 0.0;
    double mag = std::abs(c.rhs);
    for (const auto& t : c.terms) {
      const double v = t.coef * values[static_cast<size_t>(t.var)];
      lhs += v;
      mag += std::abs(v);
    }
    const double r = lhs - c.rhs;
    worst = std::max(worst, (c.relation == Relation::kEqual ? std::abs(r) : r) / (1.0 + mag));
  }
  return worst;
}

Solution solve_with_bounds(const LinearModel& model, const std::vector<double>& lower,
                           const std::vector<double>& upper, const SolverOptions& options) {
  Solution sol;
  const StandardForm sf = to_standard_form(model, lower, upper, options.feasibility_tol);
  if (sf.infeasible) {
    sol.status = Status::kInfeasible;
    return sol;
  }
  Tableau tableau(sf, options);
  TableauResult tr = tableau.run();
  sol.status = tr.status;
  sol.iterations = tr.iterations;
  if (tr.status == Status::kInfeasible) return sol;
  const auto nv = static_cast<size_t>(model.num_variables());
  sol.values.assign(nv, 0.0);
  for (size_t j = 0; j < nv; ++j) {
    const auto& m = sf.maps[j];
    switch (m.kind) {
      case MapKind::kFixed: sol.values[j] = m.offset; break;
      case MapKind::kShift: sol.values[j] = m.offset + tr.x[static_cast<size_t>(m.col)]; break;
      case MapKind::kReflect: sol.values[j] = m.offset - tr.x[static_cast<size_t>(m.col)]; break;
      case MapKind::kSplit:
        sol.values[j] = tr.x[static_cast<size_t>(m.col)] - tr.x[static_cast<size_t>(m.col + 1)];
        break;
    }
  }
  sol.objective_value = model.sense() == Sense::kFeasibility ? 0.0 : model.objective().evaluate(sol.values);
  const double drift = relative_violation(model, sol.values);
  if (drift > kAcceptDrift) {
    fail(ErrorCode::kSolverFailure, "simplex: final point violates a row by " +
                                        std::to_string(drift) + " (relative); numerical breakdown");
  }
  return sol;
}

void bounds_of(const LinearModel& model, std::vector<double>& lower, std::vector<double>& upper) {
  lower.clear();
  upper.clear();
  for (const auto& v : model.variables()) {
    lower.push_back(v.lower);
    upper.push_back(v.upper);
  }
}

}  // namespace

Solution solve_lp(const LinearModel& model, const SolverOptions& options) {
  if (model.has_binaries()) {
    fail(ErrorCode::kInvalidInput, "solve_lp: model has binary variables; use solve_milp");
  }
  std::vector<double> lower;
  std::vector<double> upper;
  bounds_of(model, lower, upper);
  return solve_with_bounds(model, lower, upper, options);
}

Solution solve_milp(const LinearModel& model, const SolverOptions& options) {
  std::vector<double> lower;
  std::vector<double> upper;
  bounds_of(model, lower, upper);
  std::vector<VarId> binaries;
  for (VarId j = 0; j < static_cast<VarId>(model.num_variables()); ++j) {
    if (model.variables()[static_cast<size_t>(j)].kind == VarKind::kBinary) binaries.push_back(j);
  }
  if (binaries.empty()) return solve_with_bounds(model, lower, upper, options);

  struct Node {
    std::vector<std::pair<VarId, double>> fixings;
    double bound;
    long order;
  };
  const bool has_objective = model.sense() != Sense::kFeasibility;
  // Objective in minimization form, so "better" is always "smaller".
  const double sense_sign = model.sense() == Sense::kMaximize ? -1.0 : 1.0;
  auto node_cmp = [](const Node& a, const Node& b) {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.order > b.order;
  };
  std::priority_queue<Node, std::vector<Node>, decltype(node_cmp)> best_first(node_cmp);
  std::vector<Node> depth_first;
  long order = 0;
  auto push = [&](Node n) {
    if (has_objective) {
      best_first.push(std::move(n));
    } else {
      depth_first.push_back(std::move(n));
    }
  };
  auto empty = [&] { return has_objective ? best_first.empty() : depth_first.empty(); };
  auto pop = [&] {
    Node n;
    if (has_objective) {
      n = best_first.top();
      best_first.pop();
    } else {
      n = std::move(depth_first.back());
      depth_first.pop_back();
    }
    return n;
  };

  Solution incumbent;
  incumbent.status = Status::kInfeasible;
  double incumbent_value = kInf;
  long nodes = 0;
  long iterations = 0;
  push(Node{{}, -kInf, order++});
  std::vector<double> lo;
  std::vector<double> up;
  while (!empty()) {
    Node node = pop();
    if (node.bound >= incumbent_value - 1e-9) continue;
    if (++nodes > options.node_limit) {
      fail(ErrorCode::kResourceLimit,
           "solve_milp: node limit of " + std::to_string(options.node_limit) + " exceeded");
    }
    lo = lower;
    up = upper;
    for (const auto& [var, val] : node.fixings) {
      lo[static_cast<size_t>(var)] = val;
      up[static_cast<size_t>(var)] = val;
    }
    Solution relax = solve_with_bounds(model, lo, up, options);
    iterations += relax.iterations;
    if (relax.status == Status::kInfeasible) continue;
    if (relax.status == Status::kUnbounded) {
      relax.nodes = nodes;
      relax.iterations = iterations;
      return relax;
    }
    const double value = sense_sign * relax.objective_value;
    if (value >= incumbent_value - 1e-9) continue;

    VarId branch = -1;
    double most = 1e-6;
    for (VarId j : binaries) {
      const double x = relax.values[static_cast<size_t>(j)];
      const double frac = std::min(x - std::floor(x), std::ceil(x) - x);
      if (frac > most) {
        most = frac;
        branch = j;
      }
    }
    if (branch < 0) {
      for (VarId j : binaries) {
        double& x = relax.values[static_cast<size_t>(j)];
        x = std::round(x);
      }
      incumbent = relax;
      incumbent_value = value;
      if (!has_objective) break;
      continue;
    }
    const double x = relax.values[static_cast<size_t>(branch)];
    Node down{node.fixings, value, order++};
    down.fixings.emplace_back(branch, 0.0);
    Node upn{node.fixings, value, order++};
    upn.fixings.emplace_back(branch, 1.0);
    // Depth-first explores the nearer rounding first (pushed last).
    if (x >= 0.5) {
      push(std::move(down));
      push(std::move(upn));
    } else {
      push(std::move(upn));
      push(std::move(down));
    }
  }
  incumbent.nodes = nodes;
  incumbent.iterations = iterations;
  if (incumbent.status == Status::kOptimal && model.sense() != Sense::kFeasibility) {
    incumbent.objective_value = model.objective().evaluate(incumbent.values);
  }
  return incumbent;
}

Solution BuiltinSolver::solve(const LinearModel& model) const {
  return model.has_binaries() ? solve_milp(model, options_) : solve_lp(model, options_);
}

namespace {

std::mutex& solver_mutex() {
  static std::mutex m;
  return m;
}

std::shared_ptr<const Solver>& solver_slot() {
  static std::shared_ptr<const Solver> slot;
  return slot;
}

// Every solver ever installed is kept alive so references handed out by
// default_solver() never dangle.
std::vector<std::shared_ptr<const Solver>>& retired() {
  static std::vector<std::shared_ptr<const Solver>> all;
  return all;
}

SolverOptions& options_slot() {
  static SolverOptions o;
  return o;
}

}  // namespace

const Solver& default_solver() {
  std::lock_guard lock(solver_mutex());
  auto& slot = solver_slot();
  if (!slot) {
    slot = std::make_shared<BuiltinSolver>(options_slot());
    retired().push_back(slot);
  }
  return *slot;
}

void set_default_solver(std::shared_ptr<const Solver> solver) {
  std::lock_guard lock(solver_mutex());
  retired().push_back(solver);
  solver_slot() = std::move(solver);
}

void set_default_options(const SolverOptions& options) {
  std::lock_guard lock(solver_mutex());
  options_slot() = options;
  solver_slot().reset();
}

SolverOptions default_options() {
  std::lock_guard lock(solver_mutex());
  return options_slot();
}

}  // namespace polycontain::opt
