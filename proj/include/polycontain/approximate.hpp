#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "polycontain/geometry.hpp"

namespace polycontain::approx {

using geo::HPolytope;
using geo::Zonotope;
using numerics::Index;
using numerics::Matrix;
using numerics::Vector;

struct AlternationConfig {
  double max_entry_step = 0.1;
  long max_iters = 100;
  double stall_tolerance = 1e-4;
  // Number of accepted iterates the stall test looks back over.
  long stall_window = 5;
  std::uint64_t seed = 0;
};

struct Iterate {
  Matrix decision;
  double bound = 0.0;
};

struct AlternationTrace {
  std::vector<Iterate> iterates;  // accepted iterates, starting with the initial one
  bool converged = false;
  long iterations = 0;  // LP subproblems solved, accepted or not
  long rejected = 0;
};

// Result of one trust-region subproblem.
struct Proposal {
  bool solved = false;
  Matrix next;
  double predicted_bound = 0.0;
};

// Exact re-verification at a trial point: nullopt when infeasible, otherwise
// the certified bound.
using ProposeFn = std::function<Proposal(const Matrix& current, double radius)>;
using VerifyFn = std::function<std::optional<double>(const Matrix& candidate)>;

struct StepResult {
  bool accepted = false;
  Matrix next;
  double bound = 0.0;
};

// One trust-region step: the proposal is accepted only if it re-verifies and
// does not increase the bound.
StepResult slp_step(const Matrix& current, double current_bound, double radius,
                    const ProposeFn& propose, const VerifyFn& verify);

// Runs slp_step until the stall, iteration or radius criteria fire.
AlternationTrace run_slp(const Matrix& start, double start_bound, const ProposeFn& propose,
                         const VerifyFn& verify, const AlternationConfig& cfg);

enum class ReductionMode { kOuter, kInner };
const char* to_string(ReductionMode m);

struct ReducedZonotope {
  Zonotope zonotope;
  double bound = 0.0;
  ReductionMode mode = ReductionMode::kOuter;
};

struct ReductionResult {
  ReducedZonotope reduced;
  AlternationTrace trace;  // decision matrices are the reduced generators
};

ReductionResult reduce_outer(const Zonotope& z, Index target_cols, const AlternationConfig& cfg);
ReductionResult reduce_inner(const Zonotope& z, Index target_cols, const AlternationConfig& cfg);

// Exact certificates used to verify each iterate. Returned value is the
// smallest delta with X_red = X G1 + D, |D| row sums <= delta (outer) or
// X = X_red G1 + D (inner), or nullopt when the containment part fails.
std::optional<double> outer_bound(const Matrix& x, const Matrix& x_red);
std::optional<double> inner_bound(const Matrix& x, const Matrix& x_red);

struct ProjectionResult {
  HPolytope set;   // {x | H_x (x - center) <= 1} written as H x <= h
  Matrix H_x;
  Vector center;
  double epsilon = 0.0;
  AlternationTrace trace;  // decision matrices are H_x
};

// Inner approximation of {x | exists u: H x + F u <= g} by
// center + {x | H_x x <= 1} with num_rows rows.
ProjectionResult project_inner(const HPolytope& lifted, Index n, Index num_rows,
                               const Vector& center, const AlternationConfig& cfg,
                               const std::optional<Matrix>& warm_start = std::nullopt);

// Certified epsilon for a given H_x, or nullopt when the set is not inside
// the projection.
std::optional<double> projection_bound(const HPolytope& lifted, Index n, const Vector& center,
                                       const Matrix& H_x);

// Feasible set of x_{t+1} = A x_t + B u_t with box constraints on x_0..x_N
// and u_0..u_{N-1} and x_N = 0, over (x_0, u_0..u_{N-1}).
HPolytope mpc_feasible_set(const Matrix& A, const Matrix& B, Index horizon, double x_bound,
                           double u_bound);
// The 2-state instance with horizon 20 (128 rows in R^22).
HPolytope mpc_example(Index horizon = 20);

}  // namespace polycontain::approx
