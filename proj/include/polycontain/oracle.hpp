#pragma once

#include <cstdint>
#include <vector>

#include "polycontain/geometry.hpp"

namespace polycontain::oracle {

using geo::AHPolytope;
using geo::HPolytope;
using geo::Zonotope;
using numerics::Index;
using numerics::Matrix;
using numerics::Vector;

inline constexpr Index kMaxZonotopeColumns = 20;

// All 2^cols points center + G s, s in {-1,1}^cols, as columns.
Matrix zonotope_vertex_candidates(const Zonotope& z);

// LP feasibility of center + map * zeta = p, H zeta <= h.
bool contains_point(const AHPolytope& set, const Vector& p, double tol = 1e-7);

// Basic feasible points of a polytope of dimension <= 3, deduplicated.
Matrix hpolytope_vertices_smalldim(const HPolytope& p);

// Images of the base vertices (or the box corners for zonotope-shaped
// inputs); a superset of the vertex set.
Matrix vertex_candidates(const AHPolytope& p);

bool containment_oracle(const Zonotope& inbody, const AHPolytope& circumbody);
bool containment_oracle(const AHPolytope& inbody, const AHPolytope& circumbody);
// Inbody against a union: true if some member contains every candidate.
bool containment_oracle(const AHPolytope& inbody, const std::vector<AHPolytope>& members);

struct LossRecord {
  Index dimension = 0;
  Index inbody_cols = 0;
  Index circumbody_cols = 0;
  double lambda_lossless = 0.0;
  double lambda_encoding = 0.0;
  double loss = 0.0;
};

struct LossSummary {
  std::vector<LossRecord> records;
  double fraction_below_001 = 0.0;
  double max_loss = 0.0;
  double min_loss = 0.0;
  // Counts per bin of width 0.005 starting at 0.
  std::vector<long> histogram;
};

struct LossExperimentConfig {
  Index n_min = 3;
  Index n_max = 6;
  // Column counts are drawn from [n, cols_max].
  Index cols_max = 12;
  long trials = 500;
  std::uint64_t seed = 0;
  // Off by default: centers are zero.
  bool random_centers = false;
};

// Largest s with center_x + s X_x B inside the zonotope circumbody, checked
// on every vertex candidate of the inbody.
double lambda_lossless(const Zonotope& inbody, const Zonotope& circumbody);

LossRecord loss_record(const Zonotope& inbody, const Zonotope& circumbody);
LossSummary loss_experiment(const LossExperimentConfig& cfg);
LossSummary summarize(std::vector<LossRecord> records);

}  // namespace polycontain::oracle
