#pragma once

#include <vector>

#include "polycontain/numerics.hpp"

namespace polycontain::geo {

using numerics::Index;
using numerics::Matrix;
using numerics::Vector;

// {x | Hx <= h}. H may have zero columns (the base of a point set).
struct HPolytope {
  Matrix H;
  Vector h;

  Index dim() const { return H.cols(); }
  Index rows() const { return H.rows(); }
};

// center + map * base
struct AHPolytope {
  Vector center;
  Matrix map;
  HPolytope base;

  Index dim() const { return center.size(); }
};

// center + generator * unit box
struct Zonotope {
  Vector center;
  Matrix generator;

  Index dim() const { return center.size(); }
  Index cols() const { return generator.cols(); }
  double order() const {
    return dim() == 0 ? 0.0 : static_cast<double>(cols()) / static_cast<double>(dim());
  }
};

// Validating constructors: shapes, finiteness, at least one row and a
// trivial kernel of H.
HPolytope make_hpolytope(Matrix H, Vector h);
AHPolytope make_ahpolytope(Vector center, Matrix map, HPolytope base);
Zonotope make_zonotope(Vector center, Matrix generator);

void validate(const HPolytope& p);
void validate(const AHPolytope& p);
void validate(const Zonotope& z);

// [I; -I] x <= 1
HPolytope unit_box(Index n);

AHPolytope as_ahpolytope(const Zonotope& z);
AHPolytope as_ahpolytope(const HPolytope& p);
// {point}, as a map with no columns.
AHPolytope point_set(const Vector& point);

AHPolytope affine_map(const Matrix& G, const Vector& g, const AHPolytope& p);
Zonotope affine_map(const Matrix& G, const Vector& g, const Zonotope& z);
// Map scaled about the set's own center.
AHPolytope scale_about_center(const AHPolytope& p, double s);
Zonotope scale_about_center(const Zonotope& z, double s);

AHPolytope minkowski_sum(const AHPolytope& a, const AHPolytope& b);
Zonotope minkowski_sum(const Zonotope& a, const Zonotope& b);

// Center of a, map (X_a, 0). Points of b are parametrized through the
// pseudo-inverse of its map plus a kernel direction, and a range condition
// ties the two maps together.
AHPolytope intersect(const AHPolytope& a, const AHPolytope& b);

// Variables (z_1..z_N, t_1..t_N) with H_i z_i <= t_i h_i, t >= 0, sum t = 1;
// point = sum X_i z_i + t_i c_i.
AHPolytope convex_hull_ahrep(const std::vector<AHPolytope>& parts);

// Requires a map with full column rank; throws kUnsupportedConversion
// otherwise. Tall maps contribute equality rows for the range condition.
HPolytope ah_to_hpolytope(const AHPolytope& p, double tol);
HPolytope ah_to_hpolytope(const AHPolytope& p);

// LP queries.
bool is_empty(const HPolytope& p);
bool is_empty(const AHPolytope& p);
// max c'x over p; throws kInvalidInput when unbounded or empty.
double support(const AHPolytope& p, const Vector& c);
bool is_bounded(const HPolytope& p);

// Membership with absolute slack 1e-7.
bool contains(const HPolytope& p, const Vector& x, double slack = 1e-7);

}  // namespace polycontain::geo
