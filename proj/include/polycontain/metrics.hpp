#pragma once

#include <cstdint>
#include <optional>

#include "polycontain/geometry.hpp"

namespace polycontain::metrics {

using geo::AHPolytope;
using geo::HPolytope;
using geo::Zonotope;
using numerics::Index;
using numerics::Matrix;
using numerics::Vector;

struct HausdorffResult {
  double d12_upper = 0.0;  // X1 inside X2 + D ball
  double d21_upper = 0.0;  // X2 inside X1 + D ball
  double d_upper = 0.0;    // max of the two
  double d_joint = 0.0;    // single LP over both containments
  std::optional<double> d_lower;
  HPolytope ball;
};

// min D such that X1 is certified inside X2 + D * ball. The ball defaults to
// the unit box (infinity norm).
double directed_upper(const AHPolytope& x1, const AHPolytope& x2,
                      const std::optional<HPolytope>& ball = std::nullopt);
HausdorffResult hausdorff_upper(const AHPolytope& x1, const AHPolytope& x2,
                                const std::optional<HPolytope>& ball = std::nullopt);

// Infinity-norm specialisation for zonotopes: X1 = Y G + E, c2 - c1 = Y b + e,
// |[G b]| row sums <= 1 and |[E e]| row sums <= D.
double zonotope_directed_upper(const Zonotope& z1, const Zonotope& z2);
HausdorffResult zonotope_hausdorff_upper(const Zonotope& z1, const Zonotope& z2);

// Directions uniform on the boundary of the unit box: a facet is picked
// uniformly, then a point uniformly inside it. One direction per column.
Matrix sample_box_boundary(Index n, Index count, std::uint64_t seed);

// max over sampled c of |h1(c) - h2(c)| / h_ball(c), where h is the support
// function. Each term is a valid lower bound on the Hausdorff distance.
double hausdorff_lower_sampling(const AHPolytope& x1, const AHPolytope& x2, Index directions,
                                std::uint64_t seed,
                                const std::optional<HPolytope>& ball = std::nullopt);

}  // namespace polycontain::metrics
