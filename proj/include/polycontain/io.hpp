#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "polycontain/approximate.hpp"
#include "polycontain/containment.hpp"
#include "polycontain/geometry.hpp"
#include "polycontain/metrics.hpp"
#include "polycontain/oracle.hpp"

namespace polycontain::io {

using geo::AHPolytope;
using geo::HPolytope;
using geo::Zonotope;
using numerics::Index;
using numerics::Matrix;
using numerics::Vector;

enum class ShapeKind { kH, kAH, kZonotope };

// A polytope as it was written; the tag survives a round trip.
struct Shape {
  ShapeKind kind = ShapeKind::kAH;
  HPolytope h;
  AHPolytope ah;
  Zonotope zonotope;

  static Shape of(const HPolytope& p);
  static Shape of(const AHPolytope& p);
  static Shape of(const Zonotope& z);

  Index dim() const;
  AHPolytope as_ah() const;
};

// Malformed text raises kParseError with "line L, column C"; a well-formed
// document with the wrong fields or shapes raises kInvalidInput.
Shape parse_shape(std::string_view text);
Shape read_shape(const std::string& path);
std::string write_shape(const Shape& s);

std::string certificate_json(const contain::Certificate& c);
contain::Certificate parse_certificate(std::string_view text);

std::string check_json(const contain::CheckResult& r);
std::string scaling_json(const contain::ScalingResult& r);
std::string hausdorff_json(const metrics::HausdorffResult& r);

// iteration,bound
std::string trace_csv(const approx::AlternationTrace& t);
// Trace with decision matrices, for frame rendering.
std::string trace_json(const approx::AlternationTrace& t);

std::string loss_csv(const std::vector<oracle::LossRecord>& records);
std::string loss_summary_json(const oracle::LossSummary& s);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view text);

}  // namespace polycontain::io
