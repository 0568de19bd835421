#pragma once

#include <cstdint>
#include <random>

#include "polycontain/numerics.hpp"

namespace polycontain {

// mt19937_64 with a fixed double conversion, so streams are identical across
// standard libraries (std::uniform_real_distribution is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  // Uniform integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }
  numerics::Matrix matrix(numerics::Index rows, numerics::Index cols, double lo, double hi) {
    numerics::Matrix m(rows, cols);
    for (numerics::Index i = 0; i < rows; ++i) {
      for (numerics::Index j = 0; j < cols; ++j) m(i, j) = uniform(lo, hi);
    }
    return m;
  }
  numerics::Vector vector(numerics::Index n, double lo, double hi) {
    return matrix(n, 1, lo, hi).col(0);
  }

 private:
  std::mt19937_64 engine_;
};

inline constexpr std::uint64_t kDefaultSeed = 20240917;

}  // namespace polycontain
