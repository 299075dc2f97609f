#pragma once

// Portable pseudo-random sampling. The engine is std::mt19937_64, whose
// output sequence is fixed by the standard; the conversions to uniform and
// normal deviates are done here (53-bit mantissa fill, Box-Muller) because
// the standard distributions are implementation-defined.

#include <cstdint>
#include <random>
#include <vector>

#include "indicatrix/linalg.hpp"

namespace indicatrix {

class FinslerMetric;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  /// Uniform on the Euclidean unit sphere in R^n.
  VectorXd sphere(int n);
  VectorXd box(int n, double radius);

  /// Independent stream for sample `index`, so samples do not depend on
  /// evaluation order.
  static Rng stream(std::uint64_t seed, std::uint64_t index);

 private:
  std::mt19937_64 engine_;
};

struct Sample {
  int index = 0;
  VectorXd x;
  VectorXd y;
};

/// Restricts directions to a product of slit bundles: with split = n, the
/// Euclidean norms of y[0, n) and y[n, N) are both at least margin |y|.
/// Directions are redrawn from the sample's own stream until they qualify.
struct DirectionDomain {
  int split = 0;  // 0: no restriction
  double margin = 0.0;
};

/// Points with F(x, y) = 1: y drawn on the Euclidean sphere, then rescaled.
std::vector<Sample> indicatrix_samples(const FinslerMetric& metric, int count, double radius, std::uint64_t seed,
                                       DirectionDomain domain = {});

/// Points of the slit tangent bundle: y on the sphere times a radius in [0.5, 2].
std::vector<Sample> tangent_samples(const FinslerMetric& metric, int count, double radius, std::uint64_t seed,
                                    DirectionDomain domain = {});

}  // namespace indicatrix
