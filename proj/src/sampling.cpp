#include "indicatrix/sampling.hpp"

#include <cmath>
#include <numbers>

#include "indicatrix/finsler.hpp"

namespace indicatrix {

namespace {

// SplitMix64 finaliser, used to derive well-separated stream seeds.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

double Rng::normal() {
  // Box-Muller; 1 - u keeps the logarithm finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

VectorXd Rng::sphere(int n) {
  VectorXd v(n);
  do {
    for (int i = 0; i < n; ++i) v(i) = normal();
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

VectorXd Rng::box(int n, double radius) {
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = uniform(-radius, radius);
  return v;
}

Rng Rng::stream(std::uint64_t seed, std::uint64_t index) { return Rng(mix(mix(seed) ^ mix(index + 1))); }

namespace {

VectorXd direction(Rng& rng, int dim, const DirectionDomain& domain) {
  const int split = domain.split;
  if (split <= 0 || split >= dim || domain.margin <= 0.0) return rng.sphere(dim);
  if (domain.margin >= std::sqrt(0.5)) throw Error("direction domain: margin must be below 1/sqrt(2)");
  for (;;) {
    VectorXd d = rng.sphere(dim);
    if (d.head(split).norm() >= domain.margin && d.tail(dim - split).norm() >= domain.margin) return d;
  }
}

}  // namespace

std::vector<Sample> indicatrix_samples(const FinslerMetric& metric, int count, double radius, std::uint64_t seed,
                                       DirectionDomain domain) {
  std::vector<Sample> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
    Sample s;
    s.index = i;
    s.x = rng.box(metric.dim(), radius);
    const VectorXd dir = direction(rng, metric.dim(), domain);
    s.y = dir / metric.F_at(s.x, dir);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Sample> tangent_samples(const FinslerMetric& metric, int count, double radius, std::uint64_t seed,
                                    DirectionDomain domain) {
  std::vector<Sample> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
    Sample s;
    s.index = i;
    s.x = rng.box(metric.dim(), radius);
    s.y = direction(rng, metric.dim(), domain) * rng.uniform(0.5, 2.0);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace indicatrix
