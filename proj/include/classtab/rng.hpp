#pragma once

#include <cmath>
#include <cstdint>

#include "classtab/norms.hpp"
#include "classtab/types.hpp"

namespace classtab {

/// Deterministic xoshiro256++ generator. Streams are derived from
/// (seed, stream) so batch work can be split into blocks whose results
/// do not depend on scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    for (auto& s : s_) s = splitmix64(x);
    // skip the first few outputs so nearby streams decorrelate
    for (int i = 0; i < 8; ++i) next();
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    return n ? next() % n : 0;
  }

  /// Standard normal via Box-Muller (pairs cached).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1, u2;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Gamma(shape, 1) via Marsaglia-Tsang, with the shape<1 boost.
  double gamma(double shape) {
    if (shape < 1.0) {
      const double u = uniform();
      return gamma(shape + 1.0) * std::pow(u > 0 ? u : 0x1.0p-53, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (u > 0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Uniform sample from the L^p ball of given radius centred at `center`.
/// Directions follow the cone measure of the p-sphere (coordinates drawn
/// from exp(-|t|^p) via Gamma(1/p)), the radial factor is U^(1/d).
inline Vec sample_p_ball(Rng& rng, const VecCRef& center, double radius,
                         const NormP& p) {
  const Eigen::Index d = center.size();
  Vec g(d);
  if (p.is_inf()) {
    for (Eigen::Index i = 0; i < d; ++i) g[i] = rng.uniform(-1.0, 1.0);
    return center + radius * g;
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    const double mag = std::pow(rng.gamma(1.0 / p.p()), 1.0 / p.p());
    g[i] = (rng.next() & 1u) ? mag : -mag;
  }
  const double n = p.norm(g);
  if (n == 0.0) return center;
  const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
  return center + (r / n) * g;
}

}  // namespace classtab
