#include "topicstab/random.hpp"

#include <cmath>
#include <limits>

namespace topicstab {

std::uint64_t Rng::below(std::uint64_t n) {
  // Largest multiple of n that fits, expressed as 2^64 - (2^64 mod n).
  const std::uint64_t remainder = (std::numeric_limits<std::uint64_t>::max() % n + 1) % n;
  const std::uint64_t limit = 0 - remainder;  // wraps to 0 when n divides 2^64
  for (;;) {
    const std::uint64_t word = engine_();
    if (limit == 0 || word < limit) return word % n;
  }
}

double Rng::normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * scale;
  has_spare_normal_ = true;
  return u * scale;
}

double Rng::gamma(double shape) {
  if (shape < 1.0) {
    const double boosted = gamma(shape + 1.0);
    double u;
    do {
      u = uniform01();
    } while (u == 0.0);
    return boosted * std::pow(u, 1.0 / shape);
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
    const double u = uniform01();
    if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::uint64_t derive_seed(std::uint64_t base_seed, SeedRole role, std::uint64_t k,
                          std::uint64_t size, std::uint64_t replicate) {
  std::uint64_t h = mix64(base_seed);
  h = mix64(h ^ static_cast<std::uint64_t>(role));
  h = mix64(h ^ k);
  h = mix64(h ^ size);
  h = mix64(h ^ replicate);
  return h;
}

}  // namespace topicstab
