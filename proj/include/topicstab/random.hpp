#pragma once

#include <cstdint>
#include <random>

namespace topicstab {

/// Portable seeded generator, identified as "mt19937_64/v1".
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Every derived quantity is computed here from raw 64-bit words
/// instead of through <random> distributions, whose algorithms are
/// implementation-defined:
///   uniform01()  = (word >> 11) * 2^-53, one word per call
///   below(n)     = rejection sampling: draw words until word < 2^64 - (2^64 mod n),
///                  return word mod n
///   normal()     = Marsaglia polar method on uniform01()
///   gamma(a)     = Marsaglia-Tsang squeeze; a < 1 boosted via gamma(a+1) * u^(1/a)
class Rng {
 public:
  static constexpr const char* kName = "mt19937_64/v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  double normal();

  double gamma(double shape);

 private:
  std::mt19937_64 engine_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// splitmix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class SeedRole : std::uint64_t { kSpanning = 1, kSampleDraw = 2, kSampleTrain = 3 };

/// Stable seed for one run of an experiment grid.
/// h = mix64(base); then for each field f in (role, k, size, replicate): h = mix64(h ^ f).
std::uint64_t derive_seed(std::uint64_t base_seed, SeedRole role, std::uint64_t k,
                          std::uint64_t size, std::uint64_t replicate);

}  // namespace topicstab
