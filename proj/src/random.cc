#include "survlens/random.h"

#include <cmath>
#include <numbers>
#include <numeric>

namespace survlens {

namespace {

uint64_t SplitMix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

uint64_t DeriveSeed(uint64_t seed, uint64_t stream) {
  return SplitMix64(seed + 0x9E3779B97F4A7C15ULL * (stream + 1));
}

uint64_t DeriveSeed(uint64_t seed, uint64_t stream_a, uint64_t stream_b) {
  return DeriveSeed(DeriveSeed(seed, stream_a), stream_b);
}

double Rng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

size_t Rng::UniformIndex(size_t n) {
  const uint64_t bound = n;
  // Smallest value of the engine range from which r % bound is unbiased.
  const uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const uint64_t r = engine_();
    if (r >= threshold) return static_cast<size_t>(r % bound);
  }
}

double Rng::Normal() {
  const double u1 = 1.0 - Uniform();
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<size_t> Rng::Permutation(size_t n) {
  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), size_t{0});
  Shuffle(perm);
  return perm;
}

}  // namespace survlens
