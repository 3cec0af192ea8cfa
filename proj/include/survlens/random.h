#ifndef SURVLENS_RANDOM_H_
#define SURVLENS_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace survlens {

// Mixes a base seed with a stream index (SplitMix64 finalizer). Used to give
// every independent work item its own reproducible stream, so results do not
// depend on the order or thread in which items are processed.
uint64_t DeriveSeed(uint64_t seed, uint64_t stream);
uint64_t DeriveSeed(uint64_t seed, uint64_t stream_a, uint64_t stream_b);

// Thin wrapper over mt19937_64. The distributions are implemented here rather
// than taken from <random> because the standard leaves their algorithms
// unspecified; this keeps outputs identical across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform();
  // Uniform integer in [0, n). Requires n > 0.
  size_t UniformIndex(size_t n);
  // Standard normal draw (Box-Muller, one value per call).
  double Normal();

  // Fisher-Yates shuffle.
  template <typename T>
  void Shuffle(std::vector<T>& values) {
    for (size_t i = values.size(); i > 1; --i) {
      const size_t j = UniformIndex(i);
      std::swap(values[i - 1], values[j]);
    }
  }

  // A uniformly random permutation of 0..n-1.
  std::vector<size_t> Permutation(size_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace survlens

#endif  // SURVLENS_RANDOM_H_
