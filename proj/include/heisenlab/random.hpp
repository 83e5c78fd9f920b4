#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace heisenlab {

// SplitMix64 finalizer. Stream seeds are derived from a root seed as
// mix(root + (stream + 1) * 0x9e3779b97f4a7c15), so trajectory t of a run
// with root seed s always gets the same generator.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream);

// mt19937_64 plus the few draws this project needs, implemented here so the
// streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, bound), bound > 0, by rejection.
  std::uint64_t below(std::uint64_t bound);
  // Uniform on [0, 1) with 53 random bits.
  double unit();
  // Number of failures before the first success of a fair coin:
  // P(j) = 2^-(j+1).
  std::uint64_t fair_geometric();

  // k distinct values from [0, n) in increasing order.
  std::vector<std::uint64_t> sample_without_replacement(std::uint64_t n, std::uint64_t k);

 private:
  std::mt19937_64 engine_;
};

}  // namespace heisenlab
