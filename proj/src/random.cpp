#include "heisenlab/random.hpp"

#include <algorithm>
#include <bit>
#include <unordered_set>

namespace heisenlab {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
  return splitmix64(root + (stream + 1) * 0x9e3779b97f4a7c15ULL);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  // Largest multiple of bound that fits; values at or above it are redrawn.
  const std::uint64_t limit = bound * (UINT64_MAX / bound);
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return v % bound;
}

double Rng::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::fair_geometric() {
  std::uint64_t failures = 0;
  for (;;) {
    const std::uint64_t word = engine_();
    if (word != 0) return failures + static_cast<std::uint64_t>(std::countr_zero(word));
    failures += 64;
  }
}

std::vector<std::uint64_t> Rng::sample_without_replacement(std::uint64_t n, std::uint64_t k) {
  k = std::min(k, n);
  std::unordered_set<std::uint64_t> chosen;
  std::vector<std::uint64_t> out;
  out.reserve(k);
  // Floyd's algorithm.
  for (std::uint64_t j = n - k; j < n; ++j) {
    const std::uint64_t t = below(j + 1);
    const std::uint64_t pick = chosen.count(t) ? j : t;
    chosen.insert(pick);
    out.push_back(pick);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace heisenlab
