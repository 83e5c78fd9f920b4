#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <vector>

#include "heisenlab/random.hpp"
#include "heisenlab/rational.hpp"

namespace heisenlab {

// Bit model: for i < j, i ~ j iff bit i of j is set. Irreflexive, so i == j
// is reported as not adjacent.
bool rado_adjacent(std::uint64_t i, std::uint64_t j);

// Legendre model on primes q = 1 mod 4: q1 ~ q2 iff q1 is a square mod q2.
// Both directions are evaluated and must agree.
bool legendre_adjacent(std::uint64_t q1, std::uint64_t q2);

enum class RadoKind { bit, legendre };

inline constexpr std::uint64_t kDefaultPrimeBound = 100000;

class RadoModel {
 public:
  static RadoModel bit();
  // Primes = 1 mod 4 below `bound`, by sieve.
  static RadoModel legendre(std::uint64_t bound = kDefaultPrimeBound);

  RadoKind kind() const { return kind_; }
  const std::vector<std::uint64_t>& pool() const { return pool_; }
  bool adjacent(std::uint64_t a, std::uint64_t b) const;

 private:
  RadoKind kind_ = RadoKind::bit;
  std::vector<std::uint64_t> pool_;
};

struct ExtensionWitness {
  std::uint64_t least = 0;
  // Bit model only: sum of 2^u over U plus 2^(max(U ∪ V) + 1).
  std::optional<std::uint64_t> direct;
};

/// Least vertex outside U ∪ V adjacent to all of U and none of V.
ExtensionWitness extension_witness(const RadoModel& model, const std::set<std::uint64_t>& u,
                                   const std::set<std::uint64_t>& v);

/// Q(j) = 2^-(j+1).
Rational vertex_mass(std::uint64_t j);

/// dyadic + tail_coeff / (2^(2^order) + 1). Every neighborhood mass and
/// truncated tail in the bit model has this form with dyadic coefficients.
/// The second term is never dyadic, so two forms of the same order are equal
/// exactly when their coefficients are.
struct MassForm {
  Rational dyadic;
  Rational tail_coeff;
  std::uint64_t order = 0;

  // Orders above this give denominators with more than 2^16 bits.
  static constexpr std::uint64_t kExactOrderLimit = 16;

  Rational exact() const;  // throws SizeCapError above the limit
  long double approx() const;
  friend bool operator==(const MassForm&, const MassForm&) = default;
};

/// Q(N(i)) = sum over set bits j < i of 2^-(j+1), plus 1 / (2^(2^i) + 1)
/// for the neighbours above i.
MassForm neighborhood_mass(std::uint64_t i);

/// Q(N(i) ∩ [L, ∞)) in closed form, as the full upper tail minus its part
/// below L.
MassForm neighborhood_tail(std::uint64_t i, std::uint64_t limit);

/// Sum over neighbours j < limit of Q(j), by enumeration.
Rational truncated_neighborhood_mass(std::uint64_t i, std::uint64_t limit);

/// K(i, j) = Q(j) / Q(N(i)) exactly, for i up to the exact order limit.
Rational kernel_entry(std::uint64_t i, std::uint64_t j);
long double kernel_entry_approx(std::uint64_t i, std::uint64_t j);

/// coefficient * prod_i Q(N(i))^exponent_i with a rational coefficient.
struct MassMonomial {
  Rational coefficient;
  std::map<std::uint64_t, int> exponents;

  MassMonomial operator*(const MassMonomial& other) const;
  friend bool operator==(const MassMonomial&, const MassMonomial&) = default;
};

MassMonomial stationary_weight(std::uint64_t i);           // Q(i) Q(N(i))
MassMonomial kernel_monomial(std::uint64_t i, std::uint64_t j);  // 0 off edges

struct BalanceCertificate {
  std::uint64_t limit = 0;
  std::uint64_t adjacent_pairs = 0;
  std::uint64_t nonadjacent_pairs = 0;
  bool symbolic_holds = false;
  // Pairs below the exact order limit also checked with fully expanded masses.
  std::uint64_t expanded_pairs = 0;
  bool expanded_holds = false;
  bool holds() const { return symbolic_holds && expanded_holds; }
};

struct StationaryVector {
  std::vector<MassMonomial> weights;  // unnormalized, Q(i) Q(N(i))
  BalanceCertificate certificate;
};

StationaryVector stationary_vector(std::uint64_t limit);

struct WalkState {
  std::uint64_t current = 0;
  Rng rng;
  std::optional<std::vector<std::uint64_t>> history;

  WalkState(std::uint64_t start, std::uint64_t seed, bool record = false);
};

inline constexpr std::uint64_t kMaxRejections = 1000000;

/// One step of the neighbour-weighted walk by rejection: draw j from Q and
/// accept when j ~ current. Throws DiagnosticsError past kMaxRejections.
void walk_step(WalkState& state);

std::vector<std::uint64_t> run_trajectory(std::uint64_t start, std::uint64_t steps, std::uint64_t seed);

/// Trajectories from each start; start s uses derive_seed(root_seed, s index).
std::vector<std::vector<std::uint64_t>> run_trajectories(std::span<const std::uint64_t> starts,
                                                         std::uint64_t steps, std::uint64_t root_seed);

void write_trajectory(std::span<const std::uint64_t> path, std::uint64_t seed, std::ostream& out);

struct MixingPoint {
  std::uint64_t step = 0;
  long double tv = 0;
  long double tv_lower = 0;
  long double tv_upper = 0;
  long double leak = 0;  // mass that has left {0, ..., L-1}
};

struct MixingEstimate {
  std::uint64_t start = 0;
  std::uint64_t limit = 0;
  std::vector<MixingPoint> curve;
  long double stationary_tail = 0;  // Π mass beyond L, bounded above
  bool leak_warning = false;        // leak above 0.1: enlarge L
};

inline constexpr std::uint64_t kDefaultTruncation = 1024;

/// Evolves the point mass at `start` under K restricted to {0, ..., L-1}
/// and reports TV to the truncated stationary law with error bars.
MixingEstimate mixing_estimate(std::uint64_t start, std::uint64_t steps,
                               std::uint64_t limit = kDefaultTruncation);

void write_mixing_csv(const MixingEstimate& m, std::ostream& out);

}  // namespace heisenlab
