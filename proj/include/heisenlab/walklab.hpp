#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "heisenlab/fp.hpp"
#include "heisenlab/rational.hpp"

namespace heisenlab {

inline constexpr std::size_t kMaxKernelStates = 2048;

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Row-stochastic kernel with exact entries numerators(i, j) / denominator.
struct Kernel {
  std::vector<std::uint64_t> states;
  IntMatrix numerators;
  std::int64_t denominator = 1;

  std::size_t size() const { return states.size(); }
  Rational entry(std::size_t i, std::size_t j) const;
  Eigen::MatrixXd to_dense() const;
};

/// Lazy nearest-neighbour walk on H_3(p): from g, move to s g for s drawn
/// uniformly from {id, [±1,0,0], [0,±1,0]}. States are the canonical indices.
Kernel h3_kernel(PrimeModulus p);
Kernel identity_kernel(std::size_t n);

bool rows_sum_to_one(const Kernel& k);
bool is_symmetric(const Kernel& k);
/// pi K = pi, exactly.
bool is_stationary(const Kernel& k, std::span<const Rational> pi);
std::vector<Rational> uniform_distribution(std::size_t n);

struct GapReport {
  double gap = 0;          // 1 - max(|lambda_2|, |lambda_min|)
  double lambda2 = 0;
  double lambda_min = 0;
  double power_slem = 0;   // the same modulus from deflated power iteration
  double discrepancy = 0;
  std::uint64_t power_iterations = 0;
  bool degenerate = false;  // eigenvalue 1 is repeated
};

inline constexpr double kSpectralAgreement = 1e-8;

/// Dense symmetric eigensolve, cross-checked by power iteration on the
/// sparse kernel. Throws DiagnosticsError if the two disagree by more than
/// kSpectralAgreement, PreconditionError for a nonsymmetric kernel.
GapReport spectral_gap(const Kernel& k);

/// ||K^t(start, .) - pi||_TV for t = 0..steps, exactly.
std::vector<Rational> tv_curve_exact(const Kernel& k, std::size_t start, std::size_t steps,
                                     std::span<const Rational> pi);

struct TvPoint {
  std::size_t step = 0;
  double tv = 0;
  double certified_error = 0;
};

/// Same curve evolved in long double with a rounding bound.
std::vector<TvPoint> tv_curve(const Kernel& k, std::size_t start, std::size_t steps,
                              std::span<const Rational> pi);

/// First step with tv + error <= threshold.
std::optional<std::size_t> steps_to_threshold(std::span<const TvPoint> curve, double threshold);
std::optional<std::size_t> steps_to_threshold(std::span<const Rational> curve, const Rational& threshold);

struct MixReport {
  std::uint32_t p = 0;
  std::size_t states = 0;
  bool uniform_stationary = false;
  GapReport gap;
  std::size_t start = 0;
  std::vector<TvPoint> tv;
  std::optional<std::size_t> steps_to_quarter;
};

MixReport h3_mix_report(PrimeModulus p, std::size_t steps);

void write_tv_csv(std::span<const TvPoint> curve, std::ostream& out);

}  // namespace heisenlab
