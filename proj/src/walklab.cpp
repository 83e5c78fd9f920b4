#include "heisenlab/walklab.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "heisenlab/errors.hpp"
#include "heisenlab/heisenberg.hpp"
#include "heisenlab/random.hpp"

namespace heisenlab {

namespace {

struct SparseRows {
  std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> rows;
  std::size_t max_row = 0;
};

SparseRows sparse_rows(const Kernel& k) {
  SparseRows s;
  s.rows.resize(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    for (std::size_t j = 0; j < k.size(); ++j) {
      if (k.numerators(i, j) != 0) s.rows[i].emplace_back(j, k.numerators(i, j));
    }
    s.max_row = std::max(s.max_row, s.rows[i].size());
  }
  return s;
}

Eigen::SparseMatrix<double> to_sparse(const Kernel& k) {
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t i = 0; i < k.size(); ++i) {
    for (std::size_t j = 0; j < k.size(); ++j) {
      if (k.numerators(i, j) != 0) {
        triplets.emplace_back(i, j, static_cast<double>(k.numerators(i, j)) / k.denominator);
      }
    }
  }
  Eigen::SparseMatrix<double> m(k.size(), k.size());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

// Largest eigenvalue of (I + sign * K) / 2 on the complement of the constant
// vector, by power iteration with Rayleigh quotients.
double deflated_power(const Eigen::SparseMatrix<double>& k, double sign, std::uint64_t& iterations) {
  const Eigen::Index n = k.rows();
  Rng rng(0x5eed);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.unit() - 0.5;
  auto project = [&](Eigen::VectorXd& x) {
    x.array() -= x.mean();
    x.normalize();
  };
  project(v);
  double rho = 0;
  constexpr std::uint64_t kMaxIterations = 2000000;
  for (std::uint64_t it = 1; it <= kMaxIterations; ++it) {
    Eigen::VectorXd w = 0.5 * (v + sign * (k * v));
    w.array() -= w.mean();
    const double next = v.dot(w);
    project(w);
    v.swap(w);
    iterations = it;
    if (it > 10 && std::abs(next - rho) < 1e-16) {
      rho = next;
      break;
    }
    rho = next;
  }
  return 2 * rho - 1;
}

}  // namespace

Rational Kernel::entry(std::size_t i, std::size_t j) const {
  return make_rational(BigInt(static_cast<long>(numerators(i, j))), BigInt(static_cast<long>(denominator)));
}

Eigen::MatrixXd Kernel::to_dense() const { return numerators.cast<double>() / static_cast<double>(denominator); }

Kernel h3_kernel(PrimeModulus p) {
  const HeisenbergGroup group(1, p);
  const std::uint64_t n = group.order();
  if (n > kMaxKernelStates) {
    throw SizeCapError("H_3(" + std::to_string(p.value()) + ") has more than " +
                       std::to_string(kMaxKernelStates) + " states");
  }
  const std::vector<HeisElem> steps = {
      group.identity(),
      HeisElem(FpVec({1}, p), FpVec({0}, p), 0, p),
      HeisElem(FpVec({-1}, p), FpVec({0}, p), 0, p),
      HeisElem(FpVec({0}, p), FpVec({1}, p), 0, p),
      HeisElem(FpVec({0}, p), FpVec({-1}, p), 0, p),
  };
  Kernel k;
  k.denominator = static_cast<std::int64_t>(steps.size());
  k.numerators = IntMatrix::Zero(n, n);
  for (std::uint64_t i = 0; i < n; ++i) {
    k.states.push_back(i);
    const HeisElem g = group.element(i);
    for (const auto& s : steps) k.numerators(i, group.index_of(h_mul(s, g))) += 1;
  }
  return k;
}

Kernel identity_kernel(std::size_t n) {
  Kernel k;
  for (std::size_t i = 0; i < n; ++i) k.states.push_back(i);
  k.numerators = IntMatrix::Identity(n, n);
  return k;
}

bool rows_sum_to_one(const Kernel& k) {
  for (Eigen::Index i = 0; i < k.numerators.rows(); ++i) {
    if ((k.numerators.row(i).array() < 0).any()) return false;
    if (k.numerators.row(i).sum() != k.denominator) return false;
  }
  return true;
}

bool is_symmetric(const Kernel& k) { return k.numerators == k.numerators.transpose(); }

bool is_stationary(const Kernel& k, std::span<const Rational> pi) {
  if (pi.size() != k.size()) throw DimensionError("distribution length differs from kernel size");
  for (std::size_t j = 0; j < k.size(); ++j) {
    Rational acc(0);
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (k.numerators(i, j) != 0) acc += pi[i] * k.entry(i, j);
    }
    if (acc != pi[j]) return false;
  }
  return true;
}

std::vector<Rational> uniform_distribution(std::size_t n) {
  return std::vector<Rational>(n, make_rational(BigInt(1), BigInt(std::to_string(n))));
}

GapReport spectral_gap(const Kernel& k) {
  if (!is_symmetric(k)) throw PreconditionError("spectral_gap needs a symmetric kernel");
  if (k.size() < 2) throw DomainError("spectral gap needs at least two states");
  GapReport r;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(k.to_dense(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw DiagnosticsError("eigensolver did not converge");
  const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending
  const Eigen::Index n = ev.size();
  r.lambda2 = ev(n - 2);
  r.lambda_min = ev(0);
  const double slem = std::max(std::abs(r.lambda2), std::abs(r.lambda_min));
  r.gap = 1 - slem;
  r.degenerate = std::abs(1 - r.lambda2) < 1e-12;
  if (r.degenerate) r.gap = 0;

  const auto sparse = to_sparse(k);
  std::uint64_t it_top = 0, it_bottom = 0;
  const double top = deflated_power(sparse, 1.0, it_top);
  const double bottom = -deflated_power(sparse, -1.0, it_bottom);
  r.power_slem = std::max(std::abs(top), std::abs(bottom));
  r.power_iterations = it_top + it_bottom;
  r.discrepancy = std::abs(r.power_slem - slem);
  if (r.discrepancy > kSpectralAgreement) {
    throw DiagnosticsError("eigensolver and power iteration disagree by " + std::to_string(r.discrepancy));
  }
  return r;
}

std::vector<Rational> tv_curve_exact(const Kernel& k, std::size_t start, std::size_t steps,
                                     std::span<const Rational> pi) {
  if (start >= k.size()) throw DomainError("start state out of range");
  if (pi.size() != k.size()) throw DimensionError("distribution length differs from kernel size");
  const auto sparse = sparse_rows(k);
  const BigInt den(static_cast<long>(k.denominator));
  std::vector<BigInt> num(k.size(), 0), next(k.size());
  num[start] = 1;
  BigInt scale = 1;  // denominator^t
  std::vector<Rational> out;
  out.reserve(steps + 1);
  for (std::size_t t = 0;; ++t) {
    Rational dist(0);
    for (std::size_t j = 0; j < k.size(); ++j) dist += abs(Rational(num[j], scale) - pi[j]);
    dist.canonicalize();
    out.push_back(dist / 2);
    if (t == steps) break;
    std::fill(next.begin(), next.end(), BigInt(0));
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (num[i] == 0) continue;
      for (auto [j, w] : sparse.rows[i]) next[j] += num[i] * static_cast<long>(w);
    }
    num.swap(next);
    scale *= den;
  }
  return out;
}

std::vector<TvPoint> tv_curve(const Kernel& k, std::size_t start, std::size_t steps,
                              std::span<const Rational> pi) {
  if (start >= k.size()) throw DomainError("start state out of range");
  if (pi.size() != k.size()) throw DimensionError("distribution length differs from kernel size");
  const auto sparse = sparse_rows(k);
  const long double den = static_cast<long double>(k.denominator);
  std::vector<long double> target(k.size()), p(k.size(), 0), next(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) target[j] = pi[j].get_d();
  p[start] = 1;
  // Each step adds at most (row length + 1) roundings per entry, each
  // relative to a probability, so the L1 error grows by that many epsilons.
  const long double per_step = static_cast<long double>(sparse.max_row + 2) * k.size() *
                               std::numeric_limits<long double>::epsilon();
  const double pi_error = static_cast<double>(k.size()) * std::numeric_limits<double>::epsilon();
  std::vector<TvPoint> out;
  for (std::size_t t = 0;; ++t) {
    long double dist = 0;
    for (std::size_t j = 0; j < k.size(); ++j) dist += std::fabs(p[j] - target[j]);
    out.push_back({t, static_cast<double>(dist / 2),
                   static_cast<double>(per_step * static_cast<long double>(t)) + pi_error});
    if (t == steps) break;
    std::fill(next.begin(), next.end(), 0.0L);
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (p[i] == 0) continue;
      for (auto [j, w] : sparse.rows[i]) next[j] += p[i] * static_cast<long double>(w) / den;
    }
    p.swap(next);
  }
  return out;
}

std::optional<std::size_t> steps_to_threshold(std::span<const TvPoint> curve, double threshold) {
  for (const auto& pt : curve) {
    if (pt.tv + pt.certified_error <= threshold) return pt.step;
  }
  return std::nullopt;
}

std::optional<std::size_t> steps_to_threshold(std::span<const Rational> curve, const Rational& threshold) {
  for (std::size_t t = 0; t < curve.size(); ++t) {
    if (curve[t] <= threshold) return t;
  }
  return std::nullopt;
}

MixReport h3_mix_report(PrimeModulus p, std::size_t steps) {
  MixReport r;
  r.p = p.value();
  const Kernel k = h3_kernel(p);
  r.states = k.size();
  const auto pi = uniform_distribution(k.size());
  r.uniform_stationary = is_stationary(k, pi);
  r.gap = spectral_gap(k);
  r.tv = tv_curve(k, 0, steps, pi);
  r.steps_to_quarter = steps_to_threshold(r.tv, 0.25);
  return r;
}

void write_tv_csv(std::span<const TvPoint> curve, std::ostream& out) {
  out << "step,tv\n";
  char buf[96];
  for (const auto& pt : curve) {
    std::snprintf(buf, sizeof buf, "%zu,%.15e\n", pt.step, pt.tv);
    out << buf;
  }
}

}  // namespace heisenlab
