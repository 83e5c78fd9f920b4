#include "heisenlab/rado.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>

#include "heisenlab/errors.hpp"
#include "heisenlab/fp.hpp"
#include "heisenlab/parallel.hpp"

namespace heisenlab {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

bool is_square_mod(std::uint64_t a, std::uint64_t q) { return powmod(a, (q - 1) / 2, q) == 1; }

void require_pythagorean_prime(std::uint64_t q) {
  if (!is_prime(q)) throw DomainError(std::to_string(q) + " is not prime");
  if (q % 4 != 1) throw DomainError(std::to_string(q) + " is not 1 mod 4");
}

Rational pow2(long long e) {
  Rational r(1);
  if (e >= 0) {
    mpz_mul_2exp(r.get_num_mpz_t(), r.get_num_mpz_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  }
  return r;
}

long double to_long_double(const BigInt& z) {
  const std::size_t bits = mpz_sizeinbase(z.get_mpz_t(), 2);
  if (bits <= 64) {
    BigInt a = abs(z);
    std::uint64_t lo = 0;
    mpz_export(&lo, nullptr, -1, sizeof lo, 0, 0, a.get_mpz_t());
    return sgn(z) < 0 ? -static_cast<long double>(lo) : static_cast<long double>(lo);
  }
  const std::size_t shift = bits - 64;
  BigInt top;
  mpz_tdiv_q_2exp(top.get_mpz_t(), z.get_mpz_t(), shift);
  return std::ldexp(to_long_double(top), static_cast<int>(shift));
}

long double to_long_double(const Rational& q) {
  // Scale both parts into range before dividing.
  const long long nb = static_cast<long long>(mpz_sizeinbase(q.get_num_mpz_t(), 2));
  const long long db = static_cast<long long>(mpz_sizeinbase(q.get_den_mpz_t(), 2));
  BigInt num = q.get_num(), den = q.get_den();
  long long exp = 0;
  if (nb > 64) {
    mpz_tdiv_q_2exp(num.get_mpz_t(), num.get_mpz_t(), nb - 64);
    exp += nb - 64;
  }
  if (db > 64) {
    mpz_tdiv_q_2exp(den.get_mpz_t(), den.get_mpz_t(), db - 64);
    exp -= db - 64;
  }
  if (exp < -20000) return 0.0L;
  return std::ldexp(to_long_double(num) / to_long_double(den), static_cast<int>(exp));
}

// 1 / (2^(2^order) + 1) in long double; zero once it underflows.
long double tail_unit(std::uint64_t order) {
  if (order >= 15) return 0.0L;
  return 1.0L / (std::ldexp(1.0L, 1 << order) + 1.0L);
}

long double q_approx(std::uint64_t j) {
  if (j > 20000) return 0.0L;
  return std::ldexp(1.0L, -static_cast<int>(j + 1));
}

}  // namespace

bool rado_adjacent(std::uint64_t i, std::uint64_t j) {
  if (i == j) return false;
  const std::uint64_t lo = std::min(i, j);
  const std::uint64_t hi = std::max(i, j);
  if (lo >= 64) return false;
  return (hi >> lo) & 1u;
}

bool legendre_adjacent(std::uint64_t q1, std::uint64_t q2) {
  require_pythagorean_prime(q1);
  require_pythagorean_prime(q2);
  if (q1 == q2) throw DomainError("Legendre adjacency needs distinct primes");
  const bool forward = is_square_mod(q1, q2);
  const bool backward = is_square_mod(q2, q1);
  if (forward != backward) {
    throw DiagnosticsError("reciprocity violated for " + std::to_string(q1) + ", " + std::to_string(q2));
  }
  return forward;
}

RadoModel RadoModel::bit() { return RadoModel{}; }

RadoModel RadoModel::legendre(std::uint64_t bound) {
  RadoModel m;
  m.kind_ = RadoKind::legendre;
  std::vector<bool> composite(bound + 1, false);
  for (std::uint64_t i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    if (i % 4 == 1) m.pool_.push_back(i);
    for (std::uint64_t k = i * i; k <= bound; k += i) composite[k] = true;
  }
  return m;
}

bool RadoModel::adjacent(std::uint64_t a, std::uint64_t b) const {
  if (kind_ == RadoKind::bit) return rado_adjacent(a, b);
  if (a == b) return false;
  return legendre_adjacent(a, b);
}

ExtensionWitness extension_witness(const RadoModel& model, const std::set<std::uint64_t>& u,
                                   const std::set<std::uint64_t>& v) {
  for (auto a : u) {
    if (v.count(a)) throw DomainError("U and V must be disjoint");
  }
  auto fits = [&](std::uint64_t z) {
    if (u.count(z) || v.count(z)) return false;
    for (auto a : u) {
      if (!model.adjacent(z, a)) return false;
    }
    for (auto b : v) {
      if (model.adjacent(z, b)) return false;
    }
    return true;
  };

  ExtensionWitness w;
  if (model.kind() == RadoKind::legendre) {
    for (auto q : model.pool()) {
      if (fits(q)) {
        w.least = q;
        return w;
      }
    }
    throw PoolExhaustedError("no witness among " + std::to_string(model.pool().size()) +
                             " pooled primes; enlarge the sieve bound");
  }

  std::uint64_t top = 0;
  bool any = false;
  for (const auto* s : {&u, &v}) {
    if (!s->empty()) {
      top = std::max(top, *s->rbegin());
      any = true;
    }
  }
  if (any && top >= 62) throw DomainError("bit-model witnesses need indices below 62");
  std::uint64_t direct = any ? std::uint64_t{1} << (top + 1) : 1;
  for (auto a : u) direct |= std::uint64_t{1} << a;
  w.direct = direct;
  for (std::uint64_t z = 0; z <= direct; ++z) {
    if (fits(z)) {
      w.least = z;
      return w;
    }
  }
  throw DiagnosticsError("direct construction failed to validate");
}

Rational vertex_mass(std::uint64_t j) { return pow2(-static_cast<long long>(j) - 1); }

Rational MassForm::exact() const {
  if (tail_coeff == 0) return dyadic;
  if (order > kExactOrderLimit) {
    throw SizeCapError("exact mass needs a 2^" + std::to_string(order) + "-bit denominator");
  }
  Rational unit(1, 1);
  unit /= pow2(static_cast<long long>(std::uint64_t{1} << order)) + 1;
  return dyadic + tail_coeff * unit;
}

long double MassForm::approx() const {
  return to_long_double(dyadic) + to_long_double(tail_coeff) * tail_unit(order);
}

MassForm neighborhood_mass(std::uint64_t i) {
  MassForm m;
  m.order = i;
  m.tail_coeff = 1;
  for (std::uint64_t j = 0; j < std::min<std::uint64_t>(i, 64); ++j) {
    if ((i >> j) & 1u) m.dyadic += vertex_mass(j);
  }
  return m;
}

MassForm neighborhood_tail(std::uint64_t i, std::uint64_t limit) {
  MassForm m;
  m.order = i;
  m.tail_coeff = 1;
  for (std::uint64_t j = limit; j < std::min<std::uint64_t>(i, 64); ++j) {
    if ((i >> j) & 1u) m.dyadic += vertex_mass(j);
  }
  for (std::uint64_t j = i + 1; j < limit; ++j) {
    if (rado_adjacent(i, j)) m.dyadic -= vertex_mass(j);
  }
  return m;
}

Rational truncated_neighborhood_mass(std::uint64_t i, std::uint64_t limit) {
  Rational sum(0);
  for (std::uint64_t j = 0; j < limit; ++j) {
    if (rado_adjacent(i, j)) sum += vertex_mass(j);
  }
  return sum;
}

Rational kernel_entry(std::uint64_t i, std::uint64_t j) {
  if (!rado_adjacent(i, j)) return Rational(0);
  return vertex_mass(j) / neighborhood_mass(i).exact();
}

long double kernel_entry_approx(std::uint64_t i, std::uint64_t j) {
  if (!rado_adjacent(i, j)) return 0.0L;
  return q_approx(j) / neighborhood_mass(i).approx();
}

MassMonomial MassMonomial::operator*(const MassMonomial& other) const {
  MassMonomial out;
  out.coefficient = coefficient * other.coefficient;
  if (out.coefficient == 0) return out;
  out.exponents = exponents;
  for (const auto& [k, e] : other.exponents) {
    const int total = (out.exponents[k] += e);
    if (total == 0) out.exponents.erase(k);
  }
  return out;
}

MassMonomial stationary_weight(std::uint64_t i) { return {vertex_mass(i), {{i, 1}}}; }

MassMonomial kernel_monomial(std::uint64_t i, std::uint64_t j) {
  if (!rado_adjacent(i, j)) return {Rational(0), {}};
  return {vertex_mass(j), {{i, -1}}};
}

StationaryVector stationary_vector(std::uint64_t limit) {
  StationaryVector out;
  for (std::uint64_t i = 0; i < limit; ++i) out.weights.push_back(stationary_weight(i));

  auto& cert = out.certificate;
  cert.limit = limit;
  cert.symbolic_holds = true;
  for (std::uint64_t i = 0; i < limit; ++i) {
    for (std::uint64_t j = i + 1; j < limit; ++j) {
      const MassMonomial lhs = out.weights[i] * kernel_monomial(i, j);
      const MassMonomial rhs = out.weights[j] * kernel_monomial(j, i);
      if (!(lhs == rhs)) cert.symbolic_holds = false;
      if (rado_adjacent(i, j)) {
        ++cert.adjacent_pairs;
      } else {
        ++cert.nonadjacent_pairs;
        if (lhs.coefficient != 0) cert.symbolic_holds = false;
      }
    }
  }

  const std::uint64_t expand = std::min<std::uint64_t>(limit, MassForm::kExactOrderLimit + 1);
  std::vector<Rational> masses;
  for (std::uint64_t i = 0; i < expand; ++i) masses.push_back(neighborhood_mass(i).exact());
  cert.expanded_holds = true;
  for (std::uint64_t i = 0; i < expand; ++i) {
    for (std::uint64_t j = i + 1; j < expand; ++j) {
      const Rational kij = rado_adjacent(i, j) ? vertex_mass(j) / masses[i] : Rational(0);
      const Rational kji = rado_adjacent(i, j) ? vertex_mass(i) / masses[j] : Rational(0);
      const Rational lhs = vertex_mass(i) * masses[i] * kij;
      const Rational rhs = vertex_mass(j) * masses[j] * kji;
      if (lhs != rhs) cert.expanded_holds = false;
      ++cert.expanded_pairs;
    }
  }
  return out;
}

WalkState::WalkState(std::uint64_t start, std::uint64_t seed, bool record) : current(start), rng(seed) {
  if (record) history.emplace(1, start);
}

void walk_step(WalkState& state) {
  for (std::uint64_t attempt = 0; attempt < kMaxRejections; ++attempt) {
    const std::uint64_t j = state.rng.fair_geometric();
    if (rado_adjacent(state.current, j)) {
      state.current = j;
      if (state.history) state.history->push_back(j);
      return;
    }
  }
  throw DiagnosticsError("no neighbour of " + std::to_string(state.current) + " accepted in " +
                         std::to_string(kMaxRejections) + " draws");
}

std::vector<std::uint64_t> run_trajectory(std::uint64_t start, std::uint64_t steps, std::uint64_t seed) {
  WalkState state(start, seed, true);
  state.history->reserve(steps + 1);
  for (std::uint64_t s = 0; s < steps; ++s) walk_step(state);
  return std::move(*state.history);
}

std::vector<std::vector<std::uint64_t>> run_trajectories(std::span<const std::uint64_t> starts,
                                                         std::uint64_t steps, std::uint64_t root_seed) {
  std::vector<std::vector<std::uint64_t>> out(starts.size());
  parallel_ranges(starts.size(), [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t t = begin; t < end; ++t) out[t] = run_trajectory(starts[t], steps, derive_seed(root_seed, t));
  });
  return out;
}

void write_trajectory(std::span<const std::uint64_t> path, std::uint64_t seed, std::ostream& out) {
  out << "# seed=" << seed << '\n';
  for (auto v : path) out << v << '\n';
}

MixingEstimate mixing_estimate(std::uint64_t start, std::uint64_t steps, std::uint64_t limit) {
  if (limit < 2 || limit > (std::uint64_t{1} << 16)) throw DomainError("truncation must lie in [2, 2^16]");
  if (start >= limit) throw DomainError("start must lie below the truncation");
  const std::size_t n = limit;

  std::vector<long double> mass(n), q(n), out_rate(n), pi(n);
  long double z = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mass[i] = neighborhood_mass(i).approx();
    q[i] = q_approx(i);
    pi[i] = q[i] * mass[i];
    z += pi[i];
  }
  for (auto& v : pi) v /= z;

  // Probability of jumping from i to some j >= L. Neighbours below i are all
  // below L; above i, either every neighbour is at least 2^i >= L or the
  // block pattern is summed directly for 128 terms and the rest bounded.
  for (std::size_t i = 0; i < n; ++i) {
    long double tail = 0;
    if (i >= 64 || (std::uint64_t{1} << i) >= limit) {
      tail = tail_unit(i);
    } else {
      for (std::uint64_t j = limit; j < limit + 128; ++j) {
        if ((j >> i) & 1u) tail += q_approx(j);
      }
      tail += q_approx(limit + 127);
    }
    out_rate[i] = tail / mass[i];
  }

  std::size_t low_bits = 0;
  while ((std::uint64_t{1} << low_bits) < limit) ++low_bits;

  MixingEstimate est;
  est.start = start;
  est.limit = limit;
  est.stationary_tail = q_approx(limit - 1) / z;

  constexpr long double eps = std::numeric_limits<long double>::epsilon();
  std::vector<long double> p(n, 0), w(n), next(n);
  p[start] = 1;
  long double leak = 0;
  auto record = [&](std::uint64_t step) {
    long double dist = 0;
    for (std::size_t i = 0; i < n; ++i) dist += std::fabs(p[i] - pi[i]);
    const long double tv = 0.5L * (dist + leak);
    const long double err = leak + est.stationary_tail +
                            static_cast<long double>(step + 1) * static_cast<long double>(n + 64) * 4 * eps;
    est.curve.push_back({step, tv, std::max(0.0L, tv - err), std::min(1.0L, tv + err), leak});
  };
  record(0);
  for (std::uint64_t step = 1; step <= steps; ++step) {
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = p[i] / mass[i];
      leak += p[i] * out_rate[i];
    }
    for (std::size_t j = 0; j < n; ++j) {
      long double acc = 0;
      // Neighbours below j are the set bits of j.
      for (std::uint64_t bits = j; bits; bits &= bits - 1) acc += w[std::countr_zero(bits)];
      // Neighbours above j exist below L only when 2^j < L.
      if (j < low_bits) {
        for (std::size_t i = j + 1; i < n; ++i) {
          if ((i >> j) & 1u) acc += w[i];
        }
      }
      next[j] = q[j] * acc;
    }
    p.swap(next);
    record(step);
  }
  est.leak_warning = leak > 0.1L;
  return est;
}

void write_mixing_csv(const MixingEstimate& m, std::ostream& out) {
  out << "step,tv_lower,tv_upper,leak\n";
  char buf[160];
  for (const auto& pt : m.curve) {
    std::snprintf(buf, sizeof buf, "%llu,%.15Le,%.15Le,%.6Le\n", static_cast<unsigned long long>(pt.step),
                  pt.tv_lower, pt.tv_upper, pt.leak);
    out << buf;
  }
}

}  // namespace heisenlab
