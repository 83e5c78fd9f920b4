#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <map>
#include <sstream>

#include "heisenlab/config.hpp"
#include "heisenlab/errors.hpp"
#include "heisenlab/rado.hpp"
#include "oracles.hpp"

using namespace heisenlab;

namespace {

bool adjacent_oracle(std::uint64_t a, std::uint64_t b) {
  if (a == b) return false;
  return a < b ? oracle_test::nth_bit(b, a) : oracle_test::nth_bit(a, b);
}

Rational two_to_minus(unsigned e) {
  Rational r(1);
  for (unsigned i = 0; i < e; ++i) r /= 2;
  return r;
}

}  // namespace

TEST(RadoAdjacent, Examples) {
  EXPECT_TRUE(rado_adjacent(0, 7));
  EXPECT_TRUE(rado_adjacent(7, 0));
  for (std::uint64_t j = 1; j < 200; ++j) EXPECT_EQ(rado_adjacent(0, j), j % 2 == 1);
  EXPECT_TRUE(rado_adjacent(1, 6));
  EXPECT_FALSE(rado_adjacent(1, 4));
  for (std::uint64_t j = 2; j < 200; ++j) EXPECT_EQ(rado_adjacent(1, j), j % 4 == 2 || j % 4 == 3);
  EXPECT_FALSE(rado_adjacent(5, 5));
  EXPECT_FALSE(rado_adjacent(70, 1ull << 63));
}

TEST(Legendre, Examples) {
  EXPECT_EQ(legendre_adjacent(5, 13), oracle_test::is_square_by_enumeration(5, 13));
  EXPECT_FALSE(legendre_adjacent(5, 13));
  EXPECT_EQ(legendre_adjacent(13, 17), oracle_test::is_square_by_enumeration(13, 17));
  EXPECT_TRUE(legendre_adjacent(13, 17));
  EXPECT_EQ(legendre_adjacent(17, 13), legendre_adjacent(13, 17));
  EXPECT_THROW(legendre_adjacent(5, 5), DomainError);
  EXPECT_THROW(legendre_adjacent(7, 13), DomainError);
  EXPECT_THROW(legendre_adjacent(9, 13), DomainError);
}

TEST(Legendre, SymmetricOverPool) {
  const auto model = RadoModel::legendre(1500);
  const auto& pool = model.pool();
  ASSERT_EQ(pool.front(), 5u);
  for (auto q : pool) ASSERT_EQ(q % 4, 1u);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      const bool a = legendre_adjacent(pool[i], pool[j]);
      ASSERT_EQ(a, legendre_adjacent(pool[j], pool[i]));
      ASSERT_EQ(a, oracle_test::is_square_by_enumeration(pool[i], pool[j]));
    }
  }
}

TEST(Extension, Examples) {
  const auto bit = RadoModel::bit();
  EXPECT_EQ(extension_witness(bit, {0}, {1}).least, 5u);
  EXPECT_EQ(extension_witness(bit, {}, {}).least, 0u);
  EXPECT_EQ(extension_witness(bit, {0, 1}, {}).least, 3u);
  EXPECT_THROW(extension_witness(bit, {1}, {1}), DomainError);
}

TEST(Extension, AllDisjointSubsetsOfTen) {
  const auto bit = RadoModel::bit();
  auto valid = [](std::uint64_t z, const std::set<std::uint64_t>& u, const std::set<std::uint64_t>& v) {
    if (u.count(z) || v.count(z)) return false;
    for (auto a : u)
      if (!adjacent_oracle(z, a)) return false;
    for (auto b : v)
      if (adjacent_oracle(z, b)) return false;
    return true;
  };
  // Each element of {0..9} goes to U, V or neither.
  for (int code = 0; code < 59049; ++code) {
    std::set<std::uint64_t> u, v;
    int c = code;
    for (std::uint64_t e = 0; e < 10; ++e, c /= 3) {
      if (c % 3 == 1) u.insert(e);
      if (c % 3 == 2) v.insert(e);
    }
    const auto w = extension_witness(bit, u, v);
    ASSERT_TRUE(valid(w.least, u, v));
    ASSERT_TRUE(w.direct && valid(*w.direct, u, v));
    ASSERT_LE(w.least, *w.direct);
    for (std::uint64_t z = 0; z < w.least; ++z) ASSERT_FALSE(valid(z, u, v));
  }
}

TEST(Extension, LegendreModel) {
  const auto model = RadoModel::legendre(2000);
  const std::set<std::uint64_t> u = {5, 13}, v = {17};
  const auto w = extension_witness(model, u, v);
  for (auto a : u) EXPECT_TRUE(oracle_test::is_square_by_enumeration(w.least, a));
  for (auto b : v) EXPECT_FALSE(oracle_test::is_square_by_enumeration(w.least, b));
  EXPECT_FALSE(w.direct.has_value());
  EXPECT_THROW(extension_witness(RadoModel::legendre(20), {5}, {13}), PoolExhaustedError);
}

TEST(Mass, ClosedFormValues) {
  EXPECT_EQ(neighborhood_mass(0).exact(), Rational(1, 3));
  EXPECT_EQ(neighborhood_mass(1).exact(), Rational(7, 10));
  // Against truncated sums at L = 64.
  for (std::uint64_t i : {0u, 1u, 2u, 5u}) {
    Rational truncated(0);
    for (unsigned j = 0; j < 64; ++j)
      if (adjacent_oracle(i, j)) truncated += two_to_minus(j + 1);
    EXPECT_LT(abs(neighborhood_mass(i).exact() - truncated), two_to_minus(60));
  }
  EXPECT_THROW(neighborhood_mass(40).exact(), SizeCapError);
}

TEST(Mass, BelowOne) {
  for (std::uint64_t i = 0; i < 1024; ++i) {
    const auto m = neighborhood_mass(i);
    const unsigned bits = static_cast<unsigned>(std::min<std::uint64_t>(i, 64));
    // dyadic <= 1 - 2^-bits and the tail 1/(2^(2^i)+1) < 2^-bits.
    ASSERT_LE(m.dyadic, Rational(1) - two_to_minus(bits));
    ASSERT_EQ(m.tail_coeff, 1);
    ASSERT_LT(m.approx(), 1.0L);
    if (i <= MassForm::kExactOrderLimit) ASSERT_LT(m.exact(), 1);
  }
}

TEST(Mass, KernelRowsSumToOne) {
  for (std::uint64_t i = 0; i < 32; ++i) {
    for (std::uint64_t limit : {40u, 64u, 200u}) {
      const auto mass = neighborhood_mass(i);
      const auto tail = neighborhood_tail(i, limit);
      // sum_{j<L} K(i,j) + tail / mass == 1  <=>  truncated + tail == mass
      ASSERT_EQ(truncated_neighborhood_mass(i, limit) + tail.dyadic, mass.dyadic) << i << " " << limit;
      ASSERT_EQ(tail.tail_coeff, mass.tail_coeff);
      ASSERT_EQ(tail.order, mass.order);
    }
    if (i <= 6) {
      Rational row(0);
      for (std::uint64_t j = 0; j < 300; ++j) row += kernel_entry(i, j);
      const Rational tail = neighborhood_tail(i, 300).exact() / neighborhood_mass(i).exact();
      EXPECT_EQ(row + tail, 1);
    }
  }
}

TEST(Kernel, Entries) {
  EXPECT_EQ(kernel_entry(0, 1), Rational(3, 4));
  EXPECT_EQ(kernel_entry(0, 2), 0);
  EXPECT_NEAR(static_cast<double>(kernel_entry_approx(0, 1)), 0.75, 1e-15);
}

TEST(Stationary, DetailedBalance) {
  const auto sv = stationary_vector(128);
  EXPECT_TRUE(sv.certificate.symbolic_holds);
  EXPECT_TRUE(sv.certificate.expanded_holds);
  EXPECT_EQ(sv.certificate.adjacent_pairs + sv.certificate.nonadjacent_pairs, 128u * 127 / 2);
  EXPECT_EQ(sv.certificate.expanded_pairs, 17u * 16 / 2);
  const Rational ratio = sv.weights[0].coefficient * neighborhood_mass(0).exact() /
                         (sv.weights[1].coefficient * neighborhood_mass(1).exact());
  EXPECT_EQ(ratio, Rational(20, 21));
  EXPECT_EQ((stationary_weight(0) * kernel_monomial(0, 2)).coefficient, 0);
  EXPECT_EQ((stationary_weight(2) * kernel_monomial(2, 0)).coefficient, 0);
}

TEST(Walk, FrequencyFromZero) {
  WalkState s(0, 42);
  std::uint64_t ones = 0;
  const int trials = 100000;
  for (int t = 0; t < trials; ++t) {
    s.current = 0;
    walk_step(s);
    ASSERT_TRUE(adjacent_oracle(0, s.current));
    ones += s.current == 1;
  }
  EXPECT_NEAR(static_cast<double>(ones) / trials, 0.75, 0.01);
}

TEST(Walk, ChiSquaredAgainstExactKernel) {
  const double critical = boost::math::quantile(boost::math::complement(boost::math::chi_squared(1), 1e-3));
  ASSERT_GT(critical, 10.0);
  for (std::uint64_t start = 0; start < 8; ++start) {
    WalkState s(start, derive_seed(99, start));
    const int samples = 100000;
    std::map<std::uint64_t, std::uint64_t> counts;
    for (int t = 0; t < samples; ++t) {
      s.current = start;
      walk_step(s);
      ASSERT_TRUE(adjacent_oracle(start, s.current));
      ++counts[s.current];
    }
    // Bins: neighbours with expected count >= 5, the rest lumped.
    double stat = 0, rest_expected = samples, rest_observed = samples;
    int bins = 0;
    for (std::uint64_t j = 0; j < 64; ++j) {
      const double expected = kernel_entry(start, j).get_d() * samples;
      if (expected < 5) continue;
      const double observed = static_cast<double>(counts[j]);
      stat += (observed - expected) * (observed - expected) / expected;
      rest_expected -= expected;
      rest_observed -= observed;
      ++bins;
    }
    if (rest_expected >= 5) {
      stat += (rest_observed - rest_expected) * (rest_observed - rest_expected) / rest_expected;
      ++bins;
    }
    const double crit = boost::math::quantile(boost::math::complement(boost::math::chi_squared(bins - 1), 1e-3));
    EXPECT_LT(stat, crit) << "start " << start;
  }
}

TEST(Walk, Deterministic) {
  EXPECT_EQ(run_trajectory(3, 500, 7), run_trajectory(3, 500, 7));
  EXPECT_NE(run_trajectory(3, 500, 7), run_trajectory(3, 500, 8));
  const std::vector<std::uint64_t> starts = {0, 1, 2, 3, 4};
  const unsigned before = worker_count();
  set_worker_count(1);
  const auto a = run_trajectories(starts, 100, 5);
  set_worker_count(4);
  const auto b = run_trajectories(starts, 100, 5);
  set_worker_count(before);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a[2], run_trajectory(2, 100, derive_seed(5, 2)));
  for (const auto& path : a)
    for (std::size_t i = 1; i < path.size(); ++i) ASSERT_TRUE(adjacent_oracle(path[i - 1], path[i]));
}

TEST(Walk, TrajectoryDump) {
  std::ostringstream os;
  write_trajectory(std::vector<std::uint64_t>{0, 1, 3}, 7, os);
  EXPECT_EQ(os.str(), "# seed=7\n0\n1\n3\n");
}

TEST(Mixing, InitialPointAndMonotone) {
  for (auto [start, limit] : {std::pair<std::uint64_t, std::uint64_t>{0, 1024}, {1024, 2048}, {5, 256}}) {
    const auto est = mixing_estimate(start, 60, limit);
    ASSERT_EQ(est.curve.size(), 61u);
    // Π_L(start) from exact-form masses.
    long double z = 0, pi_start = 0;
    for (std::uint64_t i = 0; i < limit; ++i) {
      const long double w = std::ldexp(1.0L, -static_cast<int>(i + 1)) * neighborhood_mass(i).approx();
      z += w;
      if (i == start) pi_start = w;
    }
    EXPECT_NEAR(static_cast<double>(est.curve[0].tv), static_cast<double>(1 - pi_start / z), 1e-15);
    for (std::size_t t = 1; t < est.curve.size(); ++t) {
      ASSERT_LE(est.curve[t].tv_lower, est.curve[t - 1].tv_upper) << start << " step " << t;
      ASSERT_LE(est.curve[t].tv_lower, est.curve[t].tv);
      ASSERT_GE(est.curve[t].tv_upper, est.curve[t].tv);
    }
    EXPECT_FALSE(est.leak_warning);
  }
  EXPECT_THROW(mixing_estimate(1024, 10, 1024), DomainError);
}

TEST(Mixing, MassConservedUpToLeak) {
  const auto est = mixing_estimate(0, 40, 64);
  // With L = 64 the leak per step is about 2^-64 per unit mass.
  EXPECT_LT(est.curve.back().leak, 1e-15L);
  EXPECT_GE(est.curve.back().leak, 0.0L);
}
