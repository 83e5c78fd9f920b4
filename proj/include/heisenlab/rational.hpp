#pragma once

#include <gmpxx.h>

#include <string>

namespace heisenlab {

// Exact rationals, always kept canonical (lowest terms, positive denominator).
using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

}  // namespace heisenlab
