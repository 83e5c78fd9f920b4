#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace heisenlab {

using Residue = std::uint32_t;

// Deterministic trial-division primality test; adequate for the 32-bit range.
bool is_prime(std::uint64_t n);

/// A prime modulus in [2, 2^16). All residue arithmetic is done eagerly
/// reduced, and products of two residues fit comfortably in 64 bits.
class PrimeModulus {
 public:
  static constexpr std::uint32_t kMaxExclusive = 1u << 16;

  explicit PrimeModulus(std::uint64_t p);

  std::uint32_t value() const { return p_; }
  operator std::uint32_t() const { return p_; }

  Residue reduce(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    return static_cast<Residue>(r < 0 ? r + p_ : r);
  }
  Residue add(Residue a, Residue b) const { return (a + b) % p_; }
  Residue sub(Residue a, Residue b) const { return (a + p_ - b) % p_; }
  Residue neg(Residue a) const { return a == 0 ? 0 : p_ - a; }
  Residue mul(Residue a, Residue b) const {
    return static_cast<Residue>(static_cast<std::uint64_t>(a) * b % p_);
  }
  Residue pow(Residue a, std::uint64_t e) const;

  friend bool operator==(const PrimeModulus&, const PrimeModulus&) = default;
  friend auto operator<=>(const PrimeModulus&, const PrimeModulus&) = default;

 private:
  std::uint32_t p_;
};

/// A vector over F_p. Entries are always reduced; the modulus itself is
/// supplied by the caller of each operation.
class FpVec {
 public:
  FpVec() = default;
  explicit FpVec(std::size_t n) : entries_(n, 0) {}
  FpVec(std::initializer_list<std::int64_t> values, PrimeModulus p);
  FpVec(std::span<const std::int64_t> values, PrimeModulus p);

  static FpVec basis(std::size_t n, std::size_t i);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  Residue operator[](std::size_t i) const { return entries_[i]; }
  Residue& operator[](std::size_t i) { return entries_[i]; }
  std::span<const Residue> entries() const { return entries_; }
  bool is_zero() const;

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const FpVec&, const FpVec&) = default;
  friend auto operator<=>(const FpVec&, const FpVec&) = default;

 private:
  std::vector<Residue> entries_;
};

std::string to_string(const FpVec& v);

FpVec vec_add(const FpVec& a, const FpVec& b, PrimeModulus p);
FpVec vec_sub(const FpVec& a, const FpVec& b, PrimeModulus p);
FpVec vec_neg(const FpVec& a, PrimeModulus p);
FpVec vec_scale(Residue c, const FpVec& a, PrimeModulus p);
Residue vec_dot(const FpVec& a, const FpVec& b, PrimeModulus p);

/// The alternating form x.b - y.a on pairs (x, y), (a, b) in F_p^n x F_p^n.
/// Two Heisenberg elements commute exactly when this vanishes on their
/// (x, y) parts.
Residue symplectic(const FpVec& x, const FpVec& y, const FpVec& a,
                   const FpVec& b, PrimeModulus p);

}  // namespace heisenlab
