#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heisenlab/config.hpp"
#include "heisenlab/fp.hpp"

namespace heisenlab {

/// An element [x, y, z] of H_{2n+1}(p): x, y in F_p^n, z in F_p, with
///   [x, y, z][x', y', z'] = [x + x', y + y', z + z' + x.y'].
/// Ordering is lexicographic on (x, y, z), which is also the canonical
/// enumeration order used for vertex numbering.
struct HeisElem {
  FpVec x;
  FpVec y;
  Residue z = 0;
  PrimeModulus p;

  HeisElem(FpVec x_, FpVec y_, Residue z_, PrimeModulus p_);

  std::size_t n() const { return x.size(); }
  bool is_central() const { return x.is_zero() && y.is_zero(); }

  friend bool operator==(const HeisElem&, const HeisElem&) = default;
  friend auto operator<=>(const HeisElem&, const HeisElem&) = default;
};

std::string to_string(const HeisElem& a);

HeisElem h_identity(std::size_t n, PrimeModulus p);
HeisElem h_mul(const HeisElem& a, const HeisElem& b);
HeisElem h_inv(const HeisElem& a);
HeisElem h_pow(const HeisElem& a, std::uint64_t e);
// a^-1 b^-1 a b, always central: [0, 0, x.b' - a'.y].
HeisElem h_commutator(const HeisElem& a, const HeisElem& b);
bool h_commutes(const HeisElem& a, const HeisElem& b);

/// Conjugacy class label. Central elements are singleton classes labelled by
/// z; every other class is the coset [x, y, *] labelled by (x, y) != (0, 0).
class ClassLabel {
 public:
  static ClassLabel central(Residue z);
  static ClassLabel noncentral(FpVec x, FpVec y);

  bool is_central() const { return central_; }
  Residue z() const { return z_; }
  const FpVec& x() const { return x_; }
  const FpVec& y() const { return y_; }

  friend bool operator==(const ClassLabel&, const ClassLabel&) = default;
  friend auto operator<=>(const ClassLabel&, const ClassLabel&) = default;

 private:
  ClassLabel() = default;
  bool central_ = true;
  Residue z_ = 0;
  FpVec x_;
  FpVec y_;
};

std::string to_string(const ClassLabel& c);

ClassLabel class_of(const HeisElem& a);

/// H_{2n+1}(p) as an indexable finite group. Element i of the canonical order
/// has base-p digits (x_1 .. x_n, y_1 .. y_n, z), most significant first.
class HeisenbergGroup {
 public:
  using Element = HeisElem;

  HeisenbergGroup(std::size_t n, PrimeModulus p);

  std::size_t n() const { return n_; }
  PrimeModulus modulus() const { return p_; }
  // p^{2n+1}; nullopt when it does not fit in 64 bits.
  std::optional<std::uint64_t> order_if_small() const { return order_; }
  std::uint64_t order() const;

  // Throws SizeCapError when the group has more than `cap` elements.
  void require_enumerable(std::uint64_t cap = enumeration_cap()) const;

  HeisElem element(std::uint64_t index) const;
  std::uint64_t index_of(const HeisElem& a) const;
  std::vector<HeisElem> enumerate(std::uint64_t cap = enumeration_cap()) const;

  HeisElem identity() const { return h_identity(n_, p_); }
  HeisElem multiply(const HeisElem& a, const HeisElem& b) const { return h_mul(a, b); }
  HeisElem inverse(const HeisElem& a) const { return h_inv(a); }
  bool commutes(const HeisElem& a, const HeisElem& b) const { return h_commutes(a, b); }
  // [e_i, 0, 0] and [0, e_i, 0] for i = 1..n.
  std::vector<HeisElem> generators() const;
  HeisElem center_generator() const;

  void check_member(const HeisElem& a) const;

 private:
  std::size_t n_;
  PrimeModulus p_;
  std::optional<std::uint64_t> order_;
};

std::vector<HeisElem> enumerate_group(std::size_t n, PrimeModulus p,
                                      std::uint64_t cap = enumeration_cap());

struct SubgroupReport {
  std::uint64_t order = 0;
  std::uint64_t center_size = 0;
  bool derived_equals_center = false;
  bool exponent_p = false;
  bool nonabelian = false;
  bool is_extraspecial = false;
};

struct GeneratedSubgroup {
  std::vector<HeisElem> elements;  // sorted in canonical order
  SubgroupReport report;
};

/// Closure of X (and Z(H) when include_center) inside `ambient`. Every report
/// field is computed by enumerating the closure.
GeneratedSubgroup subgroup_generated(const HeisenbergGroup& ambient,
                                     std::span<const HeisElem> generators,
                                     bool include_center,
                                     std::uint64_t cap = enumeration_cap());

}  // namespace heisenlab
