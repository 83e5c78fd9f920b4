#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "heisenlab/config.hpp"
#include "heisenlab/fp.hpp"
#include "heisenlab/heisenberg.hpp"
#include "heisenlab/rational.hpp"

namespace heisenlab {

/// An n x n upper-unitriangular matrix over F_p. Only the strictly upper
/// entries are stored, row-major: (1,2), (1,3), ..., (1,n), (2,3), ...
/// Indices in the accessors are 1-based to match the usual matrix notation.
class UtMatrix {
 public:
  UtMatrix(std::size_t n, PrimeModulus p);  // identity
  static UtMatrix from_entries(std::size_t n, PrimeModulus p, std::span<const std::int64_t> upper);

  std::size_t n() const { return n_; }
  PrimeModulus modulus() const { return p_; }
  std::span<const Residue> entries() const { return entries_; }

  // Entry (i, j); 1 on the diagonal, 0 below it.
  Residue at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, std::int64_t value);
  bool is_identity() const;

  friend bool operator==(const UtMatrix&, const UtMatrix&) = default;
  friend auto operator<=>(const UtMatrix&, const UtMatrix&) = default;

 private:
  std::size_t offset(std::size_t i, std::size_t j) const;

  std::size_t n_;
  PrimeModulus p_;
  std::vector<Residue> entries_;
};

std::string to_string(const UtMatrix& a);

constexpr std::size_t ut_entry_count(std::size_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

UtMatrix ut_mul(const UtMatrix& a, const UtMatrix& b);
UtMatrix ut_inv(const UtMatrix& a);
bool ut_commutes(const UtMatrix& a, const UtMatrix& b);

/// UT(n, p) as an indexable group; element i has the stored entries as its
/// base-p digits, most significant first.
class UnitriangularGroup {
 public:
  using Element = UtMatrix;

  UnitriangularGroup(std::size_t n, PrimeModulus p);

  std::size_t n() const { return n_; }
  PrimeModulus modulus() const { return p_; }
  std::uint64_t order() const;
  void require_enumerable(std::uint64_t cap = enumeration_cap()) const;

  UtMatrix element(std::uint64_t index) const;
  std::uint64_t index_of(const UtMatrix& a) const;
  std::vector<UtMatrix> enumerate(std::uint64_t cap = enumeration_cap()) const;

  UtMatrix identity() const { return UtMatrix(n_, p_); }
  UtMatrix multiply(const UtMatrix& a, const UtMatrix& b) const { return ut_mul(a, b); }
  UtMatrix inverse(const UtMatrix& a) const { return ut_inv(a); }
  bool commutes(const UtMatrix& a, const UtMatrix& b) const { return ut_commutes(a, b); }
  // I + E_{i,i+1}, i = 1..n-1.
  std::vector<UtMatrix> generators() const;

 private:
  std::size_t n_;
  PrimeModulus p_;
  std::optional<std::uint64_t> order_;
};

/// H_{2n+1}(p) inside U_{n+2}: x along the top row, y down the last column,
/// z in the top-right corner.
UtMatrix heisenberg_matrix(const HeisElem& a);

// ---------------------------------------------------------------------------
// Core/shell decomposition of X in U_{n+2}.

/// Core: erase the first and last rows and columns. U_{n+2} -> U_n.
UtMatrix u_map(const UtMatrix& x);

/// Shell: (x_{1,2..n+1}, x_{2..n+1,n+2}, x_{1,n+2}) as an element of H_{2n+1}.
HeisElem h_map(const UtMatrix& x);

/// Inverse of X -> (u(X), h(X)).
UtMatrix assemble(const UtMatrix& core, const HeisElem& shell);

/// Shell variables in the pinned order
/// (x_{1,2}, ..., x_{1,n+1}, x_{2,n+2}, ..., x_{n+1,n+2}).
std::vector<Residue> shell_variables(const UtMatrix& x);

struct TowerNode {
  UtMatrix matrix;
  std::size_t level;  // matrix == u^level(X)
};

struct Tower {
  std::vector<TowerNode> nodes;
  // Even dimensions step down to U_2 instead of the root [1] in U_1.
  bool bottoms_at_u2 = false;
};

Tower tower(const UtMatrix& x);

/// |{X : u(X) = A}| = p^{2m+1} for A in U_m.
std::uint64_t fiber_size(const UtMatrix& a);

/// |{Y in U_N : u^l(Y) = B, Y commutes with X}|, by enumeration. B of size
/// at most 1 is the root, in which case this is the degree of X in Γ(U_N).
std::uint64_t deg_over(const UtMatrix& x, const UtMatrix& b, std::uint64_t cap = enumeration_cap());

// ---------------------------------------------------------------------------
// Equations for XY = YX with fixed cores.

/// Column set σ and row set τ of the nonzero above-diagonal entries of A in
/// U_n, indexed as they would sit inside U_{n+2}.
struct SigmaTau {
  std::set<std::size_t> sigma;  // subset of {3, ..., n+1}
  std::set<std::size_t> tau;    // subset of {2, ..., n}
};

SigmaTau sigma_tau(const UtMatrix& a);
std::set<std::size_t> symmetrize(const SigmaTau& st);

/// E_{row,col}: coeff_x . xs + coeff_y . ys = 0, over the 2n shell variables
/// of X and of Y.
struct LinearEquation {
  std::size_t row;
  std::size_t col;
  std::vector<Residue> coeff_x;
  std::vector<Residue> coeff_y;
};

struct EquationSystem {
  std::size_t n = 0;  // cores live in U_n, shells in H_{2n+1}
  PrimeModulus p{2};
  bool core_commutes = false;
  std::vector<LinearEquation> group_a;  // E_{1,3} .. E_{1,n+1}
  std::vector<LinearEquation> group_b;  // E_{2,n+2} .. E_{n,n+2}
  // E_{1,n+2}: xs^T M ys = 0 with M row-major 2n x 2n.
  std::vector<Residue> heisenberg;

  bool linear_satisfied(std::span<const Residue> xs, std::span<const Residue> ys) const;
  bool heisenberg_satisfied(std::span<const Residue> xs, std::span<const Residue> ys) const;
  Residue heisenberg_value(std::span<const Residue> xs, std::span<const Residue> ys) const;
  // Whether X, Y with these cores and shells commute.
  bool satisfied(std::span<const Residue> xs, std::span<const Residue> ys) const;
};

EquationSystem equation_system(const UtMatrix& a, const UtMatrix& b);

/// Lifted sets above a commuting clique A_1..A_t in U_n:
/// X*_i = {X : u(X) = A_i, shell zero on the symmetrized indices}.
struct CliqueLift {
  std::set<std::size_t> symmetrized;
  std::size_t m = 0;  // n - |symmetrized|
  std::vector<std::vector<UtMatrix>> parts;
  // Every part maps bijectively onto H_{2m+1} under the reduced shell map.
  bool bijective = false;
  // Commuting in U_{n+2} equals commuting of the reduced shells in H_{2m+1},
  // for every pair drawn from the union of the parts.
  bool isomorphic = false;
  std::uint64_t pairs_checked = 0;
};

/// Reduced shell map: keep the top-row / last-column coordinates outside
/// `symmetrized`, plus the corner.
HeisElem reduced_shell(const UtMatrix& x, const std::set<std::size_t>& symmetrized);

CliqueLift clique_lift(std::span<const UtMatrix> clique, bool verify = true,
                            std::uint64_t cap = enumeration_cap());

enum class BlockLabel {
  full_heisenberg,     // edges are exactly the Heisenberg relation on free coordinates
  empty,               // no edges
  shifted_heisenberg,  // edges are ω(free_X, free_Y) = -c for a constant c != 0
};

std::string to_string(BlockLabel label);

struct BlockPairResult {
  std::uint64_t x_block;
  std::uint64_t y_block;
  BlockLabel predicted;
  Residue shift = 0;  // c for shifted blocks
  bool verified = false;
};

/// Partition of the fibers over A and B by the shell values on the
/// symmetrized indices, with every block pair classified from the
/// equations and then checked by exhaustive commuting tests.
struct Equipartition {
  std::set<std::size_t> symmetrized;
  std::size_t m = 0;
  std::uint64_t block_count = 0;  // per side, p^{2(n-m)}
  std::uint64_t block_size = 0;   // p^{2m+1}
  bool equal_sizes = false;
  std::vector<BlockPairResult> pairs;
  std::uint64_t full_count = 0;
  std::uint64_t empty_count = 0;
  std::uint64_t shifted_count = 0;
  bool all_verified = false;
  // Every pair is full Heisenberg or empty.
  bool dichotomy_holds() const { return shifted_count == 0; }
};

Equipartition equipartition(const UtMatrix& a, const UtMatrix& b, bool verify = true,
                            std::uint64_t cap = enumeration_cap());

// ---------------------------------------------------------------------------
// Whole-group checks.

struct CensusRecord {
  std::size_t n = 0;
  std::uint32_t p = 0;
  std::uint64_t order = 0;
  std::uint64_t classes = 0;
  BigInt commuting_pairs;            // |G| c(G)
  std::optional<bool> pairs_direct;  // direct pair count agreed, when affordable
  Rational probability;              // c(G) / |G|
  double log_p_classes = 0;
  double higman_exponent = 0;  // n^2 / 12
  double soffer_exponent = 0;  // 7 n^2 / 44
};

inline constexpr std::uint64_t kDirectPairBudget = 4096;

CensusRecord conjugacy_census(std::size_t n, PrimeModulus p, std::uint64_t cap = enumeration_cap());

struct AndreReport {
  std::uint64_t set_size = 0;    // |C|
  std::uint64_t orbit_size = 0;  // class of the least member of C
  bool is_single_class = false;
  // The same test on the part of C with both leading entries equal to 1.
  std::uint64_t unit_set_size = 0;
  bool unit_is_single_class = false;
};

/// C in H_{2n+1} <= U_{n+2}: first nonzero of the top row at column l, lowest
/// nonzero of the last column at row k. Compares C with the U_{n+2}-class of
/// one member.
AndreReport andre_class_check(std::size_t n, PrimeModulus p, std::size_t k, std::size_t l,
                              std::uint64_t cap = enumeration_cap());

struct SemidirectReport {
  bool complement_isomorphic = false;  // u restricted to the complement is an isomorphism onto U_n
  bool trivial_intersection = false;
  bool covers = false;  // shell * complement = U_{n+2}, with |shell||complement| = |U_{n+2}|
  bool holds() const { return complement_isomorphic && trivial_intersection && covers; }
};

SemidirectReport semidirect_check(std::size_t n, PrimeModulus p, std::uint64_t cap = enumeration_cap());

}  // namespace heisenlab
