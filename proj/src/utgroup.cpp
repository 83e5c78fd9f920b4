#include "heisenlab/utgroup.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_set>

#include "heisenlab/errors.hpp"
#include "heisenlab/oracle.hpp"

namespace heisenlab {

namespace {

void require_compatible(const UtMatrix& a, const UtMatrix& b) {
  if (a.modulus() != b.modulus()) throw DimensionError("modulus mismatch");
  if (a.n() != b.n()) {
    throw DimensionError("matrix size mismatch: " + std::to_string(a.n()) + " vs " +
                         std::to_string(b.n()));
  }
}

std::optional<std::uint64_t> checked_power(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (r > UINT64_MAX / base) return std::nullopt;
    r *= base;
  }
  return r;
}

std::uint64_t power_or_cap(std::uint64_t base, std::uint64_t exp, std::uint64_t cap,
                           const std::string& what) {
  auto r = checked_power(base, exp);
  if (!r || *r > cap) {
    throw SizeCapError(what + " exceeds the enumeration cap of " + std::to_string(cap));
  }
  return *r;
}

// Mixed-radix odometer over `count` base-p digits.
bool advance(std::vector<Residue>& digits, std::uint32_t p) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < p) return true;
    digits[i] = 0;
  }
  return false;
}

}  // namespace

UtMatrix::UtMatrix(std::size_t n, PrimeModulus p) : n_(n), p_(p), entries_(ut_entry_count(n), 0) {}

UtMatrix UtMatrix::from_entries(std::size_t n, PrimeModulus p, std::span<const std::int64_t> upper) {
  if (upper.size() != ut_entry_count(n)) {
    throw DimensionError("UT(" + std::to_string(n) + ") needs " + std::to_string(ut_entry_count(n)) +
                         " entries, got " + std::to_string(upper.size()));
  }
  UtMatrix m(n, p);
  for (std::size_t i = 0; i < upper.size(); ++i) m.entries_[i] = p.reduce(upper[i]);
  return m;
}

std::size_t UtMatrix::offset(std::size_t i, std::size_t j) const {
  // Rows 1..i-1 contribute (n-1) + (n-2) + ... + (n-i+1) entries.
  return (i - 1) * (2 * n_ - i) / 2 + (j - i - 1);
}

Residue UtMatrix::at(std::size_t i, std::size_t j) const {
  if (i < 1 || j < 1 || i > n_ || j > n_) throw DomainError("matrix index out of range");
  if (i == j) return 1;
  if (i > j) return 0;
  return entries_[offset(i, j)];
}

void UtMatrix::set(std::size_t i, std::size_t j, std::int64_t value) {
  if (i < 1 || j > n_ || i >= j) throw DomainError("only strictly upper entries are settable");
  entries_[offset(i, j)] = p_.reduce(value);
}

bool UtMatrix::is_identity() const {
  return std::all_of(entries_.begin(), entries_.end(), [](Residue r) { return r == 0; });
}

std::string to_string(const UtMatrix& a) {
  std::ostringstream os;
  os << "UT" << a.n() << '[';
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    if (i) os << ',';
    os << a.entries()[i];
  }
  os << ']';
  return os.str();
}

UtMatrix ut_mul(const UtMatrix& a, const UtMatrix& b) {
  require_compatible(a, b);
  const std::size_t n = a.n();
  const auto p = a.modulus();
  UtMatrix c(n, p);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = i + 1; j <= n; ++j) {
      std::uint64_t acc = static_cast<std::uint64_t>(a.at(i, j)) + b.at(i, j);
      for (std::size_t k = i + 1; k < j; ++k) acc += static_cast<std::uint64_t>(a.at(i, k)) * b.at(k, j);
      c.set(i, j, static_cast<std::int64_t>(acc % p.value()));
    }
  }
  return c;
}

UtMatrix ut_inv(const UtMatrix& a) {
  const std::size_t n = a.n();
  const auto p = a.modulus();
  UtMatrix inv(n, p);
  // (A B)_{ij} = 0 for i < j gives b_ij = -a_ij - sum_{i<k<j} a_ik b_kj,
  // filled in order of increasing j - i.
  for (std::size_t d = 1; d < n; ++d) {
    for (std::size_t i = 1; i + d <= n; ++i) {
      const std::size_t j = i + d;
      std::uint64_t acc = a.at(i, j);
      for (std::size_t k = i + 1; k < j; ++k) acc += static_cast<std::uint64_t>(a.at(i, k)) * inv.at(k, j);
      inv.set(i, j, -static_cast<std::int64_t>(acc % p.value()));
    }
  }
  return inv;
}

bool ut_commutes(const UtMatrix& a, const UtMatrix& b) { return ut_mul(a, b) == ut_mul(b, a); }

UnitriangularGroup::UnitriangularGroup(std::size_t n, PrimeModulus p)
    : n_(n), p_(p), order_(checked_power(p.value(), ut_entry_count(n))) {}

std::uint64_t UnitriangularGroup::order() const {
  if (!order_) throw SizeCapError("UT(" + std::to_string(n_) + ") order overflows 64 bits");
  return *order_;
}

void UnitriangularGroup::require_enumerable(std::uint64_t cap) const {
  if (!order_ || *order_ > cap) {
    throw SizeCapError("UT(" + std::to_string(n_) + "," + std::to_string(p_.value()) +
                       ") exceeds the enumeration cap of " + std::to_string(cap));
  }
}

UtMatrix UnitriangularGroup::element(std::uint64_t index) const {
  if (index >= order()) throw DomainError("element index out of range");
  const std::size_t count = ut_entry_count(n_);
  std::vector<std::int64_t> digits(count);
  for (std::size_t i = count; i-- > 0;) {
    digits[i] = static_cast<std::int64_t>(index % p_.value());
    index /= p_.value();
  }
  return UtMatrix::from_entries(n_, p_, digits);
}

std::uint64_t UnitriangularGroup::index_of(const UtMatrix& a) const {
  if (a.n() != n_ || a.modulus() != p_) throw DimensionError("matrix does not belong to this group");
  order();
  std::uint64_t index = 0;
  for (auto v : a.entries()) index = index * p_.value() + v;
  return index;
}

std::vector<UtMatrix> UnitriangularGroup::enumerate(std::uint64_t cap) const {
  require_enumerable(cap);
  std::vector<UtMatrix> out;
  out.reserve(*order_);
  for (std::uint64_t i = 0; i < *order_; ++i) out.push_back(element(i));
  return out;
}

std::vector<UtMatrix> UnitriangularGroup::generators() const {
  std::vector<UtMatrix> gens;
  for (std::size_t i = 1; i < n_; ++i) {
    UtMatrix g(n_, p_);
    g.set(i, i + 1, 1);
    gens.push_back(std::move(g));
  }
  return gens;
}

UtMatrix heisenberg_matrix(const HeisElem& a) {
  const std::size_t n = a.n();
  UtMatrix m(n + 2, a.p);
  for (std::size_t i = 0; i < n; ++i) {
    m.set(1, i + 2, a.x[i]);
    m.set(i + 2, n + 2, a.y[i]);
  }
  m.set(1, n + 2, a.z);
  return m;
}

UtMatrix u_map(const UtMatrix& x) {
  if (x.n() < 2) throw DomainError("u is defined on U_N for N >= 2");
  const std::size_t n = x.n() - 2;
  UtMatrix core(n, x.modulus());
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = i + 1; j <= n; ++j) core.set(i, j, x.at(i + 1, j + 1));
  }
  return core;
}

HeisElem h_map(const UtMatrix& x) {
  if (x.n() < 2) throw DomainError("h is defined on U_N for N >= 2");
  const std::size_t n = x.n() - 2;
  FpVec top(n), right(n);
  for (std::size_t k = 0; k < n; ++k) {
    top[k] = x.at(1, k + 2);
    right[k] = x.at(k + 2, n + 2);
  }
  return HeisElem(std::move(top), std::move(right), x.at(1, n + 2), x.modulus());
}

UtMatrix assemble(const UtMatrix& core, const HeisElem& shell) {
  if (core.modulus() != shell.p) throw DimensionError("modulus mismatch");
  if (shell.n() != core.n()) throw DimensionError("shell rank must equal core size");
  UtMatrix x = heisenberg_matrix(shell);
  const std::size_t n = core.n();
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = i + 1; j <= n; ++j) x.set(i + 1, j + 1, core.at(i, j));
  }
  return x;
}

std::vector<Residue> shell_variables(const UtMatrix& x) {
  const std::size_t n = x.n() - 2;
  std::vector<Residue> vars(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    vars[k] = x.at(1, k + 2);
    vars[n + k] = x.at(k + 2, n + 2);
  }
  return vars;
}

Tower tower(const UtMatrix& x) {
  Tower t;
  UtMatrix current = x;
  std::size_t level = 0;
  t.nodes.push_back({current, level});
  while (current.n() > 2) {
    current = u_map(current);
    t.nodes.push_back({current, ++level});
  }
  t.bottoms_at_u2 = current.n() == 2;
  return t;
}

std::uint64_t fiber_size(const UtMatrix& a) {
  auto r = checked_power(a.modulus().value(), 2 * a.n() + 1);
  if (!r) throw SizeCapError("fiber size overflows 64 bits");
  return *r;
}

std::uint64_t deg_over(const UtMatrix& x, const UtMatrix& b, std::uint64_t cap) {
  if (x.modulus() != b.modulus()) throw DimensionError("modulus mismatch");
  const std::size_t big = x.n();
  const bool root = b.n() <= 1;
  if (!root && (b.n() > big || (big - b.n()) % 2 != 0)) {
    throw DimensionError("B must sit an even number of levels below X");
  }
  const std::size_t depth = root ? big : (big - b.n()) / 2;
  const auto p = x.modulus();

  // Positions of Y not pinned by u^depth(Y) = B.
  std::vector<std::pair<std::size_t, std::size_t>> free;
  for (std::size_t i = 1; i <= big; ++i) {
    for (std::size_t j = i + 1; j <= big; ++j) {
      const bool inner = !root && i > depth && j <= big - depth;
      if (!inner) free.emplace_back(i, j);
    }
  }
  power_or_cap(p.value(), free.size(), cap, "deg_over fiber");

  UtMatrix y(big, p);
  if (!root) {
    for (std::size_t i = 1; i <= b.n(); ++i) {
      for (std::size_t j = i + 1; j <= b.n(); ++j) y.set(i + depth, j + depth, b.at(i, j));
    }
  }
  std::vector<Residue> digits(free.size(), 0);
  std::uint64_t count = 0;
  do {
    for (std::size_t f = 0; f < free.size(); ++f) y.set(free[f].first, free[f].second, digits[f]);
    if (ut_commutes(x, y)) ++count;
  } while (advance(digits, p.value()));
  return count;
}

SigmaTau sigma_tau(const UtMatrix& a) {
  SigmaTau st;
  for (std::size_t i = 1; i <= a.n(); ++i) {
    for (std::size_t j = i + 1; j <= a.n(); ++j) {
      if (a.at(i, j) != 0) {
        st.tau.insert(i + 1);
        st.sigma.insert(j + 1);
      }
    }
  }
  return st;
}

std::set<std::size_t> symmetrize(const SigmaTau& st) {
  std::set<std::size_t> out = st.sigma;
  out.insert(st.tau.begin(), st.tau.end());
  return out;
}

bool EquationSystem::linear_satisfied(std::span<const Residue> xs, std::span<const Residue> ys) const {
  auto holds = [&](const LinearEquation& e) {
    std::uint64_t acc = 0;
    for (std::size_t v = 0; v < 2 * n; ++v) {
      acc += static_cast<std::uint64_t>(e.coeff_x[v]) * xs[v];
      acc += static_cast<std::uint64_t>(e.coeff_y[v]) * ys[v];
    }
    return acc % p.value() == 0;
  };
  return std::all_of(group_a.begin(), group_a.end(), holds) &&
         std::all_of(group_b.begin(), group_b.end(), holds);
}

Residue EquationSystem::heisenberg_value(std::span<const Residue> xs, std::span<const Residue> ys) const {
  const std::size_t dim = 2 * n;
  std::uint64_t acc = 0;
  for (std::size_t r = 0; r < dim; ++r) {
    if (xs[r] == 0) continue;
    std::uint64_t row = 0;
    for (std::size_t c = 0; c < dim; ++c) row += static_cast<std::uint64_t>(heisenberg[r * dim + c]) * ys[c];
    acc += (row % p.value()) * xs[r];
  }
  return static_cast<Residue>(acc % p.value());
}

bool EquationSystem::heisenberg_satisfied(std::span<const Residue> xs, std::span<const Residue> ys) const {
  return heisenberg_value(xs, ys) == 0;
}

bool EquationSystem::satisfied(std::span<const Residue> xs, std::span<const Residue> ys) const {
  return core_commutes && linear_satisfied(xs, ys) && heisenberg_satisfied(xs, ys);
}

EquationSystem equation_system(const UtMatrix& a, const UtMatrix& b) {
  require_compatible(a, b);
  const std::size_t n = a.n();
  const auto p = a.modulus();
  // Core entries as they sit in U_{n+2}.
  auto ca = [&](std::size_t i, std::size_t j) { return a.at(i - 1, j - 1); };
  auto cb = [&](std::size_t i, std::size_t j) { return b.at(i - 1, j - 1); };
  auto top = [](std::size_t k) { return k - 2; };              // x_{1,k}
  auto right = [n](std::size_t k) { return n + k - 2; };       // x_{k,n+2}

  EquationSystem sys;
  sys.n = n;
  sys.p = p;
  sys.core_commutes = ut_commutes(a, b);

  // (a) E_{1,j}: sum_{1<k<j} x_{1k} b_{kj} - y_{1k} a_{kj} = 0.
  for (std::size_t j = 3; j <= n + 1; ++j) {
    LinearEquation e{1, j, std::vector<Residue>(2 * n, 0), std::vector<Residue>(2 * n, 0)};
    for (std::size_t k = 2; k < j; ++k) {
      e.coeff_x[top(k)] = cb(k, j);
      e.coeff_y[top(k)] = p.neg(ca(k, j));
    }
    sys.group_a.push_back(std::move(e));
  }
  // (b) E_{i,n+2}: sum_{i<k<n+2} a_{ik} y_{k,n+2} - b_{ik} x_{k,n+2} = 0.
  for (std::size_t i = 2; i <= n; ++i) {
    LinearEquation e{i, n + 2, std::vector<Residue>(2 * n, 0), std::vector<Residue>(2 * n, 0)};
    for (std::size_t k = i + 1; k <= n + 1; ++k) {
      e.coeff_y[right(k)] = ca(i, k);
      e.coeff_x[right(k)] = p.neg(cb(i, k));
    }
    sys.group_b.push_back(std::move(e));
  }
  // (c) E_{1,n+2}: sum_k x_{1k} y_{k,n+2} - y_{1k} x_{k,n+2} = 0.
  const std::size_t dim = 2 * n;
  sys.heisenberg.assign(dim * dim, 0);
  for (std::size_t k = 2; k <= n + 1; ++k) {
    sys.heisenberg[top(k) * dim + right(k)] = 1 % p.value();
    sys.heisenberg[right(k) * dim + top(k)] = p.neg(1 % p.value());
  }
  return sys;
}

HeisElem reduced_shell(const UtMatrix& x, const std::set<std::size_t>& symmetrized) {
  const std::size_t big = x.n();
  const std::size_t n = big - 2;
  std::vector<std::int64_t> top, right;
  for (std::size_t k = 2; k <= n + 1; ++k) {
    if (symmetrized.count(k)) continue;
    top.push_back(x.at(1, k));
    right.push_back(x.at(k, big));
  }
  const auto p = x.modulus();
  return HeisElem(FpVec(top, p), FpVec(right, p), x.at(1, big), p);
}

CliqueLift clique_lift(std::span<const UtMatrix> clique, bool verify, std::uint64_t cap) {
  if (clique.empty()) throw PreconditionError("clique must be nonempty");
  for (std::size_t i = 0; i < clique.size(); ++i) {
    require_compatible(clique[0], clique[i]);
    for (std::size_t j = i + 1; j < clique.size(); ++j) {
      if (!ut_commutes(clique[i], clique[j])) {
        throw PreconditionError("A_" + std::to_string(i + 1) + " and A_" + std::to_string(j + 1) +
                                " do not commute");
      }
    }
  }
  const std::size_t n = clique[0].n();
  const auto p = clique[0].modulus();

  CliqueLift out;
  for (const auto& a : clique) {
    const auto sym = symmetrize(sigma_tau(a));
    out.symmetrized.insert(sym.begin(), sym.end());
  }
  out.m = n - out.symmetrized.size();

  const HeisenbergGroup target(out.m, p);
  const std::uint64_t part_size = power_or_cap(p.value(), 2 * out.m + 1, cap, "clique lift part");
  for (const auto& a : clique) {
    std::vector<UtMatrix> part;
    part.reserve(part_size);
    for (std::uint64_t idx = 0; idx < part_size; ++idx) {
      // Place the H_{2m+1} element on the free shell coordinates.
      const HeisElem h = target.element(idx);
      FpVec top(n), right(n);
      std::size_t f = 0;
      for (std::size_t k = 2; k <= n + 1; ++k) {
        if (out.symmetrized.count(k)) continue;
        top[k - 2] = h.x[f];
        right[k - 2] = h.y[f];
        ++f;
      }
      part.push_back(assemble(a, HeisElem(std::move(top), std::move(right), h.z, p)));
    }
    out.parts.push_back(std::move(part));
  }
  if (!verify) return out;

  out.bijective = true;
  std::vector<const UtMatrix*> all;
  std::vector<HeisElem> images;
  for (const auto& part : out.parts) {
    std::vector<bool> hit(part_size, false);
    for (const auto& x : part) {
      if (u_map(x) != u_map(part.front())) out.bijective = false;
      for (auto k : out.symmetrized) {
        if (x.at(1, k) != 0 || x.at(k, n + 2) != 0) out.bijective = false;
      }
      const auto idx = target.index_of(reduced_shell(x, out.symmetrized));
      if (hit[idx]) out.bijective = false;
      hit[idx] = true;
      all.push_back(&x);
      images.push_back(reduced_shell(x, out.symmetrized));
    }
  }

  out.isomorphic = true;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i; j < all.size(); ++j) {
      ++out.pairs_checked;
      if (ut_commutes(*all[i], *all[j]) != h_commutes(images[i], images[j])) out.isomorphic = false;
    }
  }
  return out;
}

std::string to_string(BlockLabel label) {
  switch (label) {
    case BlockLabel::full_heisenberg:
      return "full_heisenberg";
    case BlockLabel::empty:
      return "empty";
    case BlockLabel::shifted_heisenberg:
      return "shifted_heisenberg";
  }
  return "unknown";
}

namespace {

// Shell vector (pinned order) with the symmetrized coordinates set from
// `fixed` (top row values then last-column values, both in index order) and
// everything else zero.
std::vector<Residue> fixed_shell(std::size_t n, const std::vector<std::size_t>& sym,
                                 std::span<const Residue> fixed) {
  std::vector<Residue> vars(2 * n, 0);
  for (std::size_t s = 0; s < sym.size(); ++s) {
    vars[sym[s] - 2] = fixed[s];
    vars[n + sym[s] - 2] = fixed[sym.size() + s];
  }
  return vars;
}

std::vector<Residue> digits_of(std::uint64_t index, std::size_t count, std::uint32_t p) {
  std::vector<Residue> d(count);
  for (std::size_t i = count; i-- > 0;) {
    d[i] = static_cast<Residue>(index % p);
    index /= p;
  }
  return d;
}

// Matrices of one block: core A, symmetrized shell values fixed, the rest free.
std::vector<UtMatrix> block_members(const UtMatrix& core, const std::vector<std::size_t>& sym,
                                    std::span<const Residue> fixed, std::size_t m) {
  const std::size_t n = core.n();
  const auto p = core.modulus();
  const HeisenbergGroup free_group(m, p);
  std::vector<UtMatrix> out;
  const std::uint64_t size = free_group.order();
  out.reserve(size);
  const auto base = fixed_shell(n, sym, fixed);
  for (std::uint64_t idx = 0; idx < size; ++idx) {
    const HeisElem h = free_group.element(idx);
    FpVec top(n), right(n);
    for (std::size_t k = 0; k < n; ++k) {
      top[k] = base[k];
      right[k] = base[n + k];
    }
    std::size_t f = 0;
    for (std::size_t k = 2; k <= n + 1; ++k) {
      if (std::find(sym.begin(), sym.end(), k) != sym.end()) continue;
      top[k - 2] = h.x[f];
      right[k - 2] = h.y[f];
      ++f;
    }
    out.push_back(assemble(core, HeisElem(std::move(top), std::move(right), h.z, p)));
  }
  return out;
}

}  // namespace

Equipartition equipartition(const UtMatrix& a, const UtMatrix& b, bool verify, std::uint64_t cap) {
  require_compatible(a, b);
  const std::size_t n = a.n();
  const auto p = a.modulus();

  Equipartition out;
  for (const auto* mat : {&a, &b}) {
    const auto sym = symmetrize(sigma_tau(*mat));
    out.symmetrized.insert(sym.begin(), sym.end());
  }
  const std::vector<std::size_t> sym(out.symmetrized.begin(), out.symmetrized.end());
  out.m = n - sym.size();
  out.block_count = power_or_cap(p.value(), 2 * sym.size(), cap, "equipartition block count");
  out.block_size = power_or_cap(p.value(), 2 * out.m + 1, cap, "equipartition block");
  power_or_cap(out.block_count, 2, cap * cap, "equipartition block pairs");
  out.equal_sizes = out.block_count * out.block_size == fiber_size(a);

  const auto sys = equation_system(a, b);
  const std::set<std::size_t>& symset = out.symmetrized;

  std::vector<std::vector<UtMatrix>> x_blocks, y_blocks;
  if (verify) {
    for (std::uint64_t i = 0; i < out.block_count; ++i) {
      const auto fixed = digits_of(i, 2 * sym.size(), p.value());
      x_blocks.push_back(block_members(a, sym, fixed, out.m));
      y_blocks.push_back(block_members(b, sym, fixed, out.m));
    }
  }

  out.all_verified = true;
  for (std::uint64_t i = 0; i < out.block_count; ++i) {
    const auto xs = fixed_shell(n, sym, digits_of(i, 2 * sym.size(), p.value()));
    for (std::uint64_t j = 0; j < out.block_count; ++j) {
      const auto ys = fixed_shell(n, sym, digits_of(j, 2 * sym.size(), p.value()));
      BlockPairResult r{i, j, BlockLabel::empty, 0, false};
      if (sys.core_commutes && sys.linear_satisfied(xs, ys)) {
        // Only symmetrized coordinates are set, so this is the constant
        // part of the corner equation.
        r.shift = sys.heisenberg_value(xs, ys);
        r.predicted = r.shift == 0 ? BlockLabel::full_heisenberg : BlockLabel::shifted_heisenberg;
      }
      switch (r.predicted) {
        case BlockLabel::full_heisenberg:
          ++out.full_count;
          break;
        case BlockLabel::empty:
          ++out.empty_count;
          break;
        case BlockLabel::shifted_heisenberg:
          ++out.shifted_count;
          break;
      }
      if (verify) {
        r.verified = true;
        const auto& xb = x_blocks[i];
        const auto& yb = y_blocks[j];
        std::vector<HeisElem> xr, yr;
        for (const auto& x : xb) xr.push_back(reduced_shell(x, symset));
        for (const auto& y : yb) yr.push_back(reduced_shell(y, symset));
        for (std::size_t s = 0; s < xb.size() && r.verified; ++s) {
          for (std::size_t t = 0; t < yb.size(); ++t) {
            const bool edge = ut_commutes(xb[s], yb[t]);
            bool expected = false;
            if (r.predicted != BlockLabel::empty) {
              const Residue w = symplectic(xr[s].x, xr[s].y, yr[t].x, yr[t].y, p);
              expected = p.add(w, r.shift) == 0;
            }
            if (edge != expected) {
              r.verified = false;
              break;
            }
          }
        }
        if (!r.verified) out.all_verified = false;
      }
      out.pairs.push_back(r);
    }
  }
  if (!verify) out.all_verified = false;
  return out;
}

CensusRecord conjugacy_census(std::size_t n, PrimeModulus p, std::uint64_t cap) {
  const UnitriangularGroup group(n, p);
  group.require_enumerable(cap);
  CensusRecord r;
  r.n = n;
  r.p = p.value();
  r.order = group.order();
  r.classes = oracle::count_conjugacy_classes(group, cap);
  r.commuting_pairs = BigInt(std::to_string(r.order)) * BigInt(std::to_string(r.classes));
  if (r.order <= kDirectPairBudget) {
    const auto direct = oracle::count_commuting_pairs(group, cap);
    r.pairs_direct = BigInt(std::to_string(direct)) == r.commuting_pairs;
  }
  r.probability = make_rational(BigInt(std::to_string(r.classes)), BigInt(std::to_string(r.order)));
  r.log_p_classes = std::log(static_cast<double>(r.classes)) / std::log(static_cast<double>(p.value()));
  r.higman_exponent = static_cast<double>(n * n) / 12.0;
  r.soffer_exponent = 7.0 * static_cast<double>(n * n) / 44.0;
  return r;
}

AndreReport andre_class_check(std::size_t n, PrimeModulus p, std::size_t k, std::size_t l,
                              std::uint64_t cap) {
  const std::size_t big = n + 2;
  if (k <= 1 || l <= 1 || k >= big || l >= big) {
    throw DomainError("need 1 < k, l < n + 2");
  }
  const UnitriangularGroup ambient(big, p);
  ambient.require_enumerable(cap);
  const HeisenbergGroup shell(n, p);

  auto in_c = [&](const UtMatrix& a) {
    if (a.at(1, l) == 0) return false;
    for (std::size_t i = 2; i < l; ++i) {
      if (a.at(1, i) != 0) return false;
    }
    if (a.at(k, big) == 0) return false;
    for (std::size_t j = k + 1; j < big; ++j) {
      if (a.at(j, big) != 0) return false;
    }
    return true;
  };

  std::vector<std::uint64_t> members, unit_members;
  for (std::uint64_t idx = 0; idx < shell.order(); ++idx) {
    const UtMatrix a = heisenberg_matrix(shell.element(idx));
    if (!in_c(a)) continue;
    members.push_back(ambient.index_of(a));
    if (a.at(1, l) == 1 && a.at(k, big) == 1) unit_members.push_back(members.back());
  }
  if (members.empty()) throw DomainError("the set C is empty for these parameters");
  std::sort(members.begin(), members.end());
  std::sort(unit_members.begin(), unit_members.end());

  AndreReport r;
  r.set_size = members.size();
  const auto orbit = oracle::conjugacy_orbit(ambient, ambient.element(members.front()), cap);
  r.orbit_size = orbit.size();
  r.is_single_class = orbit == members;
  r.unit_set_size = unit_members.size();
  r.unit_is_single_class =
      oracle::conjugacy_orbit(ambient, ambient.element(unit_members.front()), cap) == unit_members;
  return r;
}

SemidirectReport semidirect_check(std::size_t n, PrimeModulus p, std::uint64_t cap) {
  const std::size_t big = n + 2;
  const UnitriangularGroup ambient(big, p);
  ambient.require_enumerable(cap);
  const UnitriangularGroup quotient(n, p);

  std::vector<UtMatrix> shell, complement;
  for (std::uint64_t idx = 0; idx < ambient.order(); ++idx) {
    UtMatrix x = ambient.element(idx);
    if (u_map(x).is_identity()) shell.push_back(x);
    bool frame_zero = true;
    for (std::size_t j = 2; j <= big; ++j) frame_zero = frame_zero && x.at(1, j) == 0;
    for (std::size_t i = 2; i < big; ++i) frame_zero = frame_zero && x.at(i, big) == 0;
    if (frame_zero) complement.push_back(std::move(x));
  }

  SemidirectReport r;
  // u on the complement: a bijective homomorphism onto U_n.
  r.complement_isomorphic = complement.size() == quotient.order();
  std::vector<bool> image(quotient.order(), false);
  for (const auto& c : complement) {
    const auto idx = quotient.index_of(u_map(c));
    if (image[idx]) r.complement_isomorphic = false;
    image[idx] = true;
  }
  std::unordered_set<std::uint64_t> complement_idx;
  for (const auto& c : complement) complement_idx.insert(ambient.index_of(c));
  for (std::size_t i = 0; i < complement.size() && r.complement_isomorphic; ++i) {
    for (std::size_t j = 0; j < complement.size(); ++j) {
      const UtMatrix prod = ut_mul(complement[i], complement[j]);
      if (!complement_idx.count(ambient.index_of(prod)) ||
          u_map(prod) != ut_mul(u_map(complement[i]), u_map(complement[j]))) {
        r.complement_isomorphic = false;
        break;
      }
    }
  }

  std::size_t common = 0;
  for (const auto& s : shell) {
    if (complement_idx.count(ambient.index_of(s))) ++common;
  }
  r.trivial_intersection = common == 1 && complement_idx.count(ambient.index_of(ambient.identity()));

  std::vector<bool> covered(ambient.order(), false);
  std::uint64_t distinct = 0;
  for (const auto& s : shell) {
    for (const auto& c : complement) {
      const auto idx = ambient.index_of(ut_mul(s, c));
      if (!covered[idx]) {
        covered[idx] = true;
        ++distinct;
      }
    }
  }
  r.covers = shell.size() * complement.size() == ambient.order() && distinct == ambient.order();
  return r;
}

}  // namespace heisenlab
