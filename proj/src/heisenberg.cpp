#include "heisenlab/heisenberg.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_set>

#include "heisenlab/errors.hpp"

namespace heisenlab {

namespace {

void require_compatible(const HeisElem& a, const HeisElem& b) {
  if (a.p != b.p) {
    throw DimensionError("modulus mismatch: " + std::to_string(a.p.value()) + " vs " +
                         std::to_string(b.p.value()));
  }
  if (a.n() != b.n()) {
    throw DimensionError("Heisenberg rank mismatch: " + std::to_string(a.n()) + " vs " +
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

}  // namespace

HeisElem::HeisElem(FpVec x_, FpVec y_, Residue z_, PrimeModulus p_)
    : x(std::move(x_)), y(std::move(y_)), z(z_ % p_.value()), p(p_) {
  if (x.size() != y.size()) {
    throw DimensionError("x and y parts differ in length");
  }
  for (auto v : x) {
    if (v >= p.value()) throw DomainError("x entry not reduced");
  }
  for (auto v : y) {
    if (v >= p.value()) throw DomainError("y entry not reduced");
  }
}

std::string to_string(const HeisElem& a) {
  std::ostringstream os;
  os << '[' << to_string(a.x) << ',' << to_string(a.y) << ',' << a.z << ']';
  return os.str();
}

HeisElem h_identity(std::size_t n, PrimeModulus p) { return HeisElem(FpVec(n), FpVec(n), 0, p); }

HeisElem h_mul(const HeisElem& a, const HeisElem& b) {
  require_compatible(a, b);
  const auto p = a.p;
  const Residue z = p.add(p.add(a.z, b.z), vec_dot(a.x, b.y, p));
  return HeisElem(vec_add(a.x, b.x, p), vec_add(a.y, b.y, p), z, p);
}

HeisElem h_inv(const HeisElem& a) {
  const auto p = a.p;
  // [x, y, z]^-1 = [-x, -y, -z + x.y]
  const Residue z = p.add(p.neg(a.z), vec_dot(a.x, a.y, p));
  return HeisElem(vec_neg(a.x, p), vec_neg(a.y, p), z, p);
}

HeisElem h_pow(const HeisElem& a, std::uint64_t e) {
  HeisElem result = h_identity(a.n(), a.p);
  HeisElem base = a;
  while (e > 0) {
    if (e & 1) result = h_mul(result, base);
    base = h_mul(base, base);
    e >>= 1;
  }
  return result;
}

HeisElem h_commutator(const HeisElem& a, const HeisElem& b) {
  require_compatible(a, b);
  return HeisElem(FpVec(a.n()), FpVec(a.n()), symplectic(a.x, a.y, b.x, b.y, a.p), a.p);
}

bool h_commutes(const HeisElem& a, const HeisElem& b) {
  require_compatible(a, b);
  return symplectic(a.x, a.y, b.x, b.y, a.p) == 0;
}

ClassLabel ClassLabel::central(Residue z) {
  ClassLabel c;
  c.central_ = true;
  c.z_ = z;
  return c;
}

ClassLabel ClassLabel::noncentral(FpVec x, FpVec y) {
  if (x.is_zero() && y.is_zero()) {
    throw DomainError("noncentral class label with (x, y) = (0, 0)");
  }
  if (x.size() != y.size()) throw DimensionError("class label parts differ in length");
  ClassLabel c;
  c.central_ = false;
  c.x_ = std::move(x);
  c.y_ = std::move(y);
  return c;
}

std::string to_string(const ClassLabel& c) {
  if (c.is_central()) return "Z(" + std::to_string(c.z()) + ")";
  return "C" + to_string(c.x()) + to_string(c.y());
}

ClassLabel class_of(const HeisElem& a) {
  if (a.is_central()) return ClassLabel::central(a.z);
  return ClassLabel::noncentral(a.x, a.y);
}

HeisenbergGroup::HeisenbergGroup(std::size_t n, PrimeModulus p)
    : n_(n), p_(p), order_(checked_power(p.value(), 2 * n + 1)) {}

std::uint64_t HeisenbergGroup::order() const {
  if (!order_) throw SizeCapError("H_" + std::to_string(2 * n_ + 1) + " order overflows 64 bits");
  return *order_;
}

void HeisenbergGroup::require_enumerable(std::uint64_t cap) const {
  if (!order_ || *order_ > cap) {
    throw SizeCapError("H_" + std::to_string(2 * n_ + 1) + "(" + std::to_string(p_.value()) +
                       ") exceeds the enumeration cap of " + std::to_string(cap));
  }
}

HeisElem HeisenbergGroup::element(std::uint64_t index) const {
  if (index >= order()) throw DomainError("element index out of range");
  const std::uint64_t p = p_.value();
  FpVec x(n_), y(n_);
  const Residue z = static_cast<Residue>(index % p);
  index /= p;
  for (std::size_t i = n_; i-- > 0;) {
    y[i] = static_cast<Residue>(index % p);
    index /= p;
  }
  for (std::size_t i = n_; i-- > 0;) {
    x[i] = static_cast<Residue>(index % p);
    index /= p;
  }
  return HeisElem(std::move(x), std::move(y), z, p_);
}

std::uint64_t HeisenbergGroup::index_of(const HeisElem& a) const {
  check_member(a);
  order();
  const std::uint64_t p = p_.value();
  std::uint64_t index = 0;
  for (auto v : a.x) index = index * p + v;
  for (auto v : a.y) index = index * p + v;
  return index * p + a.z;
}

std::vector<HeisElem> HeisenbergGroup::enumerate(std::uint64_t cap) const {
  require_enumerable(cap);
  std::vector<HeisElem> out;
  out.reserve(*order_);
  for (std::uint64_t i = 0; i < *order_; ++i) out.push_back(element(i));
  return out;
}

std::vector<HeisElem> HeisenbergGroup::generators() const {
  std::vector<HeisElem> gens;
  for (std::size_t i = 0; i < n_; ++i) gens.emplace_back(FpVec::basis(n_, i), FpVec(n_), 0, p_);
  for (std::size_t i = 0; i < n_; ++i) gens.emplace_back(FpVec(n_), FpVec::basis(n_, i), 0, p_);
  return gens;
}

HeisElem HeisenbergGroup::center_generator() const { return HeisElem(FpVec(n_), FpVec(n_), 1, p_); }

void HeisenbergGroup::check_member(const HeisElem& a) const {
  if (a.p != p_) throw DimensionError("element modulus does not match group");
  if (a.n() != n_) throw DimensionError("element rank does not match group");
}

std::vector<HeisElem> enumerate_group(std::size_t n, PrimeModulus p, std::uint64_t cap) {
  return HeisenbergGroup(n, p).enumerate(cap);
}

namespace {

// Closure of `gens` under multiplication, starting from the identity.
std::set<HeisElem> close_under_products(const HeisenbergGroup& ambient,
                                        const std::vector<HeisElem>& gens, std::uint64_t cap) {
  std::set<HeisElem> seen{ambient.identity()};
  std::deque<HeisElem> frontier{ambient.identity()};
  while (!frontier.empty()) {
    HeisElem a = std::move(frontier.front());
    frontier.pop_front();
    for (const auto& g : gens) {
      HeisElem b = h_mul(a, g);
      if (seen.insert(b).second) {
        if (seen.size() > cap) {
          throw SizeCapError("generated subgroup exceeds the enumeration cap of " +
                             std::to_string(cap));
        }
        frontier.push_back(std::move(b));
      }
    }
  }
  return seen;
}

}  // namespace

GeneratedSubgroup subgroup_generated(const HeisenbergGroup& ambient,
                                     std::span<const HeisElem> generators, bool include_center,
                                     std::uint64_t cap) {
  std::vector<HeisElem> gens(generators.begin(), generators.end());
  for (const auto& g : gens) ambient.check_member(g);
  if (include_center) gens.push_back(ambient.center_generator());

  const std::set<HeisElem> group = close_under_products(ambient, gens, cap);

  SubgroupReport report;
  report.order = group.size();

  std::set<HeisElem> center;
  for (const auto& a : group) {
    const bool central = std::all_of(gens.begin(), gens.end(),
                                     [&](const HeisElem& g) { return h_mul(a, g) == h_mul(g, a); });
    if (central) center.insert(a);
  }
  report.center_size = center.size();

  for (std::size_t i = 0; i < gens.size() && !report.nonabelian; ++i) {
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      if (h_mul(gens[i], gens[j]) != h_mul(gens[j], gens[i])) {
        report.nonabelian = true;
        break;
      }
    }
  }

  // Derived subgroup: normal closure of the generator commutators.
  std::vector<HeisElem> derived_gens;
  for (const auto& s : gens) {
    for (const auto& t : gens) {
      derived_gens.push_back(h_mul(h_mul(h_inv(s), h_inv(t)), h_mul(s, t)));
    }
  }
  std::set<HeisElem> derived = close_under_products(ambient, derived_gens, cap);
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& d : std::vector<HeisElem>(derived.begin(), derived.end())) {
      for (const auto& g : gens) {
        HeisElem c = h_mul(h_mul(h_inv(g), d), g);
        if (!derived.count(c)) {
          derived_gens.push_back(std::move(c));
          grew = true;
        }
      }
    }
    if (grew) derived = close_under_products(ambient, derived_gens, cap);
  }
  report.derived_equals_center = derived == center;

  const auto identity = ambient.identity();
  const std::uint64_t p = ambient.modulus().value();
  report.exponent_p = std::all_of(group.begin(), group.end(),
                                  [&](const HeisElem& a) { return h_pow(a, p) == identity; });

  report.is_extraspecial = report.center_size == p && report.derived_equals_center &&
                           report.exponent_p && report.nonabelian;

  return {std::vector<HeisElem>(group.begin(), group.end()), report};
}

}  // namespace heisenlab
