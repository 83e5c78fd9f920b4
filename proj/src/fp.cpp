#include "heisenlab/fp.hpp"

#include <sstream>

#include "heisenlab/errors.hpp"

namespace heisenlab {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

PrimeModulus::PrimeModulus(std::uint64_t p) : p_(static_cast<std::uint32_t>(p)) {
  if (p < 2 || p >= kMaxExclusive) {
    throw DomainError("modulus " + std::to_string(p) + " outside [2, 65536)");
  }
  if (!is_prime(p)) {
    throw DomainError("modulus " + std::to_string(p) + " is not prime");
  }
}

Residue PrimeModulus::pow(Residue a, std::uint64_t e) const {
  Residue result = 1 % p_;
  Residue base = a % p_;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

FpVec::FpVec(std::initializer_list<std::int64_t> values, PrimeModulus p)
    : FpVec(std::span<const std::int64_t>(values.begin(), values.size()), p) {}

FpVec::FpVec(std::span<const std::int64_t> values, PrimeModulus p) {
  entries_.reserve(values.size());
  for (auto v : values) entries_.push_back(p.reduce(v));
}

FpVec FpVec::basis(std::size_t n, std::size_t i) {
  FpVec v(n);
  v.entries_.at(i) = 1;
  return v;
}

bool FpVec::is_zero() const {
  for (auto e : entries_) {
    if (e != 0) return false;
  }
  return true;
}

std::string to_string(const FpVec& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v[i];
  }
  os << ')';
  return os.str();
}

namespace {

void require_same_length(const FpVec& a, const FpVec& b) {
  if (a.size() != b.size()) {
    throw DimensionError("vector length mismatch: " + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()));
  }
}

}  // namespace

FpVec vec_add(const FpVec& a, const FpVec& b, PrimeModulus p) {
  require_same_length(a, b);
  FpVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = p.add(a[i], b[i]);
  return out;
}

FpVec vec_sub(const FpVec& a, const FpVec& b, PrimeModulus p) {
  require_same_length(a, b);
  FpVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = p.sub(a[i], b[i]);
  return out;
}

FpVec vec_neg(const FpVec& a, PrimeModulus p) {
  FpVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = p.neg(a[i]);
  return out;
}

FpVec vec_scale(Residue c, const FpVec& a, PrimeModulus p) {
  c %= p.value();
  FpVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = p.mul(c, a[i]);
  return out;
}

Residue vec_dot(const FpVec& a, const FpVec& b, PrimeModulus p) {
  require_same_length(a, b);
  // Each product is < 2^32, so up to 2^32 terms can be summed before reducing.
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += static_cast<std::uint64_t>(a[i]) * b[i];
    if ((i & 0xffff) == 0xffff) acc %= p.value();
  }
  return static_cast<Residue>(acc % p.value());
}

Residue symplectic(const FpVec& x, const FpVec& y, const FpVec& a,
                   const FpVec& b, PrimeModulus p) {
  require_same_length(x, y);
  require_same_length(x, a);
  require_same_length(x, b);
  return p.sub(vec_dot(x, b, p), vec_dot(y, a, p));
}

}  // namespace heisenlab
