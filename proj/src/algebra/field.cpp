#include "jpit/field.hpp"

#include <array>

#include "jpit/errors.hpp"

namespace jpit {
namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod_wide(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod_wide(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e > 0) {
    if (e & 1) r = mulmod_wide(r, b, m);
    b = mulmod_wide(b, b, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  constexpr std::array<std::uint64_t, 12> kBases = {2,  3,  5,  7,  11, 13,
                                                    17, 19, 23, 29, 31, 37};
  for (std::uint64_t q : kBases) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These twelve bases are a deterministic witness set below 3.3 * 10^24.
  for (std::uint64_t a : kBases) {
    std::uint64_t x = powmod_wide(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_wide(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint64_t modulus)
    : p_(modulus), inv_(1.0L / static_cast<long double>(modulus)) {
  if (modulus < 2 || modulus >= kMaxModulus || !is_prime(modulus)) {
    throw PreconditionError("field modulus " + std::to_string(modulus) +
                            " must be a prime below 2^62");
  }
}

std::uint64_t PrimeField::pow(std::uint64_t base, std::uint64_t exp) const {
  std::uint64_t r = 1;
  while (exp > 0) {
    if (exp & 1) r = mul(r, base);
    base = mul(base, base);
    exp >>= 1;
  }
  return r;
}

std::uint64_t PrimeField::inv(std::uint64_t a) const {
  if (a % p_ == 0) throw PreconditionError("inverse of zero");
  return pow(a, p_ - 2);
}

std::uint64_t PrimeField::from_int(std::int64_t v) const {
  if (v >= 0) return static_cast<std::uint64_t>(v) % p_;
  // Negate in unsigned arithmetic so INT64_MIN is handled.
  std::uint64_t mag = static_cast<std::uint64_t>(-(v + 1)) + 1;
  return neg(mag % p_);
}

FieldElement PrimeField::element(std::uint64_t v) const {
  return FieldElement(*this, v);
}

FieldElement PrimeField::element_signed(std::int64_t v) const {
  return FieldElement(*this, from_int(v));
}

PrimeField select_prime(std::uint64_t lower_bound, bool apply_floor) {
  std::uint64_t start = lower_bound;
  if (apply_floor && start < kDefaultPrimeFloor) start = kDefaultPrimeFloor;
  if (start >= kMaxModulus - 1) {
    throw CapExceeded("prime lower bound", std::to_string(lower_bound));
  }
  for (std::uint64_t c = start + 1;; ++c) {
    if (is_prime(c)) return PrimeField(c);
  }
}

void FieldElement::check_same(const FieldElement& o) const {
  if (field_ != o.field_) {
    throw FieldMismatch("field elements over F_" +
                        std::to_string(field_.modulus()) + " and F_" +
                        std::to_string(o.field_.modulus()));
  }
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  check_same(o);
  return {field_, field_.add(value_, o.value_)};
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  check_same(o);
  return {field_, field_.sub(value_, o.value_)};
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  check_same(o);
  return {field_, field_.mul(value_, o.value_)};
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
  check_same(o);
  return {field_, field_.mul(value_, field_.inv(o.value_))};
}

FieldElement FieldElement::operator-() const {
  return {field_, field_.neg(value_)};
}

FieldElement FieldElement::pow(std::uint64_t e) const {
  return {field_, field_.pow(value_, e)};
}

FieldElement FieldElement::inverse() const {
  return {field_, field_.inv(value_)};
}

}  // namespace jpit
