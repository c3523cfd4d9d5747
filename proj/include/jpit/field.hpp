#pragma once

#include <cstdint>
#include <ostream>
#include <string>

namespace jpit {

// Largest modulus the arithmetic kernel supports. Products are reduced with a
// long-double quotient estimate, which is exact for moduli below ~2^62.9.
inline constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 62;

// Default floor for session primes: keeps Schwartz-Zippel error per trial
// below 2^-30 for the degrees that occur at desk scale.
inline constexpr std::uint64_t kDefaultPrimeFloor = std::uint64_t{1} << 50;

// Deterministic Miller-Rabin for 64-bit integers.
bool is_prime(std::uint64_t n);

class FieldElement;

// The prime field F_p. Cheap to copy; two fields are equal iff their moduli
// are.
class PrimeField {
 public:
  explicit PrimeField(std::uint64_t modulus);

  std::uint64_t modulus() const { return p_; }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
    return a >= b ? a - b : a + p_ - b;
  }
  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p_ - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    auto ret = static_cast<std::int64_t>(
        a * b - p_ * static_cast<std::uint64_t>(inv_ * a * b));
    if (ret < 0) ret += static_cast<std::int64_t>(p_);
    if (ret >= static_cast<std::int64_t>(p_)) ret -= static_cast<std::int64_t>(p_);
    return static_cast<std::uint64_t>(ret);
  }
  std::uint64_t pow(std::uint64_t base, std::uint64_t exp) const;
  // Throws PreconditionError on zero.
  std::uint64_t inv(std::uint64_t a) const;

  std::uint64_t from_int(std::int64_t v) const;
  std::uint64_t from_uint(std::uint64_t v) const { return v % p_; }
  // Symmetric representative in (-p/2, p/2], used for printing.
  std::int64_t to_signed(std::uint64_t v) const {
    return v > p_ / 2 ? -static_cast<std::int64_t>(p_ - v)
                      : static_cast<std::int64_t>(v);
  }

  FieldElement element(std::uint64_t v) const;
  FieldElement element_signed(std::int64_t v) const;

  friend bool operator==(const PrimeField& a, const PrimeField& b) {
    return a.p_ == b.p_;
  }
  friend bool operator!=(const PrimeField& a, const PrimeField& b) {
    return a.p_ != b.p_;
  }

 private:
  std::uint64_t p_;
  long double inv_;
};

// Smallest prime strictly above max(lower_bound, floor). With
// `apply_floor == false` the 2^50 floor is skipped (tiny worked examples).
PrimeField select_prime(std::uint64_t lower_bound, bool apply_floor = true);

// A reduced residue tagged with its field. Arithmetic between elements of
// different fields throws FieldMismatch.
class FieldElement {
 public:
  FieldElement(const PrimeField& field, std::uint64_t value)
      : field_(field), value_(value % field.modulus()) {}

  std::uint64_t value() const { return value_; }
  const PrimeField& field() const { return field_; }
  bool is_zero() const { return value_ == 0; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement pow(std::uint64_t e) const;
  FieldElement inverse() const;

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.field_ == b.field_ && a.value_ == b.value_;
  }
  friend bool operator!=(const FieldElement& a, const FieldElement& b) {
    return !(a == b);
  }
  friend std::ostream& operator<<(std::ostream& os, const FieldElement& e) {
    return os << e.value_;
  }

 private:
  void check_same(const FieldElement& o) const;

  PrimeField field_;
  std::uint64_t value_;
};

}  // namespace jpit
