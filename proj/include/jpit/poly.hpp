#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "jpit/field.hpp"

namespace jpit {

inline constexpr std::size_t kNoSparsityCap =
    std::numeric_limits<std::size_t>::max();

// Dense exponent vector over the ambient variable set.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}
  explicit Monomial(std::vector<std::uint32_t> exps);

  std::size_t nvars() const { return exps_.size(); }
  std::uint32_t operator[](std::size_t i) const { return exps_[i]; }
  const std::vector<std::uint32_t>& exponents() const { return exps_; }
  std::uint64_t total_degree() const { return degree_; }

  Monomial operator*(const Monomial& o) const;

  // Graded order: higher total degree first, then lexicographically larger
  // exponent vectors first. Terms of a SparsePoly are kept in this order.
  friend bool graded_before(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.exps_ == b.exps_;
  }

  std::size_t hash() const;

 private:
  std::vector<std::uint32_t> exps_;
  std::uint64_t degree_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

struct Term {
  Monomial monomial;
  std::uint64_t coeff;
};

// Exact sparse multivariate polynomial over a prime field. Terms are unique,
// nonzero and kept in graded order; the zero polynomial has no terms.
class SparsePoly {
 public:
  SparsePoly(const PrimeField& field, std::size_t nvars)
      : field_(field), nvars_(nvars) {}

  static SparsePoly constant(const PrimeField& field, std::size_t nvars,
                             std::uint64_t value);
  static SparsePoly variable(const PrimeField& field, std::size_t nvars,
                             std::size_t var);
  // Combines duplicate monomials and drops zero coefficients.
  static SparsePoly from_terms(const PrimeField& field, std::size_t nvars,
                               std::vector<Term> terms);

  const PrimeField& field() const { return field_; }
  std::size_t nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t sparsity() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  std::uint64_t constant_term() const;
  std::uint64_t total_degree() const;
  std::uint64_t degree_in(std::size_t var) const;
  bool depends_on(std::size_t var) const { return degree_in(var) > 0; }
  std::uint64_t coefficient(const Monomial& m) const;

  SparsePoly operator+(const SparsePoly& o) const;
  SparsePoly operator-(const SparsePoly& o) const;
  SparsePoly operator-() const;
  SparsePoly operator*(const SparsePoly& o) const { return mul(o); }
  SparsePoly scale(std::uint64_t c) const;

  SparsePoly mul(const SparsePoly& o, std::size_t cap = kNoSparsityCap) const;
  SparsePoly pow(std::uint64_t e, std::size_t cap = kNoSparsityCap) const;
  SparsePoly partial(std::size_t var) const;

  std::uint64_t evaluate(std::span<const std::uint64_t> point) const;
  FieldElement evaluate(const std::vector<FieldElement>& point) const;

  // Replaces x_i by images[i]; all images share one target variable set.
  SparsePoly substitute(std::span<const SparsePoly> images,
                        std::size_t cap = kNoSparsityCap) const;
  // Re-embeds into a larger variable set; new variables are appended.
  SparsePoly extend(std::size_t new_nvars, std::size_t offset = 0) const;

  // Text form `c*x1^e1*x2^e2 + ...`, variables 1-based.
  std::string to_string() const;

  friend bool operator==(const SparsePoly& a, const SparsePoly& b);
  friend bool operator!=(const SparsePoly& a, const SparsePoly& b) {
    return !(a == b);
  }

 private:
  void check_compatible(const SparsePoly& o) const;

  PrimeField field_;
  std::size_t nvars_;
  std::vector<Term> terms_;
};

SparsePoly poly_mul(const SparsePoly& a, const SparsePoly& b);
FieldElement poly_eval(const SparsePoly& p,
                       const std::vector<FieldElement>& point);
SparsePoly poly_partial(const SparsePoly& p, std::size_t var);

}  // namespace jpit
