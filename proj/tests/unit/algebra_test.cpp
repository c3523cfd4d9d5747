#include <cstdint>
#include <random>
#include <vector>

#include "gtest/gtest.h"

#include "jpit/errors.hpp"
#include "jpit/field.hpp"
#include "jpit/linalg.hpp"
#include "jpit/poly.hpp"
#include "jpit/rng.hpp"

namespace jpit {
namespace {

bool trial_division_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

SparsePoly x(const PrimeField& f, std::size_t n, std::size_t i) {
  return SparsePoly::variable(f, n, i);
}

SparsePoly random_poly(const PrimeField& f, std::size_t n, Rng& rng,
                       int max_terms, int max_exp) {
  std::vector<Term> terms;
  int count = static_cast<int>(rng.range(0, max_terms));
  for (int t = 0; t < count; ++t) {
    std::vector<std::uint32_t> e(n);
    for (auto& v : e) v = static_cast<std::uint32_t>(rng.range(0, max_exp));
    terms.push_back({Monomial(e), rng.field_value(f)});
  }
  return SparsePoly::from_terms(f, n, std::move(terms));
}

bool normalized(const SparsePoly& p) {
  for (std::size_t i = 0; i < p.terms().size(); ++i) {
    if (p.terms()[i].coeff == 0) return false;
    if (i > 0 && !graded_before(p.terms()[i - 1].monomial,
                                p.terms()[i].monomial)) {
      return false;
    }
  }
  return true;
}

TEST(Field, PrimalityAgreesWithTrialDivision) {
  for (std::uint64_t n = 0; n < 20000; ++n) {
    ASSERT_EQ(is_prime(n), trial_division_prime(n)) << n;
  }
  EXPECT_TRUE(is_prime((1ULL << 61) - 1));
  EXPECT_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to 2,3,5,7
}

TEST(Field, SelectPrimeExamples) {
  EXPECT_EQ(select_prime(5, false).modulus(), 7u);
  EXPECT_EQ(select_prime(81, false).modulus(), 83u);
  auto big = select_prime(1);
  EXPECT_GE(big.modulus(), 1ULL << 50);
  EXPECT_TRUE(trial_division_prime(select_prime(1000, false).modulus()));
  EXPECT_EQ(select_prime(1000, false).modulus(), 1009u);
}

TEST(Field, SelectPrimeExceedsBound) {
  std::mt19937_64 gen(11);
  for (int i = 0; i < 200; ++i) {
    std::uint64_t b = 2 + gen() % 1000000;
    auto f = select_prime(b, false);
    EXPECT_GT(f.modulus(), b);
    for (std::uint64_t q = b + 1; q < f.modulus(); ++q) {
      EXPECT_FALSE(trial_division_prime(q));
    }
  }
  auto f = select_prime((1ULL << 55) + 3);
  EXPECT_GT(f.modulus(), (1ULL << 55) + 3);
}

TEST(Field, RejectsComposite) {
  EXPECT_THROW(PrimeField(15), PreconditionError);
  EXPECT_THROW(PrimeField(1), PreconditionError);
}

TEST(Field, ArithmeticMatchesWideReference) {
  PrimeField f = select_prime(1ULL << 61);
  const unsigned __int128 p = f.modulus();
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    std::uint64_t a = rng.field_value(f), b = rng.field_value(f);
    EXPECT_EQ(f.mul(a, b), static_cast<std::uint64_t>(
                               static_cast<unsigned __int128>(a) * b % p));
    EXPECT_EQ(f.add(a, b), static_cast<std::uint64_t>((a + static_cast<unsigned __int128>(b)) % p));
    if (b != 0) {
      EXPECT_EQ(f.mul(b, f.inv(b)), 1u);
    }
  }
}

TEST(Field, ElementsFromDifferentFieldsDoNotMix) {
  PrimeField a(7), b(11);
  FieldElement u(a, 3), v(b, 3);
  EXPECT_THROW(u + v, FieldMismatch);
  EXPECT_EQ((FieldElement(a, 3) * FieldElement(a, 5)).value(), 1u);
  EXPECT_EQ(FieldElement(a, 10).value(), 3u);
}

TEST(Poly, MulExamples) {
  PrimeField f(1000003);
  auto x1 = x(f, 2, 0), x2 = x(f, 2, 1);
  EXPECT_EQ((x1 + x2) * (x1 - x2), x1 * x1 - x2 * x2);
  EXPECT_TRUE(((x1 + x2) * SparsePoly(f, 2)).is_zero());
  auto p = (x1 * x2) * (x1 + x2);
  EXPECT_EQ(p.sparsity(), 2u);
  EXPECT_EQ(p, x1 * x1 * x2 + x1 * x2 * x2);
  EXPECT_EQ(p.to_string(), "x1^2*x2 + x1*x2^2");
}

TEST(Poly, EvalExamples) {
  PrimeField f(1000003);
  auto p = x(f, 3, 0) * x(f, 3, 1) - x(f, 3, 2);
  std::vector<std::uint64_t> a{2, 3, 6}, b{2, 3, 5};
  EXPECT_EQ(p.evaluate(a), 0u);
  EXPECT_EQ(p.evaluate(b), 1u);
  EXPECT_EQ(SparsePoly(f, 3).evaluate(a), 0u);
  std::vector<FieldElement> fe{FieldElement(f, 2), FieldElement(f, 3),
                               FieldElement(f, 5)};
  EXPECT_EQ(poly_eval(p, fe).value(), 1u);
  EXPECT_THROW(p.evaluate(std::vector<std::uint64_t>{1, 2}), ArityError);
}

TEST(Poly, PartialExamples) {
  PrimeField f(1000003);
  auto x1 = x(f, 3, 0), x2 = x(f, 3, 1), x3 = x(f, 3, 2);
  EXPECT_EQ(poly_partial(x1 * x1 * x3 + x2, 0), (x1 * x3).scale(2));
  EXPECT_TRUE(poly_partial(x1.pow(3), 1).is_zero());
  EXPECT_EQ(poly_partial(x1 * x2 - x3, 0), x2);
  EXPECT_THROW(x1.partial(3), ArityError);
}

TEST(Poly, MismatchedOperandsThrow) {
  PrimeField f(101), g(103);
  EXPECT_THROW(x(f, 2, 0) * x(g, 2, 0), FieldMismatch);
  EXPECT_THROW(x(f, 2, 0) + x(f, 3, 0), ArityError);
}

TEST(Poly, ProductEvaluatesToProductOfValues) {
  PrimeField f = select_prime(1);
  Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    auto a = random_poly(f, 3, rng, 6, 3), b = random_poly(f, 3, rng, 6, 3);
    auto ab = poly_mul(a, b);
    EXPECT_TRUE(normalized(ab));
    EXPECT_LE(ab.sparsity(), a.sparsity() * b.sparsity());
    for (int i = 0; i < 100; ++i) {
      auto pt = rng.field_point(f, 3);
      EXPECT_EQ(ab.evaluate(pt), f.mul(a.evaluate(pt), b.evaluate(pt)));
    }
  }
}

TEST(Poly, LeibnizRule) {
  PrimeField f = select_prime(1);
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_poly(f, 3, rng, 5, 3), b = random_poly(f, 3, rng, 5, 3);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_EQ((a * b).partial(i), a.partial(i) * b + a * b.partial(i));
    }
  }
}

TEST(Poly, NormalizationAfterCancellation) {
  PrimeField f(7);
  auto x1 = x(f, 1, 0);
  auto p = x1.scale(3) + x1.scale(4);  // 7 x1 = 0 mod 7
  EXPECT_TRUE(p.is_zero());
  EXPECT_TRUE(x1.pow(7).partial(0).is_zero());
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    auto a = random_poly(f, 2, rng, 8, 2), b = random_poly(f, 2, rng, 8, 2);
    EXPECT_TRUE(normalized(a + b));
    EXPECT_TRUE(normalized(a - b));
    EXPECT_TRUE(normalized(a * b));
    EXPECT_TRUE(normalized(a.partial(0)));
    EXPECT_TRUE(normalized(a.scale(0)));
  }
}

TEST(Poly, SparsityCap) {
  PrimeField f(1000003);
  auto s = x(f, 3, 0) + x(f, 3, 1) + x(f, 3, 2);
  EXPECT_THROW(s.pow(4, 10), CapExceeded);
  EXPECT_EQ(s.pow(2).sparsity(), 6u);
}

TEST(Poly, SubstituteMatchesEvaluation) {
  PrimeField f = select_prime(1);
  Rng rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = random_poly(f, 3, rng, 5, 3);
    std::vector<SparsePoly> imgs;
    for (int i = 0; i < 3; ++i) imgs.push_back(random_poly(f, 2, rng, 3, 2));
    auto q = p.substitute(imgs);
    for (int i = 0; i < 10; ++i) {
      auto pt = rng.field_point(f, 2);
      std::vector<std::uint64_t> inner;
      for (auto& im : imgs) inner.push_back(im.evaluate(pt));
      EXPECT_EQ(q.evaluate(pt), p.evaluate(inner));
    }
  }
}

TEST(Linalg, RankAndDeterminant) {
  PrimeField f(101);
  Matrix m{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
  EXPECT_EQ(matrix_rank(f, m), 2u);
  EXPECT_EQ(determinant(f, m), 0u);
  Matrix id{{0, 1}, {1, 0}};
  EXPECT_EQ(determinant(f, id), 100u);
  EXPECT_EQ(greedy_row_basis(f, m), (std::vector<std::size_t>{0, 2}));
}

TEST(Rng, SplitIsStable) {
  Rng a(42);
  Rng child1 = a.split(3);
  a.next();
  Rng child2 = a.split(3);
  EXPECT_EQ(child1.next(), child2.next());
  EXPECT_NE(Rng(42).split(0).next(), Rng(42).split(1).next());
}

}  // namespace
}  // namespace jpit
