#include <vector>

#include "gtest/gtest.h"

#include "jpit/errors.hpp"
#include "jpit/oracle.hpp"
#include "random_instances.hpp"

namespace jpit {
namespace {

using testing::random_circuit;
using testing::var;

const PrimeField& big() {
  static const PrimeField f = select_prime(1);
  return f;
}

TEST(Expand, Examples) {
  const auto& f = big();
  auto x1 = var(f, 2, 0), x2 = var(f, 2, 1);
  EXPECT_EQ(expand(parse_circuit("(vars 2) (pow (+ x1 x2) 2)", f)),
            x1 * x1 + (x1 * x2).scale(2) + x2 * x2);
  Circuit t = parse_circuit("(vars 2) (* (leaf \"x1 + x2\") (leaf \"x1 - 3\"))", f);
  EXPECT_TRUE(expand(circuit_sub(t, t)).is_zero());
  Circuit sq = parse_circuit(
      "(vars 4) (pow (leaf \"x1^3*x2 + x1^2*x3^2 + x1*x4\") 2)", f);
  EXPECT_EQ(expand(sq).sparsity(), 6u);
}

TEST(Expand, CapNamesGate) {
  const auto& f = big();
  Circuit c = parse_circuit("(vars 4) (pow (+ x1 x2 x3 x4) 6)", f);
  try {
    expand(c, 50);
    FAIL();
  } catch (const CapExceeded& e) {
    EXPECT_NE(std::string(e.what()).find("gate"), std::string::npos);
  }
  EXPECT_EQ(expand(c).sparsity(), 84u);
}

TEST(ExactZero, Examples) {
  const auto& f = big();
  auto v = exact_zero_test(parse_circuit("(vars 2) (+ (* x1 x2) (* -1 x2 x1))", f));
  EXPECT_TRUE(v.is_zero());
  auto w = exact_zero_test(parse_circuit("(vars 2) x1", f));
  EXPECT_FALSE(w.is_zero());
  ASSERT_TRUE(w.witness_monomial.has_value());
  EXPECT_EQ(w.witness_monomial->exponents(), (std::vector<std::uint32_t>{1, 0}));
}

// d/dx1 of l1*l2 written with the product rule versus expanded directly.
TEST(ExactZero, ProductRuleIdentity) {
  const auto& f = big();
  Circuit lhs = parse_circuit(
      "(vars 2) (+ (* (leaf \"1\") (leaf \"x1 - x2\")) (* (leaf \"x1 + x2\") (leaf \"1\")))", f);
  Circuit rhs = parse_circuit("(vars 2) (leaf \"2*x1\")", f);
  EXPECT_TRUE(exact_zero_test(circuit_sub(lhs, rhs)).is_zero());
}

TEST(SzRandom, Examples) {
  const auto& f = big();
  Rng rng(1);
  auto seven = sz_random_test(parse_circuit("(vars 1) 7", f), rng, 1);
  EXPECT_FALSE(seven.is_zero());
  EXPECT_EQ(seven.trials, 1u);
  auto zero = sz_random_test(parse_circuit("(vars 2) (+ x1 (* -1 x1))", f), rng, 5);
  EXPECT_TRUE(zero.is_zero());
  EXPECT_LT(zero.error_bound, 1e-60);
  Rng fixed(2024);
  auto diff = sz_random_test(parse_circuit("(vars 2) (+ x1 (* -1 x2))", f), fixed, 3);
  EXPECT_FALSE(diff.is_zero());
  EXPECT_EQ(diff.seed, 2024u);
}

TEST(SzRandom, NeverContradictsExactOnCorpus) {
  const auto& f = big();
  Rng gen(8);
  for (int i = 0; i < 80; ++i) {
    Circuit c = random_circuit(f, 3, gen, 8);
    if (i % 4 == 0) c = circuit_sub(c, c);
    Rng rng(static_cast<std::uint64_t>(i));
    bool exact_zero = exact_zero_test(c).is_zero();
    EXPECT_EQ(sz_random_test(c, rng, 3).is_zero(), exact_zero);
  }
}

TEST(Annihilator, Examples) {
  const auto& f = big();
  auto x1 = var(f, 2, 0), x2 = var(f, 2, 1);
  EXPECT_EQ(annihilator_trdeg({x1, x1 * x1}, 2), 1u);
  EXPECT_EQ(annihilator_trdeg({x1, x2}, 1), 2u);
  EXPECT_EQ(annihilator_trdeg({x1, x2}, 4), 2u);
  EXPECT_EQ(annihilator_trdeg({x1 * x2, x1 + x2, x1 * x1 * x2 + x1 * x2 * x2}, 2), 2u);
  EXPECT_EQ(annihilator_trdeg({SparsePoly(f, 2), x1}), 1u);
  EXPECT_EQ(annihilator_trdeg({SparsePoly::constant(f, 2, 4)}), 0u);
}

TEST(Annihilator, LowCapMissesHighDegreeRelation) {
  const auto& f = big();
  auto x1 = var(f, 1, 0);
  // y2 - y1^3 needs degree 3.
  EXPECT_EQ(annihilator_trdeg({x1, x1.pow(3)}, 2), 2u);
  EXPECT_EQ(annihilator_trdeg({x1, x1.pow(3)}, 3), 1u);
}

}  // namespace
}  // namespace jpit
