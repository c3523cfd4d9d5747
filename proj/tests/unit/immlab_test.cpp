#include <vector>

#include "gtest/gtest.h"

#include "jpit/errors.hpp"
#include "jpit/immlab.hpp"
#include "random_instances.hpp"

namespace jpit {
namespace {

using Pivots = std::vector<std::pair<std::size_t, std::size_t>>;

const PrimeField& big() {
  static const PrimeField f = select_prime(1);
  return f;
}

SparsePoly x(std::size_t n, std::size_t i, std::size_t j) {
  return SparsePoly::variable(big(), n * n, entry_var(n, i, j));
}

// Random nonzero table on S_3.
Character random_table(Rng& rng) {
  std::vector<std::pair<std::vector<std::size_t>, std::uint64_t>> t;
  std::vector<std::size_t> p{0, 1, 2};
  do {
    t.emplace_back(p, 1 + rng.below(1000));
  } while (std::next_permutation(p.begin(), p.end()));
  return Character::from_table(big(), 3, t);
}

TEST(Immanant, Examples) {
  const auto& f = big();
  auto M2 = SymbolicMatrix::generic(f, 2);
  EXPECT_EQ(immanant(M2, Character::sign(2)), x(2, 0, 0) * x(2, 1, 1) - x(2, 0, 1) * x(2, 1, 0));
  EXPECT_EQ(immanant(M2, Character::trivial(2)), x(2, 0, 0) * x(2, 1, 1) + x(2, 0, 1) * x(2, 1, 0));
  auto M1 = SymbolicMatrix::generic(f, 1);
  EXPECT_EQ(immanant(M1, Character::sign(1)), x(1, 0, 0));
  EXPECT_EQ(immanant(M1, Character::trivial(1)), x(1, 0, 0));
  EXPECT_EQ(immanant(SymbolicMatrix::generic(f, 4), Character::trivial(4)).sparsity(), 24u);
  EXPECT_THROW(SymbolicMatrix::generic(f, 9), PreconditionError);
}

TEST(Immanant, ValueMatchesExpansion) {
  const auto& f = big();
  Rng rng(4);
  Character tab = random_table(rng);
  for (std::size_t n = 1; n <= 4; ++n) {
    auto M = SymbolicMatrix::generic(f, n);
    for (const auto& chi : {Character::sign(n), Character::trivial(n)}) {
      auto pt = rng.field_point(f, n * n);
      std::vector<std::vector<std::uint64_t>> v(n, std::vector<std::uint64_t>(n));
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) v[i][j] = pt[entry_var(n, i, j)];
      }
      EXPECT_EQ(immanant_value(f, v, chi), immanant(M, chi).evaluate(pt));
      if (n == 3) {
        EXPECT_EQ(immanant_value(f, v, tab), immanant(M, tab).evaluate(pt));
      }
    }
  }
}

TEST(Character, TableValidation) {
  const auto& f = big();
  std::vector<std::pair<std::vector<std::size_t>, std::uint64_t>> t{{{0, 1}, 1}, {{1, 0}, 3}};
  auto chi = Character::from_table(f, 2, t);
  EXPECT_EQ(immanant(SymbolicMatrix::generic(f, 2), chi),
            x(2, 0, 0) * x(2, 1, 1) + (x(2, 0, 1) * x(2, 1, 0)).scale(3));
  EXPECT_THROW(Character::from_table(f, 2, {{{0, 1}, 1}}), PreconditionError);
  EXPECT_THROW(Character::from_table(f, 2, {{{0, 1}, 1}, {{1, 0}, 0}}), PreconditionError);
  EXPECT_THROW(Character::from_table(f, 2, {{{0, 0}, 1}, {{1, 0}, 1}}), PreconditionError);
  EXPECT_THROW(immanant(SymbolicMatrix::generic(f, 3), chi), ArityError);
  auto js = character_from_json(f, nlohmann::json::parse(R"({"table": [[[0,1], 1], [[1,0], -2]]})"), 2);
  EXPECT_EQ(js.value(f, std::vector<std::size_t>{1, 0}), f.from_int(-2));
  EXPECT_EQ(character_from_json(f, "sign", 3).name(), "sign");
}

TEST(PrincipalMinor, Examples) {
  const auto& f = big();
  auto s2 = Character::sign(2), s3 = Character::sign(3);
  EXPECT_EQ(principal_minor(SymbolicMatrix::generic(f, 2), {{0, 0}}, s2), x(2, 1, 1));
  auto M3 = SymbolicMatrix::generic(f, 3);
  EXPECT_EQ(principal_minor(M3, {{0, 0}}, s3), x(3, 1, 1) * x(3, 2, 2) - x(3, 1, 2) * x(3, 2, 1));
  EXPECT_EQ(principal_minor(M3, {{0, 0}, {1, 1}}, s3), x(3, 2, 2));
  EXPECT_THROW(principal_minor(M3, {{0, 0}, {0, 1}}, s3), PreconditionError);
  EXPECT_THROW(principal_minor(M3, {{0, 2}, {1, 2}}, s3), PreconditionError);
  EXPECT_THROW(principal_minor(M3, {{3, 0}}, s3), ArityError);
}

TEST(PrincipalMinor, DerivativeIdentity) {
  const auto& f = big();
  Rng rng(6);
  Character tab = random_table(rng);
  for (std::size_t n = 1; n <= 4; ++n) {
    auto M = SymbolicMatrix::generic(f, n);
    std::vector<Character> chis{Character::sign(n), Character::trivial(n)};
    if (n == 3) chis.push_back(tab);
    for (const auto& chi : chis) {
      auto imm = immanant(M, chi);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          EXPECT_EQ(imm.partial(entry_var(n, i, j)), principal_minor(M, {{i, j}}, chi))
              << chi.name() << " n=" << n << " (" << i << "," << j << ")";
        }
      }
    }
  }
}

TEST(SymbolicDet, MatchesDeterminant) {
  const auto& f = big();
  for (std::size_t n = 1; n <= 4; ++n) {
    std::vector<std::vector<SparsePoly>> m(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m[i].push_back(x(n, i, j));
    }
    EXPECT_EQ(symbolic_det(m), immanant(SymbolicMatrix::generic(f, n), Character::sign(n)));
  }
}

TEST(Lemma10, Det2) {
  const auto& f = big();
  auto det = immanant(SymbolicMatrix::generic(f, 2), Character::sign(2));
  auto eq = lemma10_equation({det}, Character::sign(2), Rng(1));
  EXPECT_EQ(eq.r, 1u);
  EXPECT_EQ(eq.variable_set, (std::vector<std::size_t>{0, 3}));
  EXPECT_EQ(eq.added_diagonal, 3u);
  ASSERT_EQ(eq.terms.size(), 2u);
  EXPECT_EQ(eq.terms[0].c, 1u);
  EXPECT_EQ(eq.terms[0].f, x(2, 0, 0));
  EXPECT_EQ(eq.terms[0].M, x(2, 1, 1));
  EXPECT_EQ(eq.terms[1].c, f.neg(1));
  EXPECT_EQ(eq.terms[1].f, x(2, 1, 1));
  EXPECT_EQ(eq.terms[1].M, x(2, 0, 0));
  EXPECT_TRUE(eq.sum().is_zero());
  EXPECT_EQ(eq.to_json()["variable_set"], nlohmann::json::array({"x11", "x22"}));
}

TEST(Lemma10, Rejections) {
  const auto& f = big();
  auto s3 = Character::sign(3);
  EXPECT_THROW(lemma10_equation({SparsePoly::constant(f, 9, 5)}, s3, Rng(1)), PreconditionError);
  // x11 alone does not determine Det_3.
  EXPECT_THROW(lemma10_equation({x(3, 0, 0)}, s3, Rng(1)), PreconditionError);
  auto det = immanant(SymbolicMatrix::generic(f, 2), Character::sign(2));
  EXPECT_THROW(lemma10_equation({det, x(2, 0, 1)}, Character::sign(2), Rng(1)), PreconditionError);
  EXPECT_THROW(lemma10_equation({SparsePoly::constant(f, 5, 1)}, s3, Rng(1)), ArityError);
}

TEST(Lemma10, ConstructedInstances) {
  const auto& f = big();
  Rng rng(10);
  for (std::size_t n = 2; n <= 4; ++n) {
    for (std::size_t r = 1; r < std::min<std::size_t>(n, 3); ++r) {
      for (int kind = 0; kind < 2; ++kind) {
        auto chi = rng.coin() ? Character::sign(n) : Character::trivial(n);
        auto inst = dependent_set(f, n, r, kind, chi, rng);
        auto eq = lemma10_equation(inst.Ts, chi, rng.split(n * 10 + r));
        EXPECT_EQ(eq.r, r);
        EXPECT_EQ(eq.terms.size(), r + 1);
        EXPECT_TRUE(eq.sum().is_zero());
        bool some = false;
        for (const auto& t : eq.terms) {
          some = some || !t.f.is_zero();
          if (!t.principal()) {
            EXPECT_TRUE(t.f.is_zero()) << "non-principal minor with nonzero f";
          }
        }
        EXPECT_TRUE(some);
        auto added = std::find_if(eq.terms.begin(), eq.terms.end(), [&](const MinorTerm& t) {
          return entry_var(n, t.row, t.col) == eq.added_diagonal;
        });
        ASSERT_NE(added, eq.terms.end());
        EXPECT_FALSE(added->f.is_zero());
      }
    }
  }
}

TEST(Conjecture1, Examples) {
  const auto& f = big();
  EXPECT_TRUE(conjecture1_check(f, 3, {{0}}, {1}, {}, Character::sign(3), Rng(1)));
  EXPECT_TRUE(conjecture1_check(f, 4, {{0, 1}}, {2, 3}, {}, Character::sign(4), Rng(1)));
  EXPECT_TRUE(conjecture1_check(f, 4, {{0}, {1}}, {2}, {}, Character::trivial(4), Rng(1)));
  // A y variable fixed to a constant kills its column.
  EXPECT_FALSE(conjecture1_check(f, 3, {{0}}, {1}, {{1, 1, 7}}, Character::sign(3), Rng(1)));
  EXPECT_THROW(conjecture1_check(f, 3, {{0, 1}}, {2}, {}, Character::sign(3), Rng(1)), ArityError);
  EXPECT_THROW(conjecture1_check(f, 4, {{0}, {0}}, {2}, {}, Character::sign(4), Rng(1)), ArityError);
  EXPECT_THROW(conjecture1_check(f, 4, {{0}}, {0}, {}, Character::sign(4), Rng(1)), ArityError);
  EXPECT_THROW(conjecture1_check(f, 4, {{}}, {1}, {}, Character::sign(4), Rng(1)), ArityError);
  // Random evaluation path.
  EXPECT_TRUE(conjecture1_check(f, 6, {{0, 1}}, {2, 3}, {}, Character::trivial(6), Rng(2)));
}

TEST(Projection, Examples) {
  const auto& f = big();
  auto zero = [&](std::size_t n) { return SparsePoly(f, n * n); };
  auto s2 = Character::sign(2);
  EXPECT_TRUE(projection_nonzero_check(f, 2, {{0, 0, zero(2)}}, s2, Rng(1)));
  EXPECT_FALSE(projection_nonzero_check(f, 2, {{0, 0, zero(2)}, {0, 1, zero(2)}}, s2, Rng(1)));
  EXPECT_FALSE(projection_nonzero_check(f, 6, {{0, 0, zero(6)}, {0, 1, zero(6)}, {0, 2, zero(6)},
                                               {0, 3, zero(6)}, {0, 4, zero(6)}, {0, 5, zero(6)}},
                                        Character::trivial(6), Rng(1)));
  std::vector<CorruptedEntry> diag;
  for (std::size_t i = 0; i < 5; ++i) diag.push_back({i, i, zero(6)});
  EXPECT_TRUE(projection_nonzero_check(f, 6, diag, Character::sign(6), Rng(1)));
}

TEST(Projection, EveryTwoEntryProjectionOfOrderThree) {
  const auto& f = big();
  auto s3 = Character::sign(3);
  for (std::size_t a = 0; a < 9; ++a) {
    for (std::size_t b = a + 1; b < 9; ++b) {
      for (std::uint64_t va = 0; va < 2; ++va) {
        for (std::uint64_t vb = 0; vb < 2; ++vb) {
          std::vector<CorruptedEntry> c{{a / 3, a % 3, SparsePoly::constant(f, 9, va)},
                                        {b / 3, b % 3, SparsePoly::constant(f, 9, vb)}};
          EXPECT_TRUE(projection_nonzero_check(f, 3, c, s3, Rng(1)));
        }
      }
    }
  }
}

TEST(Sweeps, SmallCases) {
  const auto& f = big();
  auto cases = conjecture1_sweep(f, 4, 2, 2, Character::sign(2), Rng(1));
  // n=2: k=1 (1 case); n=3: k=1 (2), k=2 t=1 none, t=2 (1); n=4: k=1 (3), k=2 t=1 (1), t=2 (2).
  EXPECT_EQ(cases.size(), 10u);
  for (const auto& c : cases) EXPECT_TRUE(c.verdict) << c.to_json().dump();
  auto p = projection_sweep(f, 3, 2, {0, 1}, Character::trivial(3), Rng(1));
  EXPECT_EQ(p.checked, 36u * 4u);
  EXPECT_TRUE(p.counterexamples.empty());
  auto q = projection_sweep(f, 2, 2, {0}, Character::sign(2), Rng(1));
  EXPECT_EQ(q.checked, 6u);
  EXPECT_EQ(q.counterexamples.size(), 4u);  // both rows, both columns
}

TEST(Lemma12, NoVanishingCombinationBelowBound) {
  const auto& f = big();
  auto a = lemma12_probe(f, 4, 1, 2, 20, Rng(3));
  EXPECT_EQ(a.instances, 20u);
  EXPECT_EQ(a.dependent, 0u);
  auto b = lemma12_probe(f, 5, 2, 2, 10, Rng(4));
  EXPECT_EQ(b.dependent, 0u);
  EXPECT_THROW(lemma12_probe(f, 4, 2, 2, 1, Rng(1)), PreconditionError);
}

}  // namespace
}  // namespace jpit
