#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jpit/poly.hpp"
#include "jpit/rng.hpp"
#include "json.hpp"

namespace jpit {

inline constexpr std::size_t kMaxImmanantOrder = 8;
// Nonzeroness is decided by expansion up to this order, by random
// evaluation (kDefaultTrials points) above it.
inline constexpr std::size_t kSymbolicOrderLimit = 5;

// Matrix variable x_{ij} (0-based i, j) is variable i*n + j.
inline std::size_t entry_var(std::size_t n, std::size_t i, std::size_t j) { return i * n + j; }
std::string entry_name(std::size_t i, std::size_t j);  // "x11" for (0, 0)

// Class function on S_n with no zero values. Permutations are 0-based
// arrays sigma with sigma[i] the image of i.
class Character {
 public:
  enum class Kind { Sign, Trivial, Table };

  static Character sign(std::size_t n);
  static Character trivial(std::size_t n);
  // `table` lists every permutation of S_n once, with a nonzero value.
  static Character from_table(const PrimeField& field, std::size_t n,
                              const std::vector<std::pair<std::vector<std::size_t>, std::uint64_t>>& table);

  Kind kind() const { return kind_; }
  std::size_t n() const { return n_; }
  std::string name() const;
  std::uint64_t value(const PrimeField& field, std::span<const std::size_t> sigma) const;
  // Same character on a different n; tables do not resize.
  Character resized(std::size_t n) const;

 private:
  Character(Kind kind, std::size_t n) : kind_(kind), n_(n) {}
  Kind kind_;
  std::size_t n_;
  std::vector<std::uint64_t> table_;  // by Lehmer rank
};

// "sign" | "trivial" | {"n": .., "table": [[perm, value], ...]} (perms 0-based).
Character character_from_json(const PrimeField& field, const nlohmann::json& j, std::size_t n);

class SymbolicMatrix {
 public:
  // M = (x_ij) over n*n variables.
  static SymbolicMatrix generic(const PrimeField& field, std::size_t n);

  std::size_t n() const { return n_; }
  const PrimeField& field() const { return field_; }
  const SparsePoly& entry(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, SparsePoly value);
  void set_constant(std::size_t i, std::size_t j, std::uint64_t value);

 private:
  SymbolicMatrix(const PrimeField& field, std::size_t n);
  PrimeField field_;
  std::size_t n_;
  std::vector<SparsePoly> entries_;
};

SparsePoly immanant(const SymbolicMatrix& mat, const Character& chi);

// sum over sigma with sigma(r) = c for every pivot (r, c) of
// chi(sigma) prod_{k not a pivot row} M[k][sigma(k)]. One pivot (i, j) gives
// the (i, j) immanant minor, which is d Imm / d x_ij on a generic matrix.
SparsePoly principal_minor(const SymbolicMatrix& mat,
                           const std::vector<std::pair<std::size_t, std::size_t>>& pivots,
                           const Character& chi);

// Immanant of a numeric matrix.
std::uint64_t immanant_value(const PrimeField& field, const std::vector<std::vector<std::uint64_t>>& m,
                             const Character& chi);

// Determinant of a small square matrix of polynomials by cofactor expansion.
SparsePoly symbolic_det(const std::vector<std::vector<SparsePoly>>& m);

struct MinorTerm {
  std::uint64_t c = 1;
  SparsePoly f;
  SparsePoly M;
  std::size_t row = 0;  // M is the (row, col) immanant minor
  std::size_t col = 0;
  bool principal() const { return row == col; }
};

struct MinorEquation {
  std::size_t n = 0;
  std::size_t r = 0;
  std::vector<std::size_t> basis;  // indices into Ts
  std::vector<std::size_t> variable_set;  // columns of the extended matrix, variable indices
  std::size_t added_diagonal = 0;  // variable index of x_jj
  std::vector<MinorTerm> terms;

  SparsePoly sum() const;
  nlohmann::json to_json() const;
};

// Ts are polynomials in the n*n matrix variables whose algebraic closure
// contains Imm_chi(M), with trdeg 1 <= r < n.
MinorEquation lemma10_equation(const std::vector<SparsePoly>& Ts, const Character& chi,
                               const Rng& rng);

struct ConstantEntry {
  std::size_t row = 0;
  std::size_t col = 0;
  std::uint64_t value = 0;
};

// Partition sets and y_vars are 0-based diagonal indices (i means x_ii).
bool conjecture1_check(const PrimeField& field, std::size_t n,
                       const std::vector<std::vector<std::size_t>>& partition,
                       const std::vector<std::size_t>& y_vars,
                       const std::vector<ConstantEntry>& constants, const Character& chi,
                       const Rng& rng);

struct CorruptedEntry {
  std::size_t row = 0;
  std::size_t col = 0;
  SparsePoly value;
};

bool projection_nonzero_check(const PrimeField& field, std::size_t n,
                              const std::vector<CorruptedEntry>& corrupted, const Character& chi,
                              const Rng& rng);

// Polynomial sets whose algebraic closure contains Imm_chi, trdeg r.
// kind 0: {Imm} or {Imm, g}; kind 1: {Imm^2 + c Imm} for r = 1 and
// {Imm g + c g^2, g} (sometimes with their product) for r = 2. g is a
// nonconstant product of one or two sparse polynomials.
struct DependentSet {
  std::vector<SparsePoly> Ts;
  std::size_t n = 0;
  std::size_t r = 0;
  int kind = 0;
};

DependentSet dependent_set(const PrimeField& field, std::size_t n, std::size_t r, int kind,
                           const Character& chi, Rng& rng);

struct Conjecture1Case {
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> partition;
  std::vector<std::size_t> y;
  bool verdict = false;
  nlohmann::json to_json() const;
};

// Every n in 2..n_max, k in 1..k_max with k < n, partition of x_1..x_k into
// at most t_max sets and choice of y among the remaining diagonal
// variables; no constants.
std::vector<Conjecture1Case> conjecture1_sweep(const PrimeField& field, std::size_t n_max,
                                               std::size_t k_max, std::size_t t_max,
                                               const Character& chi, const Rng& rng);

struct ProjectionSweep {
  std::size_t n = 0;
  std::size_t c = 0;
  std::size_t checked = 0;
  std::vector<nlohmann::json> counterexamples;
};

// All placements of c entries set to constants from `values`.
ProjectionSweep projection_sweep(const PrimeField& field, std::size_t n, std::size_t c,
                                 const std::vector<std::uint64_t>& values, const Character& chi,
                                 const Rng& rng);

struct Lemma12Result {
  std::size_t instances = 0;
  std::size_t dependent = 0;  // instances with a vanishing combination
  std::vector<nlohmann::json> flagged;
};

// Random distinct first order principal minors M_1..M_t and independent
// affine forms l_1..l_k with t + k < n; counts instances where some nonzero
// sum alpha_i M_i vanishes modulo (l_1..l_k).
Lemma12Result lemma12_probe(const PrimeField& field, std::size_t n, std::size_t t,
                            std::size_t k, std::size_t instances, const Rng& rng);

}  // namespace jpit
