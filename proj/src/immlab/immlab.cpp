#include "jpit/immlab.hpp"

#include <algorithm>
#include <numeric>

#include "jpit/calculus.hpp"
#include "jpit/errors.hpp"
#include "jpit/linalg.hpp"

namespace jpit {

namespace {

std::size_t factorial(std::size_t n) {
  std::size_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

std::size_t lehmer_rank(std::span<const std::size_t> sigma) {
  const std::size_t n = sigma.size();
  std::size_t rank = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t smaller = 0;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (sigma[j] < sigma[i]) ++smaller;
    }
    rank = rank * (n - i) + smaller;
  }
  return rank;
}

bool odd_permutation(std::span<const std::size_t> sigma) {
  std::vector<bool> seen(sigma.size(), false);
  std::size_t transpositions = 0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = sigma[j]) {
      seen[j] = true;
      ++len;
    }
    transpositions += len - 1;
  }
  return transpositions % 2 == 1;
}

void check_order(std::size_t n) {
  if (n == 0) throw PreconditionError("matrix order must be positive");
  if (n > kMaxImmanantOrder) {
    throw PreconditionError("immanant of order " + std::to_string(n) + " exceeds the limit " +
                            std::to_string(kMaxImmanantOrder));
  }
}

void check_character(const Character& chi, std::size_t n) {
  if (chi.kind() == Character::Kind::Table && chi.n() != n) {
    throw ArityError("character on S_" + std::to_string(chi.n()) + " used on an order " +
                     std::to_string(n) + " matrix");
  }
}

// Calls visit(sigma) for every permutation with sigma[r] = c on the pivots.
template <class Visit>
void for_each_constrained(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& pivots,
                          Visit&& visit) {
  std::vector<std::size_t> sigma(n, 0), free_rows, free_cols;
  std::vector<bool> row_used(n, false), col_used(n, false);
  for (auto [r, c] : pivots) {
    if (r >= n || c >= n) throw ArityError("pivot outside the matrix");
    if (row_used[r] || col_used[c]) throw PreconditionError("pivots share a row or column");
    row_used[r] = col_used[c] = true;
    sigma[r] = c;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!row_used[i]) free_rows.push_back(i);
    if (!col_used[i]) free_cols.push_back(i);
  }
  do {
    for (std::size_t a = 0; a < free_rows.size(); ++a) sigma[free_rows[a]] = free_cols[a];
    visit(std::as_const(sigma), std::as_const(free_rows));
  } while (std::next_permutation(free_cols.begin(), free_cols.end()));
}

SparsePoly expand(const SymbolicMatrix& mat,
                  const std::vector<std::pair<std::size_t, std::size_t>>& pivots,
                  const Character& chi) {
  const std::size_t n = mat.n();
  check_order(n);
  check_character(chi, n);
  const auto& f = mat.field();
  std::vector<Term> acc;
  for_each_constrained(n, pivots, [&](const std::vector<std::size_t>& sigma,
                                      const std::vector<std::size_t>& rows) {
    SparsePoly prod = SparsePoly::constant(f, n * n, chi.value(f, sigma));
    for (std::size_t i : rows) {
      const SparsePoly& e = mat.entry(i, sigma[i]);
      if (e.is_zero()) return;
      prod = prod * e;
    }
    acc.insert(acc.end(), prod.terms().begin(), prod.terms().end());
  });
  return SparsePoly::from_terms(f, n * n, std::move(acc));
}

// Symbolic up to kSymbolicOrderLimit, random points above.
template <class Symbolic, class Numeric>
bool nonzero(std::size_t n, const Rng& rng, Symbolic&& symbolic, Numeric&& numeric) {
  if (n <= kSymbolicOrderLimit) return !symbolic().is_zero();
  for (std::size_t t = 0; t < kDefaultTrials; ++t) {
    Rng r = rng.split(t);
    if (numeric(r) != 0) return true;
  }
  return false;
}

SymbolicMatrix projected(const PrimeField& field, std::size_t n,
                         const std::vector<ConstantEntry>& constants) {
  auto m = SymbolicMatrix::generic(field, n);
  for (const auto& c : constants) {
    if (c.row >= n || c.col >= n) throw ArityError("constant entry outside the matrix");
    m.set_constant(c.row, c.col, c.value);
  }
  return m;
}

std::uint64_t sign_of(const PrimeField& f, std::size_t pos) {
  return pos % 2 == 0 ? 1 : f.neg(1);
}

}  // namespace

std::string entry_name(std::size_t i, std::size_t j) {
  return "x" + std::to_string(i + 1) + std::to_string(j + 1);
}

Character Character::sign(std::size_t n) { return Character(Kind::Sign, n); }
Character Character::trivial(std::size_t n) { return Character(Kind::Trivial, n); }

Character Character::from_table(
    const PrimeField& field, std::size_t n,
    const std::vector<std::pair<std::vector<std::size_t>, std::uint64_t>>& table) {
  check_order(n);
  Character c(Kind::Table, n);
  c.table_.assign(factorial(n), 0);
  std::vector<bool> set(c.table_.size(), false);
  for (const auto& [perm, v] : table) {
    if (perm.size() != n) throw ArityError("character table entry of the wrong length");
    std::vector<bool> hit(n, false);
    for (std::size_t x : perm) {
      if (x >= n || hit[x]) throw PreconditionError("character table key is not a permutation");
      hit[x] = true;
    }
    std::uint64_t val = field.from_uint(v);
    if (val == 0) throw PreconditionError("character value is zero");
    std::size_t rank = lehmer_rank(perm);
    if (set[rank]) throw PreconditionError("permutation listed twice in character table");
    set[rank] = true;
    c.table_[rank] = val;
  }
  if (std::find(set.begin(), set.end(), false) != set.end()) {
    throw PreconditionError("character table does not cover S_" + std::to_string(n));
  }
  return c;
}

std::string Character::name() const {
  switch (kind_) {
    case Kind::Sign: return "sign";
    case Kind::Trivial: return "trivial";
    default: return "table";
  }
}

std::uint64_t Character::value(const PrimeField& field, std::span<const std::size_t> sigma) const {
  switch (kind_) {
    case Kind::Sign: return odd_permutation(sigma) ? field.neg(1) : 1;
    case Kind::Trivial: return 1;
    default:
      if (sigma.size() != n_) throw ArityError("permutation length differs from the character's");
      return field.from_uint(table_[lehmer_rank(sigma)]);
  }
}

Character Character::resized(std::size_t n) const {
  if (kind_ == Kind::Table) {
    if (n != n_) throw ArityError("a character table cannot be resized");
    return *this;
  }
  return Character(kind_, n);
}

Character character_from_json(const PrimeField& field, const nlohmann::json& j, std::size_t n) {
  if (j.is_string()) {
    if (j == "sign") return Character::sign(n);
    if (j == "trivial") return Character::trivial(n);
    throw PreconditionError("unknown character '" + j.get<std::string>() + "'");
  }
  std::vector<std::pair<std::vector<std::size_t>, std::uint64_t>> table;
  for (const auto& row : j.at("table")) {
    table.emplace_back(row.at(0).get<std::vector<std::size_t>>(),
                       field.from_int(row.at(1).get<std::int64_t>()));
  }
  return Character::from_table(field, j.value("n", n), table);
}

SymbolicMatrix::SymbolicMatrix(const PrimeField& field, std::size_t n)
    : field_(field), n_(n) {}

SymbolicMatrix SymbolicMatrix::generic(const PrimeField& field, std::size_t n) {
  check_order(n);
  SymbolicMatrix m(field, n);
  m.entries_.reserve(n * n);
  for (std::size_t v = 0; v < n * n; ++v) m.entries_.push_back(SparsePoly::variable(field, n * n, v));
  return m;
}

void SymbolicMatrix::set(std::size_t i, std::size_t j, SparsePoly value) {
  if (i >= n_ || j >= n_) throw ArityError("entry outside the matrix");
  if (value.nvars() != n_ * n_) throw ArityError("entry must be a polynomial in the n*n matrix variables");
  if (value.field() != field_) throw FieldMismatch("entry over a different field");
  entries_[i * n_ + j] = std::move(value);
}

void SymbolicMatrix::set_constant(std::size_t i, std::size_t j, std::uint64_t value) {
  set(i, j, SparsePoly::constant(field_, n_ * n_, value));
}

SparsePoly immanant(const SymbolicMatrix& mat, const Character& chi) {
  return expand(mat, {}, chi);
}

SparsePoly principal_minor(const SymbolicMatrix& mat,
                           const std::vector<std::pair<std::size_t, std::size_t>>& pivots,
                           const Character& chi) {
  return expand(mat, pivots, chi);
}

std::uint64_t immanant_value(const PrimeField& field, const std::vector<std::vector<std::uint64_t>>& m,
                             const Character& chi) {
  const std::size_t n = m.size();
  check_order(n);
  check_character(chi, n);
  for (const auto& row : m) {
    if (row.size() != n) throw ArityError("immanant of a non-square matrix");
  }
  std::uint64_t acc = 0;
  for_each_constrained(n, {}, [&](const std::vector<std::size_t>& sigma, const std::vector<std::size_t>&) {
    std::uint64_t prod = chi.value(field, sigma);
    for (std::size_t i = 0; i < n && prod != 0; ++i) prod = field.mul(prod, field.from_uint(m[i][sigma[i]]));
    acc = field.add(acc, prod);
  });
  return acc;
}

SparsePoly symbolic_det(const std::vector<std::vector<SparsePoly>>& m) {
  const std::size_t n = m.size();
  if (n == 0) throw PreconditionError("determinant of an empty matrix");
  for (const auto& row : m) {
    if (row.size() != n) throw ArityError("determinant of a non-square matrix");
  }
  if (n == 1) return m[0][0];
  const auto& f = m[0][0].field();
  SparsePoly acc(f, m[0][0].nvars());
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c].is_zero()) continue;
    std::vector<std::vector<SparsePoly>> sub;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<SparsePoly> row;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != c) row.push_back(m[i][j]);
      }
      sub.push_back(std::move(row));
    }
    acc = acc + (m[0][c] * symbolic_det(sub)).scale(sign_of(f, c));
  }
  return acc;
}

SparsePoly MinorEquation::sum() const {
  if (terms.empty()) throw PreconditionError("empty equation");
  SparsePoly acc(terms[0].M.field(), terms[0].M.nvars());
  for (const auto& t : terms) acc = acc + (t.f * t.M).scale(t.c);
  return acc;
}

nlohmann::json MinorEquation::to_json() const {
  auto names = [&](const std::vector<std::size_t>& vars) {
    nlohmann::json a = nlohmann::json::array();
    for (std::size_t v : vars) a.push_back(entry_name(v / n, v % n));
    return a;
  };
  nlohmann::json t = nlohmann::json::array();
  for (const auto& term : terms) {
    const auto& f = term.M.field();
    t.push_back({{"c", f.to_signed(term.c)},
                 {"f", term.f.to_string()},
                 {"minor", entry_name(term.row, term.col)},
                 {"principal", term.principal()},
                 {"M", term.M.to_string()}});
  }
  return {{"n", n},
          {"r", r},
          {"basis", basis},
          {"variable_set", names(variable_set)},
          {"added_diagonal", entry_name(added_diagonal / n, added_diagonal % n)},
          {"terms", t}};
}

MinorEquation lemma10_equation(const std::vector<SparsePoly>& Ts, const Character& chi,
                               const Rng& rng) {
  if (Ts.empty()) throw PreconditionError("no polynomials given");
  const std::size_t nv = Ts[0].nvars();
  std::size_t n = 1;
  while ((n + 1) * (n + 1) <= nv) ++n;
  if (n * n != nv) throw ArityError("polynomials must be in n*n matrix variables");
  for (const auto& t : Ts) {
    if (t.nvars() != nv) throw ArityError("polynomials over different variable sets");
  }
  const auto& f = Ts[0].field();
  const auto M = SymbolicMatrix::generic(f, n);
  const SparsePoly imm = immanant(M, chi);

  auto report = trdeg(Ts, rng);
  const std::size_t r = report.trdeg;
  if (r == 0) throw PreconditionError("Jacobian of the polynomials is zero");
  if (r >= n) {
    throw PreconditionError("trdeg " + std::to_string(r) + " is not below n = " + std::to_string(n));
  }
  std::vector<SparsePoly> basis;
  for (std::size_t i : report.basis) basis.push_back(Ts[i]);
  std::vector<SparsePoly> with_imm{imm};
  with_imm.insert(with_imm.end(), basis.begin(), basis.end());
  if (trdeg(with_imm, rng.split(3001)).trdeg != r) {
    throw PreconditionError("the immanant is algebraically independent of the polynomials");
  }

  // Numeric Jacobian of the basis at one random point.
  Rng pr = rng.split(3000);
  auto point = pr.field_point(f, nv);
  std::vector<std::vector<SparsePoly>> J(r);
  Matrix Jv(r, std::vector<std::uint64_t>(nv));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t v = 0; v < nv; ++v) {
      J[i].push_back(basis[i].partial(v));
      Jv[i][v] = J[i][v].evaluate(point);
    }
  }

  // Nonzero r x r minor with the most diagonal columns, lexicographic ties.
  std::vector<std::size_t> cols(r), best;
  std::iota(cols.begin(), cols.end(), 0);
  std::size_t best_diag = 0;
  auto is_diag = [&](std::size_t v) { return v / n == v % n; };
  while (true) {
    std::size_t diag = 0;
    for (std::size_t v : cols) diag += is_diag(v);
    if (best.empty() || diag > best_diag) {
      Matrix sub(r, std::vector<std::uint64_t>(r));
      for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) sub[i][j] = Jv[i][cols[j]];
      }
      if (determinant(f, sub) != 0) {
        best = cols;
        best_diag = diag;
        if (diag == r) break;
      }
    }
    std::size_t i = r;
    while (i > 0 && cols[i - 1] == nv - r + i - 1) --i;
    if (i == 0) break;
    ++cols[i - 1];
    for (std::size_t j = i; j < r; ++j) cols[j] = cols[j - 1] + 1;
  }
  if (best.empty()) throw PreconditionError("no nonzero minor of the Jacobian found");

  std::size_t jj = 0;
  while (std::find(best.begin(), best.end(), entry_var(n, jj, jj)) != best.end()) ++jj;
  MinorEquation eq;
  eq.n = n;
  eq.r = r;
  eq.basis = report.basis;
  eq.added_diagonal = entry_var(n, jj, jj);
  eq.variable_set = best;
  eq.variable_set.push_back(eq.added_diagonal);
  std::sort(eq.variable_set.begin(), eq.variable_set.end());

  // First row of the extended matrix holds the immanant minors; expand along it.
  for (std::size_t a = 0; a < eq.variable_set.size(); ++a) {
    const std::size_t v = eq.variable_set[a];
    const std::size_t row = v / n, col = v % n;
    std::vector<std::vector<SparsePoly>> sub(r);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t b = 0; b < eq.variable_set.size(); ++b) {
        if (b != a) sub[i].push_back(J[i][eq.variable_set[b]]);
      }
    }
    eq.terms.push_back(MinorTerm{sign_of(f, a), symbolic_det(sub),
                                 principal_minor(M, {{row, col}}, chi), row, col});
  }

  if (!eq.sum().is_zero()) throw Error("expanded minor equation does not vanish");
  if (std::all_of(eq.terms.begin(), eq.terms.end(), [](const MinorTerm& t) { return t.f.is_zero(); })) {
    throw Error("every coefficient of the minor equation is zero");
  }
  return eq;
}

bool conjecture1_check(const PrimeField& field, std::size_t n,
                       const std::vector<std::vector<std::size_t>>& partition,
                       const std::vector<std::size_t>& y_vars,
                       const std::vector<ConstantEntry>& constants, const Character& chi,
                       const Rng& rng) {
  check_order(n);
  if (n > 7) throw PreconditionError("conjecture checks are limited to n <= 7");
  if (partition.empty()) throw ArityError("partition has no sets");
  std::vector<bool> used(n, false);
  std::size_t m = 1;
  for (const auto& S : partition) {
    if (S.empty()) throw ArityError("partition set is empty");
    for (std::size_t x : S) {
      if (x >= n) throw ArityError("diagonal index outside the matrix");
      if (used[x]) throw ArityError("partition sets overlap");
      used[x] = true;
    }
    m *= S.size();
  }
  if (y_vars.size() != m) {
    throw ArityError("need " + std::to_string(m) + " y variables, got " + std::to_string(y_vars.size()));
  }
  for (std::size_t y : y_vars) {
    if (y >= n) throw ArityError("diagonal index outside the matrix");
    if (used[y]) throw ArityError("y variables must avoid the partitioned set and repeat nothing");
    used[y] = true;
  }

  const auto M = projected(field, n, constants);
  std::vector<SparsePoly> minors;
  std::vector<std::size_t> pick(partition.size(), 0);
  while (true) {
    std::vector<std::pair<std::size_t, std::size_t>> pivots;
    for (std::size_t s = 0; s < partition.size(); ++s) {
      std::size_t x = partition[s][pick[s]];
      pivots.emplace_back(x, x);
    }
    minors.push_back(principal_minor(M, pivots, chi));
    std::size_t s = partition.size();
    while (s > 0 && pick[s - 1] + 1 == partition[s - 1].size()) pick[--s] = 0;
    if (s == 0) break;
    ++pick[s - 1];
  }

  std::vector<std::vector<SparsePoly>> J(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t y : y_vars) J[i].push_back(minors[i].partial(entry_var(n, y, y)));
  }
  return nonzero(
      n, rng, [&] { return symbolic_det(J); },
      [&](Rng& r) {
        auto pt = r.field_point(field, n * n);
        Matrix v(m, std::vector<std::uint64_t>(m));
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t j = 0; j < m; ++j) v[i][j] = J[i][j].evaluate(pt);
        }
        return determinant(field, v);
      });
}

bool projection_nonzero_check(const PrimeField& field, std::size_t n,
                              const std::vector<CorruptedEntry>& corrupted, const Character& chi,
                              const Rng& rng) {
  check_order(n);
  if (n > 7) throw PreconditionError("projection checks are limited to n <= 7");
  auto M = SymbolicMatrix::generic(field, n);
  for (const auto& c : corrupted) M.set(c.row, c.col, c.value);
  return nonzero(
      n, rng, [&] { return immanant(M, chi); },
      [&](Rng& r) {
        auto pt = r.field_point(field, n * n);
        std::vector<std::vector<std::uint64_t>> v(n, std::vector<std::uint64_t>(n));
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j) v[i][j] = M.entry(i, j).evaluate(pt);
        }
        return immanant_value(field, v, chi);
      });
}

Lemma12Result lemma12_probe(const PrimeField& field, std::size_t n, std::size_t t,
                            std::size_t k, std::size_t instances, const Rng& rng) {
  check_order(n);
  if (n > kSymbolicOrderLimit) throw PreconditionError("lemma 12 probe is limited to n <= 5");
  if (t == 0 || t > n) throw PreconditionError("t must be in 1..n");
  if (t + k >= n) throw PreconditionError("probe needs t + k < n");
  const std::size_t nv = n * n;
  const auto M = SymbolicMatrix::generic(field, n);
  const auto chi = Character::sign(n);
  Lemma12Result out;
  for (std::size_t inst = 0; inst < instances; ++inst) {
    Rng r = rng.split(inst);
    std::vector<std::size_t> diag(n);
    std::iota(diag.begin(), diag.end(), 0);
    for (std::size_t i = n; i > 1; --i) std::swap(diag[i - 1], diag[r.below(i)]);
    diag.resize(t);
    std::sort(diag.begin(), diag.end());

    // Affine forms as rows [a_0 .. a_{nv-1} | constant], sparse and small
    // on even instances, dense otherwise.
    Matrix forms;
    while (forms.size() < k) {
      std::vector<std::uint64_t> row(nv + 1, 0);
      if (inst % 2 == 0) {
        for (int s = 0; s < 2; ++s) row[r.below(nv)] = r.coin() ? 1 : field.neg(1);
        row[nv] = field.from_int(r.range(-1, 1));
      } else {
        row = r.field_point(field, nv + 1);
      }
      Matrix lin;
      for (const auto& fr : forms) lin.emplace_back(fr.begin(), fr.end() - 1);
      lin.emplace_back(row.begin(), row.end() - 1);
      if (matrix_rank(field, lin) == lin.size()) forms.push_back(row);
    }

    // Reduced row echelon form; each pivot variable is solved for.
    std::vector<std::size_t> pivot_of;
    {
      std::size_t rowi = 0;
      for (std::size_t c = 0; c < nv && rowi < k; ++c) {
        std::size_t sel = rowi;
        while (sel < k && forms[sel][c] == 0) ++sel;
        if (sel == k) continue;
        std::swap(forms[sel], forms[rowi]);
        std::uint64_t inv = field.inv(forms[rowi][c]);
        for (auto& x : forms[rowi]) x = field.mul(x, inv);
        for (std::size_t o = 0; o < k; ++o) {
          if (o == rowi || forms[o][c] == 0) continue;
          std::uint64_t fac = forms[o][c];
          for (std::size_t j = 0; j <= nv; ++j) {
            forms[o][j] = field.sub(forms[o][j], field.mul(fac, forms[rowi][j]));
          }
        }
        pivot_of.push_back(c);
        ++rowi;
      }
    }
    std::vector<SparsePoly> images;
    for (std::size_t v = 0; v < nv; ++v) images.push_back(SparsePoly::variable(field, nv, v));
    for (std::size_t a = 0; a < k; ++a) {
      // x_p = -(constant + sum_{free j} a_j x_j)
      SparsePoly e = SparsePoly::constant(field, nv, field.neg(forms[a][nv]));
      for (std::size_t j = 0; j < nv; ++j) {
        if (j == pivot_of[a] || forms[a][j] == 0) continue;
        e = e - SparsePoly::variable(field, nv, j).scale(forms[a][j]);
      }
      images[pivot_of[a]] = e;
    }

    std::vector<SparsePoly> reduced;
    for (std::size_t d : diag) reduced.push_back(principal_minor(M, {{d, d}}, chi).substitute(images));
    std::vector<Monomial> monos;
    for (const auto& p : reduced) {
      for (const auto& term : p.terms()) {
        if (std::find(monos.begin(), monos.end(), term.monomial) == monos.end()) monos.push_back(term.monomial);
      }
    }
    Matrix coeffs;
    for (const auto& p : reduced) {
      std::vector<std::uint64_t> row;
      for (const auto& mono : monos) row.push_back(p.coefficient(mono));
      coeffs.push_back(std::move(row));
    }
    ++out.instances;
    if (matrix_rank(field, coeffs) < t) {
      ++out.dependent;
      nlohmann::json forms_json = nlohmann::json::array();
      for (const auto& fr : forms) forms_json.push_back(fr);
      out.flagged.push_back({{"instance", inst}, {"minors", diag}, {"forms", forms_json}});
    }
  }
  return out;
}

namespace {

SparsePoly sparse_product(const PrimeField& f, std::size_t n, Rng& rng) {
  const std::size_t nv = n * n;
  SparsePoly g = SparsePoly::constant(f, nv, 1);
  std::size_t factors = 1 + rng.below(2);
  for (std::size_t i = 0; i < factors; ++i) {
    while (true) {
      std::vector<Term> terms;
      std::size_t count = 1 + rng.below(3);
      for (std::size_t t = 0; t < count; ++t) {
        std::vector<std::uint32_t> e(nv, 0);
        std::size_t deg = rng.below(3);
        for (std::size_t d = 0; d < deg; ++d) ++e[rng.below(nv)];
        std::int64_t c = rng.range(-5, 5);
        terms.push_back({Monomial(std::move(e)), f.from_int(c == 0 ? 1 : c)});
      }
      auto p = SparsePoly::from_terms(f, nv, std::move(terms));
      if (p.is_constant()) continue;
      g = g * p;
      break;
    }
  }
  return g;
}

std::vector<std::vector<std::size_t>> combinations(const std::vector<std::size_t>& pool, std::size_t m) {
  std::vector<std::vector<std::size_t>> out;
  if (m > pool.size()) return out;
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    std::vector<std::size_t> c;
    for (std::size_t i : idx) c.push_back(pool[i]);
    out.push_back(std::move(c));
    std::size_t i = m;
    while (i > 0 && idx[i - 1] == pool.size() - m + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

}  // namespace

DependentSet dependent_set(const PrimeField& field, std::size_t n, std::size_t r, int kind,
                           const Character& chi, Rng& rng) {
  if (r < 1 || r > 2 || r >= n) throw PreconditionError("dependent sets need 1 <= r <= 2, r < n");
  const SparsePoly imm = immanant(SymbolicMatrix::generic(field, n), chi);
  DependentSet out{{}, n, r, kind};
  if (kind == 0) {
    out.Ts.push_back(imm);
    if (r == 2) out.Ts.push_back(sparse_product(field, n, rng));
    return out;
  }
  if (r == 1) {
    out.Ts.push_back(imm * imm + imm.scale(field.from_int(rng.range(1, 5))));
    return out;
  }
  SparsePoly g = sparse_product(field, n, rng);
  out.Ts.push_back(imm * g + (g * g).scale(field.from_int(rng.range(1, 5))));
  out.Ts.push_back(g);
  if (rng.coin()) out.Ts.push_back(out.Ts[0] * out.Ts[1]);
  return out;
}

nlohmann::json Conjecture1Case::to_json() const {
  return {{"n", n}, {"partition", partition}, {"y", y}, {"verdict", verdict}};
}

std::vector<Conjecture1Case> conjecture1_sweep(const PrimeField& field, std::size_t n_max,
                                               std::size_t k_max, std::size_t t_max,
                                               const Character& chi, const Rng& rng) {
  std::vector<Conjecture1Case> out;
  for (std::size_t n = 2; n <= n_max; ++n) {
    const Character c = chi.resized(n);
    for (std::size_t k = 1; k <= k_max && k < n; ++k) {
      // Restricted growth strings label the set partitions of 0..k-1.
      std::vector<std::size_t> label(k, 0);
      while (true) {
        std::size_t t = *std::max_element(label.begin(), label.end()) + 1;
        if (t <= t_max) {
          std::vector<std::vector<std::size_t>> part(t);
          for (std::size_t i = 0; i < k; ++i) part[label[i]].push_back(i);
          std::size_t m = 1;
          for (const auto& S : part) m *= S.size();
          std::vector<std::size_t> rest;
          for (std::size_t i = k; i < n; ++i) rest.push_back(i);
          for (auto& y : combinations(rest, m)) {
            Conjecture1Case cs{n, part, std::move(y), false};
            cs.verdict = conjecture1_check(field, n, cs.partition, cs.y, {}, c, rng.split(out.size()));
            out.push_back(std::move(cs));
          }
        }
        std::size_t i = k;
        while (i > 1) {
          std::size_t top = *std::max_element(label.begin(), label.begin() + static_cast<long>(i - 1));
          if (label[i - 1] <= top) break;
          label[--i] = 0;
        }
        if (i <= 1) break;
        ++label[i - 1];
        for (std::size_t j = i; j < k; ++j) label[j] = 0;
      }
    }
  }
  return out;
}

ProjectionSweep projection_sweep(const PrimeField& field, std::size_t n, std::size_t c,
                                 const std::vector<std::uint64_t>& values, const Character& chi,
                                 const Rng& rng) {
  if (values.empty()) throw PreconditionError("no constant values to place");
  std::vector<std::size_t> cells(n * n);
  std::iota(cells.begin(), cells.end(), 0);
  ProjectionSweep out{n, c, 0, {}};
  const Character ch = chi.resized(n);
  for (const auto& place : combinations(cells, c)) {
    std::vector<std::size_t> pick(c, 0);
    while (true) {
      std::vector<CorruptedEntry> corrupted;
      for (std::size_t a = 0; a < c; ++a) {
        corrupted.push_back({place[a] / n, place[a] % n,
                             SparsePoly::constant(field, n * n, values[pick[a]])});
      }
      if (!projection_nonzero_check(field, n, corrupted, ch, rng.split(out.checked))) {
        nlohmann::json cells_json = nlohmann::json::array();
        for (std::size_t a = 0; a < c; ++a) {
          cells_json.push_back({entry_name(place[a] / n, place[a] % n), values[pick[a]]});
        }
        out.counterexamples.push_back(cells_json);
      }
      ++out.checked;
      std::size_t a = c;
      while (a > 0 && pick[a - 1] + 1 == values.size()) pick[--a] = 0;
      if (a == 0) break;
      ++pick[a - 1];
    }
  }
  return out;
}

}  // namespace jpit
