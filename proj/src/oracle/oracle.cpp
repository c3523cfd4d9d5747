#include "jpit/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_map>

#include "jpit/errors.hpp"
#include "jpit/linalg.hpp"

namespace jpit {
namespace {

const char* gate_name(const Gate& g) {
  static constexpr const char* names[] = {"input", "const", "+", "*", "pp", "leaf"};
  return names[g.index()];
}

}  // namespace

SparsePoly expand(const Circuit& c, std::size_t cap) {
  const PrimeField& f = c.field();
  const std::size_t n = c.nvars();
  auto mark = c.reachable();
  std::vector<std::optional<SparsePoly>> val(c.node_count());
  for (std::size_t i = 0; i < c.node_count(); ++i) {
    if (!mark[i]) continue;
    const Gate& g = c.node(static_cast<NodeId>(i));
    try {
      SparsePoly p = std::visit(
          overloaded{
              [&](const Input& x) { return SparsePoly::variable(f, n, x.var); },
              [&](const Const& k) { return SparsePoly::constant(f, n, k.value); },
              [&](const Add& a) {
                SparsePoly acc(f, n);
                for (NodeId ch : a.children) acc = acc + *val[ch];
                return acc;
              },
              [&](const Mul& m) {
                SparsePoly acc = SparsePoly::constant(f, n, 1);
                for (NodeId ch : m.children) acc = acc.mul(*val[ch], cap);
                return acc;
              },
              [&](const PowProd& pp) {
                SparsePoly acc = SparsePoly::constant(f, n, 1);
                for (auto& [ch, e] : pp.factors) acc = acc.mul(val[ch]->pow(e, cap), cap);
                return acc;
              },
              [&](const Leaf& l) { return l.poly; },
          },
          g);
      if (p.sparsity() > cap) {
        throw CapExceeded("expansion sparsity", std::to_string(p.sparsity()) + " terms");
      }
      val[i] = std::move(p);
    } catch (const CapExceeded& e) {
      throw CapExceeded("expansion of gate " + std::to_string(i) + " (" + gate_name(g) + ")",
                        e.required());
    }
  }
  return *val[c.root()];
}

Verdict exact_zero_test(const Circuit& c, std::size_t cap) {
  SparsePoly p = expand(c, cap);
  Verdict v;
  v.method = Verdict::Method::Exact;
  if (p.is_zero()) {
    v.kind = Verdict::Kind::Zero;
  } else {
    v.kind = Verdict::Kind::Nonzero;
    v.witness_monomial = p.terms().front().monomial;
  }
  return v;
}

Verdict sz_random_test(const Circuit& c, Rng& rng, std::size_t trials) {
  Verdict v;
  v.method = Verdict::Method::Randomized;
  v.seed = rng.seed();
  Evaluator ev(c);
  for (std::size_t t = 0; t < trials; ++t) {
    auto pt = rng.field_point(c.field(), c.nvars());
    ++v.trials;
    if (ev(pt) != 0) {
      v.kind = Verdict::Kind::Nonzero;
      v.witness_point = std::move(pt);
      return v;
    }
  }
  v.kind = Verdict::Kind::Zero;
  double ratio = static_cast<double>(analyze(c).syntactic_degree) /
                 static_cast<double>(c.field().modulus());
  v.error_bound = 1.0;
  for (std::size_t t = 0; t < trials; ++t) v.error_bound *= std::min(1.0, ratio);
  return v;
}

namespace {

// All exponent vectors in `k` variables with total degree <= cap, in
// order of degree, so that each vector's predecessor (one fewer in its first
// nonzero slot) comes first.
std::vector<std::vector<std::uint32_t>> bounded_exponents(std::size_t k, std::uint64_t cap) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> cur(k, 0);
  for (std::uint64_t deg = 0; deg <= cap; ++deg) {
    // compositions of deg into k parts
    std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t i, std::uint64_t left) {
      if (i + 1 == k) {
        cur[i] = static_cast<std::uint32_t>(left);
        out.push_back(cur);
        return;
      }
      for (std::uint64_t a = left + 1; a-- > 0;) {
        cur[i] = static_cast<std::uint32_t>(a);
        rec(i + 1, left - a);
      }
    };
    if (k == 0) {
      if (deg == 0) out.emplace_back();
      continue;
    }
    rec(0, deg);
  }
  return out;
}

// True when some nonzero H(y) with deg H <= cap vanishes on `subset`.
bool has_annihilator(const std::vector<SparsePoly>& subset, std::uint64_t cap,
                     std::size_t dimension_cap) {
  const PrimeField& f = subset[0].field();
  const std::size_t n = subset[0].nvars();
  auto exps = bounded_exponents(subset.size(), cap);
  std::map<std::vector<std::uint32_t>, SparsePoly> pw;
  std::vector<const SparsePoly*> rows;
  for (const auto& a : exps) {
    auto it = std::find_if(a.begin(), a.end(), [](std::uint32_t e) { return e > 0; });
    if (it == a.end()) {
      pw.emplace(a, SparsePoly::constant(f, n, 1));
    } else {
      auto prev = a;
      std::size_t j = static_cast<std::size_t>(it - a.begin());
      --prev[j];
      pw.emplace(a, pw.at(prev) * subset[j]);
    }
    rows.push_back(&pw.at(a));
  }
  std::unordered_map<Monomial, std::size_t, MonomialHash> col;
  for (auto* p : rows) {
    for (const auto& t : p->terms()) col.emplace(t.monomial, col.size());
  }
  if (rows.size() > col.size()) return true;  // more unknowns than constraints
  if (rows.size() * col.size() > dimension_cap) {
    throw CapExceeded("annihilator linear system",
                      std::to_string(rows.size()) + " x " + std::to_string(col.size()));
  }
  Matrix m(rows.size(), std::vector<std::uint64_t>(col.size(), 0));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const auto& t : rows[r]->terms()) m[r][col.at(t.monomial)] = t.coeff;
  }
  return matrix_rank(f, std::move(m)) < rows.size();
}

}  // namespace

std::size_t annihilator_trdeg(const std::vector<SparsePoly>& fs, std::uint64_t degree_cap,
                              std::size_t dimension_cap) {
  if (fs.empty()) return 0;
  if (degree_cap == 0) {
    std::uint64_t d = 1;
    for (const auto& p : fs) d = std::max(d, p.total_degree());
    degree_cap = 1;
    for (std::size_t i = 0; i < fs.size(); ++i) degree_cap *= d;
  }
  // Algebraic independence is a matroid, so greedy extension finds a basis.
  std::vector<SparsePoly> basis;
  for (const auto& p : fs) {
    basis.push_back(p);
    if (has_annihilator(basis, degree_cap, dimension_cap)) basis.pop_back();
  }
  return basis.size();
}

}  // namespace jpit
