#pragma once

// Instances of the generator classes, built together with their parameters,
// and the oracle that certifies a Kronecker modulus.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "jpit/calculus.hpp"
#include "jpit/circuit.hpp"
#include "jpit/errors.hpp"
#include "jpit/gens.hpp"
#include "jpit/homo.hpp"
#include "jpit/oracle.hpp"
#include "random_instances.hpp"

namespace jpit::testing {

struct ClassInstance {
  Circuit circuit;
  GeneratorParams params;
  bool zero = false;
};

inline Circuit subcircuit(const Circuit& c, NodeId id) {
  Circuit s = c;
  s.set_root(id);
  return compact(s);
}

// Children of a top + gate, or the circuit itself.
inline std::vector<Circuit> top_terms(const Circuit& c) {
  if (auto* a = std::get_if<Add>(&c.node(c.root()))) {
    std::vector<Circuit> out;
    for (NodeId ch : a->children) out.push_back(subcircuit(c, ch));
    return out;
  }
  return {c};
}

inline bool depends_on(const Circuit& c, std::size_t var) {
  return analyze(c).var_degrees[var] > 0;
}

inline Homomorphism shift_map(const PrimeField& f, std::size_t n, std::size_t i) {
  Homomorphism h = identity_map(f, n);
  h.images[i] = h.images[i] + SparsePoly::constant(f, n, 1);
  h.kind = "shift";
  return h;
}

// The set a faithful map has to respect: the top terms, or after the fanin
// reduction the terms of C(x + e_i) - C(x) for the first i where that
// difference is nonzero.
inline std::vector<Circuit> faithful_target(const Circuit& c, bool shifted) {
  auto ts = top_terms(c);
  if (!shifted) return ts;
  const PrimeField& f = c.field();
  for (std::size_t i = 0; i < c.nvars(); ++i) {
    Homomorphism sh = shift_map(f, c.nvars(), i);
    if (exact_zero_test(circuit_sub(apply_hom(sh, c), c)).is_zero()) continue;
    std::vector<Circuit> out;
    for (const auto& t : ts) {
      if (!depends_on(t, i)) continue;
      out.push_back(t);
      out.push_back(apply_hom(sh, t));
    }
    return out;
  }
  return ts;
}

// Smallest p <= limit whose stream block map is faithful to the instance's
// target set, judged by the Jacobian oracle.
inline std::optional<std::uint64_t> certified_p(int theorem, const ClassInstance& inst,
                                                std::uint64_t limit, const Rng& rng) {
  const PrimeField& f = inst.circuit.field();
  GeneratorParams P = inst.params;
  bool shifted = P.top_fanin() > 2 * P.k;
  if (theorem == 2 && P.D <= 3) shifted = false;
  auto target = faithful_target(inst.circuit, shifted);
  for (std::uint64_t p = 2; p <= limit; ++p) {
    P.p_max = p;
    P.cap = UINT64_MAX;
    Homomorphism map = make_generator(theorem, f, P).block_map(p - 2);
    if (is_faithful(map, target, rng)) return p;
  }
  return std::nullopt;
}

// ---- theorem 1: C(T_1..T_m), T_i products of affine forms, trdeg <= r ----

inline Circuit product_of_forms(const PrimeField& f, const std::vector<SparsePoly>& forms) {
  Circuit c(f, forms[0].nvars());
  std::vector<NodeId> leaves;
  for (const auto& l : forms) leaves.push_back(c.leaf(l));
  if (leaves.size() == 1) {
    c.set_root(leaves[0]);
  } else {
    c.mul(leaves);
  }
  return c;
}

inline Circuit random_outer(const PrimeField& f, std::size_t m, Rng& rng) {
  while (true) {
    Circuit c(f, m);
    std::vector<NodeId> pool;
    std::vector<std::uint64_t> deg;
    for (std::size_t i = 0; i < m; ++i) {
      pool.push_back(c.input(i));
      deg.push_back(1);
    }
    std::size_t gates = 1 + rng.below(3);
    for (std::size_t g = 0; g < gates; ++g) {
      std::size_t a = rng.below(pool.size()), b = rng.below(pool.size());
      if (rng.coin() && deg[a] + deg[b] <= 2) {
        pool.push_back(c.mul({pool[a], pool[b]}));
        deg.push_back(deg[a] + deg[b]);
      } else if (a != b) {
        NodeId k = c.constant(f.from_int(rng.range(-2, 2) | 1));
        NodeId scaled = c.mul({k, pool[b]});
        pool.push_back(c.add({pool[a], scaled}));
        deg.push_back(std::max(deg[a], deg[b]));
      }
    }
    c.set_root(pool.back());
    Circuit out = compact(c);
    if (analyze(out).size <= 10) return out;
  }
}

inline ClassInstance theorem1_instance(const PrimeField& f, Rng& rng, bool zero,
                                       std::size_t max_n = 6) {
  while (true) {
    const std::size_t n = 2 + rng.below(max_n - 1);
    const std::size_t r = 1 + rng.below(std::min<std::size_t>(2, n));
    const std::size_t m = zero ? 2 + rng.below(3) : 1 + rng.below(4);
    const std::uint64_t dmax = 1 + rng.below(3);
    std::vector<SparsePoly> base;
    for (std::size_t j = 0; j < r; ++j) {
      SparsePoly l(f, n);
      while (l.is_zero()) {
        for (int t = 0; t < 2; ++t) l = l + var(f, n, rng.below(n)).scale(f.from_int(rng.range(1, 3)));
      }
      base.push_back(l);
    }
    auto affine = [&]() {
      while (true) {
        SparsePoly l = SparsePoly::constant(f, n, f.from_int(rng.range(-2, 2)));
        for (const auto& b : base) l = l + b.scale(f.from_int(rng.range(-2, 2)));
        if (l.total_degree() == 1) return l;
      }
    };
    std::vector<Circuit> ts;
    std::uint64_t d = 1;
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<SparsePoly> forms;
      std::uint64_t di = 1 + rng.below(dmax);
      for (std::uint64_t j = 0; j < di; ++j) forms.push_back(affine());
      d = std::max(d, di);
      ts.push_back(product_of_forms(f, forms));
    }
    Circuit outer(f, m);
    if (zero && rng.coin()) {
      // annihilator: T_2 = T_1^2 and C = y_2 - y_1^2
      auto t1 = expand(ts[0]);
      if (2 * t1.total_degree() > 3) continue;
      ts[1] = circuit_mul(ts[0], ts[0]);
      d = std::max(d, 2 * t1.total_degree());
      NodeId y1 = outer.input(0), y2 = outer.input(1);
      NodeId sq = outer.pow(y1, 2);
      NodeId neg = outer.mul({outer.constant(f.from_int(-1)), sq});
      outer.add({y2, neg});
    } else {
      Circuit a = random_outer(f, m, rng);
      outer = zero ? circuit_sub(a, Circuit::from_poly(expand(a))) : a;
    }
    Circuit c = compose_circuits(outer, ts);
    bool is_zero = exact_zero_test(c).is_zero();
    if (is_zero != zero) continue;
    auto prof = analyze(outer);
    ClassInstance inst{c, {}, zero};
    inst.params.n = n;
    inst.params.s = std::max<std::uint64_t>(prof.size, 1);
    inst.params.d = d;
    inst.params.m = m;
    inst.params.r = r;
    inst.params.c_degree = std::max<std::uint64_t>(prof.syntactic_degree, 1);
    return inst;
  }
}

// ---- occur-k formulas ----

// Leaf over its own variable subset; each variable used by at most k leaves.
struct LeafPool {
  std::vector<std::size_t> uses;
  std::size_t k;
};

inline std::optional<SparsePoly> random_leaf(const PrimeField& f, std::size_t n, LeafPool& pool,
                                             Rng& rng, std::size_t max_terms, std::uint32_t max_deg) {
  std::vector<std::size_t> free;
  for (std::size_t v = 0; v < n; ++v) {
    if (pool.uses[v] < pool.k) free.push_back(v);
  }
  if (free.empty()) return std::nullopt;
  std::size_t want = 1 + rng.below(std::min<std::size_t>(free.size(), 2));
  std::vector<std::size_t> vars;
  while (vars.size() < want) {
    std::size_t v = free[rng.below(free.size())];
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
  }
  while (true) {
    std::vector<Term> terms;
    std::size_t count = 1 + rng.below(max_terms);
    for (std::size_t t = 0; t < count; ++t) {
      std::vector<std::uint32_t> e(n, 0);
      std::uint32_t deg = static_cast<std::uint32_t>(rng.below(max_deg + 1));
      for (std::uint32_t j = 0; j < deg; ++j) ++e[vars[rng.below(vars.size())]];
      std::int64_t c = rng.range(-3, 3);
      terms.push_back({Monomial(std::move(e)), f.from_int(c == 0 ? 1 : c)});
    }
    auto p = SparsePoly::from_terms(f, n, std::move(terms));
    if (p.total_degree() == 0) continue;
    for (std::size_t v : vars) {
      if (p.depends_on(v)) ++pool.uses[v];
    }
    return p;
  }
}

inline void fill_params(ClassInstance& inst, std::size_t k, std::size_t D) {
  auto prof = analyze(inst.circuit);
  inst.params.n = inst.circuit.nvars();
  inst.params.s = std::max<std::uint64_t>(prof.size, 1);
  inst.params.k = k;
  inst.params.D = D;
  inst.params.m = prof.top_fanin;
  inst.params.degree = std::max<std::uint64_t>(prof.syntactic_degree, 1);
}

// Depth-4 occur-k: sum of power products of sparse leaves. `max_degree`
// bounds the total degree of each term.
inline ClassInstance depth4_instance(const PrimeField& f, Rng& rng, std::size_t k, std::size_t n,
                                     std::size_t max_terms_top, std::uint64_t max_degree, bool zero) {
  while (true) {
    LeafPool pool{std::vector<std::size_t>(n, 0), k};
    Circuit c(f, n);
    std::vector<NodeId> terms;
    std::size_t m = 1 + rng.below(max_terms_top);
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<std::pair<NodeId, std::uint64_t>> factors;
      std::uint64_t deg = 0;
      std::size_t nf = 1 + rng.below(2);
      for (std::size_t j = 0; j < nf; ++j) {
        auto leaf = random_leaf(f, n, pool, rng, 5, 2);
        if (!leaf) break;
        std::uint64_t e = 1 + rng.below(3);
        while (e > 1 && deg + e * leaf->total_degree() > max_degree) --e;
        if (deg + e * leaf->total_degree() > max_degree) break;
        deg += e * leaf->total_degree();
        factors.emplace_back(c.leaf(*leaf), e);
      }
      if (!factors.empty()) terms.push_back(c.powprod(std::move(factors)));
    }
    if (terms.empty()) continue;
    if (zero) {
      // every term again, negated, over fresh copies of its leaves
      const std::size_t count = terms.size();
      for (std::size_t i = 0; i < count; ++i) {
        NodeId cp = c.import(subcircuit(c, terms[i]));
        terms.push_back(c.mul({c.constant(f.from_int(-1)), cp}));
      }
    }
    if (terms.size() == 1) {
      c.set_root(terms[0]);
    } else {
      c.add(terms);
    }
    c = compact(c);
    if (exact_zero_test(c).is_zero() != zero) continue;
    if (!validate_occur_k(c, zero ? 2 * k : k, 4).ok) continue;
    ClassInstance inst{c, {}, zero};
    fill_params(inst, zero ? 2 * k : k, 4);
    return inst;
  }
}

// Depth-5 occur-1, one of two shapes over linear-ish leaves:
//   (L1 L2 + L3)^e L4            product on top
//   (L1 + L2)^e L3 + L4^e'       sum on top
inline ClassInstance depth5_instance(const PrimeField& f, Rng& rng, std::size_t n) {
  while (true) {
    LeafPool pool{std::vector<std::size_t>(n, 0), 1};
    Circuit c(f, n);
    std::vector<NodeId> leaves;
    for (int i = 0; i < 4; ++i) {
      auto l = random_leaf(f, n, pool, rng, 2, 1);
      if (!l) break;
      leaves.push_back(c.leaf(*l));
    }
    if (leaves.size() < 4) continue;
    std::uint64_t e = 1 + rng.below(2);
    if (rng.coin()) {
      NodeId inner = c.add({c.mul({leaves[0], leaves[1]}), leaves[2]});
      c.powprod({{inner, e}, {leaves[3], 1}});
    } else {
      NodeId t1 = c.powprod({{c.add({leaves[0], leaves[1]}), e}, {leaves[2], 1}});
      NodeId t2 = c.pow(leaves[3], 1 + rng.below(2));
      c.add({t1, t2});
    }
    c = compact(c);
    if (exact_zero_test(c).is_zero()) continue;
    if (!validate_occur_k(c, 1, 5).ok) continue;
    ClassInstance inst{c, {}, false};
    fill_params(inst, 1, 5);
    return inst;
  }
}

}  // namespace jpit::testing
