#pragma once

// Random polynomials and circuits shared by the unit and acceptance suites.

#include <cstdint>
#include <vector>

#include "jpit/circuit.hpp"
#include "jpit/poly.hpp"
#include "jpit/rng.hpp"

namespace jpit::testing {

inline SparsePoly var(const PrimeField& f, std::size_t n, std::size_t i) {
  return SparsePoly::variable(f, n, i);
}

// Up to `max_terms` terms with total degree <= max_deg and small signed
// coefficients (kept small so hand-built identities stay readable).
inline SparsePoly random_poly(const PrimeField& f, std::size_t n, Rng& rng,
                              std::size_t max_terms, std::uint32_t max_deg,
                              bool nonzero = true) {
  while (true) {
    std::vector<Term> terms;
    std::size_t count = 1 + rng.below(max_terms);
    for (std::size_t t = 0; t < count; ++t) {
      std::vector<std::uint32_t> e(n, 0);
      std::uint32_t deg = static_cast<std::uint32_t>(rng.below(max_deg + 1));
      for (std::uint32_t k = 0; k < deg; ++k) ++e[rng.below(n)];
      std::int64_t c = rng.range(-5, 5);
      if (c == 0) c = 1;
      terms.push_back({Monomial(std::move(e)), f.from_int(c)});
    }
    auto p = SparsePoly::from_terms(f, n, std::move(terms));
    if (!nonzero || !p.is_zero()) return p;
  }
}

// Random DAG over inputs, constants, leaves and all gate kinds. Nodes may be
// shared. Degrees stay small enough for exact expansion.
inline Circuit random_circuit(const PrimeField& f, std::size_t n, Rng& rng,
                              std::size_t gates) {
  Circuit c(f, n);
  std::vector<NodeId> pool;
  std::vector<std::uint64_t> deg;
  for (std::size_t i = 0; i < n; ++i) {
    pool.push_back(c.input(i));
    deg.push_back(1);
  }
  pool.push_back(c.constant(f.from_int(rng.range(-3, 3))));
  deg.push_back(0);
  pool.push_back(c.leaf(random_poly(f, n, rng, 3, 2)));
  deg.push_back(2);
  for (std::size_t g = 0; g < gates; ++g) {
    auto pick = [&]() { return rng.below(pool.size()); };
    std::uint64_t kind = rng.below(4);
    if (kind == 0) {
      std::size_t a = pick(), b = pick();
      pool.push_back(c.add({pool[a], pool[b]}));
      deg.push_back(std::max(deg[a], deg[b]));
    } else if (kind == 1) {
      std::size_t a = pick(), b = pick();
      if (deg[a] + deg[b] > 8) continue;
      pool.push_back(c.mul({pool[a], pool[b]}));
      deg.push_back(deg[a] + deg[b]);
    } else if (kind == 2) {
      std::size_t a = pick();
      std::uint64_t e = 1 + rng.below(3);
      if (deg[a] * e > 8) continue;
      pool.push_back(c.pow(pool[a], e));
      deg.push_back(deg[a] * e);
    } else {
      pool.push_back(c.leaf(random_poly(f, n, rng, 3, 2)));
      deg.push_back(2);
    }
  }
  // Root mixes the last few nodes so most of the DAG is reachable.
  std::vector<NodeId> tail;
  for (std::size_t i = pool.size() >= 3 ? pool.size() - 3 : 0; i < pool.size(); ++i) {
    tail.push_back(pool[i]);
  }
  c.add(tail);
  return c;
}

}  // namespace jpit::testing
