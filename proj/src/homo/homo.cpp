#include "jpit/homo.hpp"

#include "jpit/errors.hpp"

namespace jpit {
namespace {

std::vector<std::string> numbered(const std::string& stem, std::size_t count,
                                  const std::string& tag = "") {
  std::vector<std::string> out;
  for (std::size_t j = 1; j <= count; ++j) out.push_back(stem + std::to_string(j) + tag);
  return out;
}

SparsePoly monomial_poly(const PrimeField& f, std::size_t nvars, std::uint64_t coeff,
                         std::vector<std::pair<std::size_t, std::uint64_t>> powers) {
  std::vector<std::uint32_t> e(nvars, 0);
  for (auto [v, k] : powers) e[v] += static_cast<std::uint32_t>(k);
  return SparsePoly::from_terms(f, nvars, {{Monomial(std::move(e)), coeff}});
}

}  // namespace

std::vector<std::uint64_t> Homomorphism::evaluate(std::span<const std::uint64_t> a) const {
  if (a.size() != target_nvars) {
    throw ArityError("assignment of length " + std::to_string(a.size()) + " for a map into " +
                     std::to_string(target_nvars) + " variables");
  }
  std::vector<std::uint64_t> out;
  out.reserve(images.size());
  for (const auto& img : images) out.push_back(img.evaluate(a));
  return out;
}

Homomorphism identity_map(const PrimeField& f, std::size_t n) {
  Homomorphism h{f, n, n};
  for (std::size_t i = 0; i < n; ++i) h.images.push_back(SparsePoly::variable(f, n, i));
  h.kind = "identity";
  h.target_names = numbered("x", n);
  return h;
}

Homomorphism zero_map(const PrimeField& f, std::size_t n, std::size_t target_nvars) {
  Homomorphism h{f, n, target_nvars};
  h.images.assign(n, SparsePoly(f, target_nvars));
  h.kind = "zero";
  h.target_names = numbered("z", target_nvars);
  return h;
}

Homomorphism vandermonde_map(const PrimeField& f, std::size_t n, std::size_t k,
                             std::uint64_t alpha) {
  if (k < 1) throw PreconditionError("vandermonde map needs k >= 1");
  alpha %= f.modulus();
  if (alpha == 0) throw PreconditionError("vandermonde map needs a nonzero alpha");
  Homomorphism h{f, n, k};
  for (std::size_t i = 1; i <= n; ++i) {
    std::vector<Term> terms;
    std::uint64_t ai = f.pow(alpha, i);
    std::uint64_t c = 1;
    for (std::size_t j = 1; j <= k; ++j) {
      c = f.mul(c, ai);
      std::vector<std::uint32_t> e(k, 0);
      e[j - 1] = 1;
      terms.push_back({Monomial(std::move(e)), c});
    }
    h.images.push_back(SparsePoly::from_terms(f, k, std::move(terms)));
  }
  h.kind = "vandermonde";
  h.params = {{"n", n}, {"k", k}, {"alpha", alpha}};
  h.target_names = numbered("y", k);
  return h;
}

Homomorphism kronecker_map(const PrimeField& f, std::size_t n, std::uint64_t base,
                           std::uint64_t p, std::uint64_t cap) {
  if (base < 2) throw PreconditionError("kronecker base must be at least 2");
  Homomorphism h{f, n, 1};
  unsigned __int128 e = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    e *= base;
    if (p != 0) e %= p;
    if (e > cap) {
      throw CapExceeded("kronecker exponent",
                        std::to_string(base) + "^" + std::to_string(i) + " > " +
                            std::to_string(cap));
    }
    h.images.push_back(monomial_poly(f, 1, 1, {{0, static_cast<std::uint64_t>(e)}}));
  }
  h.kind = "kronecker";
  h.params = {{"n", n}, {"base", base}, {"p", p}};
  h.target_names = {"u"};
  return h;
}

Homomorphism faithful_compose(const Homomorphism& psi, std::size_t r, const std::string& tag) {
  if (r < 1) throw PreconditionError("faithful composition needs r >= 1");
  const PrimeField& f = psi.field;
  const std::size_t base = psi.target_nvars;
  const std::size_t m = base + 1 + r;
  const std::size_t t = base;
  Homomorphism h{f, psi.source_nvars, m};
  for (std::size_t i = 1; i <= psi.source_nvars; ++i) {
    SparsePoly img = psi.images[i - 1].extend(m);
    for (std::size_t j = 1; j <= r; ++j) {
      img = img + monomial_poly(f, m, 1, {{base + j, 1}, {t, i * j}});
    }
    h.images.push_back(std::move(img));
  }
  h.kind = "faithful";
  h.params = {{"r", r}, {"psi", to_json(psi)}};
  h.target_names = psi.target_names;
  h.target_names.push_back("t" + tag);
  for (auto& s : numbered("y", r, tag)) h.target_names.push_back(s);
  return h;
}

Homomorphism compose(const Homomorphism& a, const Homomorphism& b, std::size_t cap) {
  if (a.target_nvars != b.source_nvars) {
    throw ArityError("cannot compose a map into " + std::to_string(a.target_nvars) +
                     " variables with a map from " + std::to_string(b.source_nvars));
  }
  Homomorphism h{a.field, a.source_nvars, b.target_nvars};
  for (const auto& img : a.images) h.images.push_back(img.substitute(b.images, cap));
  h.kind = "composite";
  h.params = {{"first", to_json(a)}, {"second", to_json(b)}};
  h.target_names = b.target_names;
  return h;
}

SparsePoly apply_hom(const Homomorphism& phi, const SparsePoly& p, std::size_t cap) {
  if (p.nvars() != phi.source_nvars) {
    throw ArityError("polynomial in " + std::to_string(p.nvars()) +
                     " variables, map expects " + std::to_string(phi.source_nvars));
  }
  if (phi.source_nvars == 0) return SparsePoly::constant(phi.field, phi.target_nvars, p.constant_term());
  return p.substitute(phi.images, cap);
}

Circuit apply_hom(const Homomorphism& phi, const Circuit& c, std::size_t cap) {
  if (c.nvars() != phi.source_nvars) {
    throw ArityError("circuit in " + std::to_string(c.nvars()) + " variables, map expects " +
                     std::to_string(phi.source_nvars));
  }
  Circuit out(c.field(), phi.target_nvars);
  auto mark = c.reachable();
  std::vector<NodeId> remap(c.node_count(), 0);
  for (std::size_t i = 0; i < c.node_count(); ++i) {
    if (!mark[i]) continue;
    remap[i] = std::visit(
        overloaded{
            [&](const Input& g) { return out.leaf(phi.images[g.var]); },
            [&](const Const& g) { return out.constant(g.value); },
            [&](const Add& g) {
              std::vector<NodeId> ch;
              for (NodeId x : g.children) ch.push_back(remap[x]);
              return out.add(std::move(ch));
            },
            [&](const Mul& g) {
              std::vector<NodeId> ch;
              for (NodeId x : g.children) ch.push_back(remap[x]);
              return out.mul(std::move(ch));
            },
            [&](const PowProd& g) {
              std::vector<std::pair<NodeId, std::uint64_t>> fs;
              for (auto& [x, e] : g.factors) fs.emplace_back(remap[x], e);
              return out.powprod(std::move(fs));
            },
            [&](const Leaf& g) { return out.leaf(apply_hom(phi, g.poly, cap)); },
        },
        c.node(static_cast<NodeId>(i)));
  }
  out.set_root(remap[c.root()]);
  return out;
}

nlohmann::json to_json(const Homomorphism& phi) {
  nlohmann::json imgs = nlohmann::json::array();
  for (const auto& p : phi.images) imgs.push_back(p.to_string());
  return {{"kind", phi.kind},
          {"modulus", phi.field.modulus()},
          {"source_nvars", phi.source_nvars},
          {"target_nvars", phi.target_nvars},
          {"target_names", phi.target_names},
          {"params", phi.params},
          {"images", imgs}};
}

Homomorphism homomorphism_from_json(const nlohmann::json& j) {
  PrimeField f(j.at("modulus").get<std::uint64_t>());
  Homomorphism h{f, j.at("source_nvars").get<std::size_t>(),
                 j.at("target_nvars").get<std::size_t>()};
  h.kind = j.at("kind").get<std::string>();
  h.params = j.at("params");
  h.target_names = j.at("target_names").get<std::vector<std::string>>();
  for (const auto& s : j.at("images")) {
    h.images.push_back(parse_sparse_poly(s.get<std::string>(), f, h.target_nvars));
  }
  if (h.images.size() != h.source_nvars) throw ArityError("image count disagrees with source_nvars");
  return h;
}

}  // namespace jpit
