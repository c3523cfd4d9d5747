#include <algorithm>
#include <optional>

#include "jpit/circuit.hpp"
#include "jpit/errors.hpp"

namespace jpit {
namespace {

bool is_atom(const Gate& g) {
  return std::holds_alternative<Input>(g) || std::holds_alternative<Const>(g);
}

// Per node: is the subcircuit a sum of monomials in inputs and constants?
std::vector<bool> sparse_shaped(const Circuit& c) {
  std::vector<bool> sparse(c.node_count(), false);
  std::vector<bool> mono(c.node_count(), false);
  for (std::size_t i = 0; i < c.node_count(); ++i) {
    const Gate& g = c.node(static_cast<NodeId>(i));
    if (is_atom(g)) {
      mono[i] = sparse[i] = true;
    } else if (auto* m = std::get_if<Mul>(&g)) {
      mono[i] = sparse[i] = std::all_of(m->children.begin(), m->children.end(),
                                        [&](NodeId ch) { return is_atom(c.node(ch)); });
    } else if (auto* p = std::get_if<PowProd>(&g)) {
      mono[i] = sparse[i] = std::all_of(p->factors.begin(), p->factors.end(),
                                        [&](const auto& f) { return is_atom(c.node(f.first)); });
    } else if (auto* a = std::get_if<Add>(&g)) {
      sparse[i] = std::all_of(a->children.begin(), a->children.end(),
                              [&](NodeId ch) { return sparse[ch]; });
    }
  }
  return sparse;
}

std::vector<NodeId> children_of(const Gate& g) {
  std::vector<NodeId> out;
  if (auto* a = std::get_if<Add>(&g)) out = a->children;
  if (auto* m = std::get_if<Mul>(&g)) out = m->children;
  if (auto* p = std::get_if<PowProd>(&g)) {
    for (auto& f : p->factors) out.push_back(f.first);
  }
  return out;
}

// Mul/PowProd that only scales a single child by constants.
std::optional<NodeId> scalar_multiple(const Circuit& c, const Gate& g) {
  std::optional<NodeId> other;
  if (auto* m = std::get_if<Mul>(&g)) {
    for (NodeId ch : m->children) {
      if (std::holds_alternative<Const>(c.node(ch))) continue;
      if (other) return std::nullopt;
      other = ch;
    }
  } else if (auto* p = std::get_if<PowProd>(&g)) {
    for (auto& [ch, e] : p->factors) {
      if (std::holds_alternative<Const>(c.node(ch))) continue;
      if (other || e != 1) return std::nullopt;
      other = ch;
    }
  }
  return other;
}

}  // namespace

Circuit leafify(const Circuit& c) {
  const auto sparse = sparse_shaped(c);
  const std::size_t n = c.node_count();
  const NodeId root = c.root();

  // A node is collapsed when it is sparse-shaped and no ancestor already
  // absorbed it. Constants below real gates stay constants.
  std::vector<bool> needed(n, false), collapse(n, false);
  needed[root] = true;
  for (std::size_t i = n; i-- > 0;) {
    if (!needed[i]) continue;
    const Gate& g = c.node(static_cast<NodeId>(i));
    if (std::holds_alternative<Leaf>(g)) continue;
    if (sparse[i] && (i == root || !std::holds_alternative<Const>(g))) {
      collapse[i] = true;
      continue;
    }
    for (NodeId ch : children_of(g)) needed[ch] = true;
  }

  // Expansions of sparse-shaped nodes, built lazily in index order.
  std::vector<std::optional<SparsePoly>> poly(n);
  auto expand = [&](std::size_t i) {
    for (std::size_t j = 0; j <= i; ++j) {
      if (!sparse[j] || poly[j]) continue;
      const Gate& g = c.node(static_cast<NodeId>(j));
      SparsePoly p(c.field(), c.nvars());
      if (auto* in = std::get_if<Input>(&g)) {
        p = SparsePoly::variable(c.field(), c.nvars(), in->var);
      } else if (auto* k = std::get_if<Const>(&g)) {
        p = SparsePoly::constant(c.field(), c.nvars(), k->value);
      } else if (auto* a = std::get_if<Add>(&g)) {
        for (NodeId ch : a->children) p = p + *poly[ch];
      } else if (auto* m = std::get_if<Mul>(&g)) {
        p = SparsePoly::constant(c.field(), c.nvars(), 1);
        for (NodeId ch : m->children) p = p * *poly[ch];
      } else if (auto* pp = std::get_if<PowProd>(&g)) {
        p = SparsePoly::constant(c.field(), c.nvars(), 1);
        for (auto& [ch, e] : pp->factors) p = p * poly[ch]->pow(e);
      }
      poly[j] = std::move(p);
    }
    return *poly[i];
  };

  Circuit out(c.field(), c.nvars());
  std::vector<NodeId> remap(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!needed[i]) continue;
    const Gate& g = c.node(static_cast<NodeId>(i));
    if (collapse[i]) {
      remap[i] = out.leaf(expand(i));
      continue;
    }
    remap[i] = std::visit(
        overloaded{
            [&](const Input&) -> NodeId { throw Error("unreachable: bare input"); },
            [&](const Const& k) { return out.constant(k.value); },
            [&](const Add& a) {
              std::vector<NodeId> ch;
              for (NodeId x : a.children) ch.push_back(remap[x]);
              return out.add(std::move(ch));
            },
            [&](const Mul& m) {
              std::vector<NodeId> ch;
              for (NodeId x : m.children) ch.push_back(remap[x]);
              return out.mul(std::move(ch));
            },
            [&](const PowProd& p) {
              std::vector<std::pair<NodeId, std::uint64_t>> fs;
              for (auto& [x, e] : p.factors) fs.emplace_back(remap[x], e);
              return out.powprod(std::move(fs));
            },
            [&](const Leaf& l) { return out.leaf(l.poly); },
        },
        g);
  }
  out.set_root(remap[root]);
  return out;
}

CircuitProfile analyze(const Circuit& input) {
  CircuitProfile prof;
  prof.var_degrees.assign(input.nvars(), 0);
  prof.occur_counts.assign(input.nvars(), 0);

  // Sharing of anything but inputs and constants breaks the tree shape.
  {
    auto mark = input.reachable();
    std::vector<int> parents(input.node_count(), 0);
    for (std::size_t i = 0; i < input.node_count(); ++i) {
      if (!mark[i]) continue;
      for (NodeId ch : children_of(input.node(static_cast<NodeId>(i)))) ++parents[ch];
    }
    for (std::size_t i = 0; i < input.node_count(); ++i) {
      if (parents[i] > 1 && !is_atom(input.node(static_cast<NodeId>(i)))) {
        prof.is_tree = false;
      }
    }
  }

  const Circuit c = leafify(input);
  const std::size_t n = c.node_count();
  const std::size_t nv = c.nvars();
  auto mark = c.reachable();
  std::vector<std::uint64_t> depth(n, 0), degree(n, 0);
  std::vector<std::vector<std::uint64_t>> vdeg(n);
  std::vector<std::uint64_t> uses(n, 0);
  uses[c.root()] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (!mark[i]) continue;
    for (NodeId ch : children_of(c.node(static_cast<NodeId>(i)))) ++uses[ch];
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!mark[i]) continue;
    const Gate& g = c.node(static_cast<NodeId>(i));
    vdeg[i].assign(nv, 0);
    if (auto* l = std::get_if<Leaf>(&g)) {
      depth[i] = 2;
      degree[i] = l->poly.total_degree();
      for (std::size_t v = 0; v < nv; ++v) {
        vdeg[i][v] = l->poly.degree_in(v);
        if (vdeg[i][v] > 0) prof.occur_counts[v] += uses[i];
      }
      prof.size += l->poly.sparsity() + l->poly.total_degree();
      ++prof.leaf_count;
      prof.max_leaf_sparsity = std::max(prof.max_leaf_sparsity, l->poly.sparsity());
    } else if (std::holds_alternative<Const>(g)) {
      depth[i] = 0;
    } else if (auto* a = std::get_if<Add>(&g)) {
      prof.size += 1 + a->children.size();
      for (NodeId ch : a->children) {
        depth[i] = std::max(depth[i], depth[ch] + 1);
        degree[i] = std::max(degree[i], degree[ch]);
        for (std::size_t v = 0; v < nv; ++v) vdeg[i][v] = std::max(vdeg[i][v], vdeg[ch][v]);
      }
    } else {
      std::vector<std::pair<NodeId, std::uint64_t>> fs;
      if (auto* m = std::get_if<Mul>(&g)) {
        for (NodeId ch : m->children) fs.emplace_back(ch, 1);
      } else {
        fs = std::get<PowProd>(g).factors;
      }
      for (auto& [ch, e] : fs) {
        prof.size += e + 1;
        prof.max_exponent = std::max(prof.max_exponent, e);
        degree[i] += e * degree[ch];
        for (std::size_t v = 0; v < nv; ++v) vdeg[i][v] += e * vdeg[ch][v];
      }
      if (auto s = scalar_multiple(c, g)) {
        depth[i] = depth[*s];
      } else {
        for (auto& f : fs) depth[i] = std::max(depth[i], depth[f.first] + 1);
      }
    }
  }

  const NodeId r = c.root();
  prof.depth = depth[r];
  prof.syntactic_degree = degree[r];
  prof.var_degrees = vdeg[r];
  const Gate& top = c.node(r);
  if (auto* a = std::get_if<Add>(&top)) {
    prof.top_fanin = a->children.size();
  } else if (auto* l = std::get_if<Leaf>(&top)) {
    prof.top_fanin = l->poly.sparsity();
  }
  return prof;
}

OccurReport validate_occur_k(const Circuit& c, std::uint64_t k,
                             std::optional<std::uint64_t> depth) {
  CircuitProfile prof = analyze(c);
  OccurReport rep;
  rep.not_a_formula = !prof.is_tree;
  for (std::size_t v = 0; v < prof.occur_counts.size(); ++v) {
    rep.max_occur = std::max(rep.max_occur, prof.occur_counts[v]);
    if (prof.occur_counts[v] > k) rep.offending_vars.push_back(v);
  }
  rep.depth_exceeded = depth.has_value() && prof.depth > *depth;
  rep.ok = !rep.not_a_formula && rep.offending_vars.empty() && !rep.depth_exceeded;
  return rep;
}

}  // namespace jpit
