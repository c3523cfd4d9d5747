#include "jpit/circuit.hpp"

#include <algorithm>
#include <set>

#include "jpit/errors.hpp"

namespace jpit {

NodeId Circuit::root() const {
  if (!root_) throw PreconditionError("circuit has no root");
  return *root_;
}

void Circuit::set_root(NodeId id) {
  check_child(id);
  root_ = id;
}

void Circuit::check_child(NodeId id) const {
  if (id >= nodes_.size()) {
    throw PreconditionError("node " + std::to_string(id) + " does not exist");
  }
}

NodeId Circuit::push(Gate g) {
  nodes_.push_back(std::move(g));
  root_ = static_cast<NodeId>(nodes_.size() - 1);
  return *root_;
}

NodeId Circuit::input(std::size_t var) {
  if (var >= nvars_) {
    throw ArityError("variable x" + std::to_string(var + 1) +
                     " outside declared range of " + std::to_string(nvars_));
  }
  return push(Input{var});
}

NodeId Circuit::constant(std::uint64_t value) {
  return push(Const{value % field_.modulus()});
}

NodeId Circuit::add(std::vector<NodeId> children) {
  if (children.empty()) throw PreconditionError("+ gate needs a child");
  for (NodeId c : children) check_child(c);
  return push(Add{std::move(children)});
}

NodeId Circuit::mul(std::vector<NodeId> children) {
  if (children.empty()) throw PreconditionError("* gate needs a child");
  for (NodeId c : children) check_child(c);
  return push(Mul{std::move(children)});
}

NodeId Circuit::powprod(std::vector<std::pair<NodeId, std::uint64_t>> factors) {
  if (factors.empty()) throw PreconditionError("power-product gate needs a factor");
  std::set<NodeId> seen;
  for (auto& [c, e] : factors) {
    check_child(c);
    if (e < 1) throw PreconditionError("exponent must be at least 1");
    if (!seen.insert(c).second) {
      throw PreconditionError("power-product children must be distinct");
    }
  }
  return push(PowProd{std::move(factors)});
}

NodeId Circuit::leaf(SparsePoly poly) {
  if (poly.field() != field_) throw FieldMismatch("leaf polynomial field");
  if (poly.nvars() != nvars_) throw ArityError("leaf polynomial arity");
  return push(Leaf{std::move(poly)});
}

std::vector<bool> Circuit::reachable() const {
  std::vector<bool> mark(nodes_.size(), false);
  if (!root_) return mark;
  mark[*root_] = true;
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    if (!mark[i]) continue;
    std::visit(overloaded{
                   [&](const Add& g) { for (NodeId c : g.children) mark[c] = true; },
                   [&](const Mul& g) { for (NodeId c : g.children) mark[c] = true; },
                   [&](const PowProd& g) { for (auto& f : g.factors) mark[f.first] = true; },
                   [](const auto&) {},
               },
               nodes_[i]);
  }
  return mark;
}

namespace {

// Appends the reachable part of `src` to `dst`; Input(i) is redirected to
// input_map[i] when supplied. Returns the id of src's root in dst.
NodeId copy_into(Circuit& dst, const Circuit& src,
                 const std::vector<NodeId>* input_map) {
  auto mark = src.reachable();
  std::vector<NodeId> remap(src.node_count(), 0);
  for (std::size_t i = 0; i < src.node_count(); ++i) {
    if (!mark[i]) continue;
    remap[i] = std::visit(
        overloaded{
            [&](const Input& g) {
              return input_map ? (*input_map)[g.var] : dst.input(g.var);
            },
            [&](const Const& g) { return dst.constant(g.value); },
            [&](const Add& g) {
              std::vector<NodeId> ch;
              for (NodeId c : g.children) ch.push_back(remap[c]);
              return dst.add(std::move(ch));
            },
            [&](const Mul& g) {
              std::vector<NodeId> ch;
              for (NodeId c : g.children) ch.push_back(remap[c]);
              return dst.mul(std::move(ch));
            },
            [&](const PowProd& g) {
              std::vector<std::pair<NodeId, std::uint64_t>> fs;
              for (auto& [c, e] : g.factors) {
                auto it = std::find_if(fs.begin(), fs.end(), [&](const auto& f) {
                  return f.first == remap[c];
                });
                if (it != fs.end()) {
                  it->second += e;
                } else {
                  fs.emplace_back(remap[c], e);
                }
              }
              return dst.powprod(std::move(fs));
            },
            [&](const Leaf& g) {
              if (!input_map) return dst.leaf(g.poly);
              // Leaf over the outer variables: rebuild as gates over the
              // mapped inputs.
              std::vector<NodeId> terms;
              for (const auto& t : g.poly.terms()) {
                std::vector<std::pair<NodeId, std::uint64_t>> fs;
                for (std::size_t v = 0; v < t.monomial.nvars(); ++v) {
                  if (t.monomial[v] > 0) {
                    fs.emplace_back((*input_map)[v], t.monomial[v]);
                  }
                }
                NodeId c = dst.constant(t.coeff);
                if (fs.empty()) {
                  terms.push_back(c);
                } else {
                  NodeId m = dst.powprod(std::move(fs));
                  terms.push_back(t.coeff == 1 ? m : dst.mul({c, m}));
                }
              }
              if (terms.empty()) return dst.constant(0);
              return terms.size() == 1 ? terms[0] : dst.add(std::move(terms));
            },
        },
        src.node(static_cast<NodeId>(i)));
  }
  return remap[src.root()];
}

void check_same_space(const Circuit& a, const Circuit& b) {
  if (a.field() != b.field()) throw FieldMismatch("circuits over different fields");
  if (a.nvars() != b.nvars()) throw ArityError("circuits over different variable sets");
}

}  // namespace

NodeId Circuit::import(const Circuit& other) {
  if (other.field_ != field_) throw FieldMismatch("imported circuit field");
  if (other.nvars_ != nvars_) throw ArityError("imported circuit arity");
  return copy_into(*this, other, nullptr);
}

Circuit Circuit::from_poly(const SparsePoly& p) {
  Circuit c(p.field(), p.nvars());
  c.leaf(p);
  return c;
}

Circuit circuit_sub(const Circuit& a, const Circuit& b) {
  check_same_space(a, b);
  Circuit c(a.field(), a.nvars());
  NodeId x = c.import(a);
  NodeId y = c.import(b);
  NodeId m = c.constant(a.field().modulus() - 1);
  NodeId ny = c.mul({m, y});
  c.add({x, ny});
  return c;
}

Circuit circuit_add(const Circuit& a, const Circuit& b) {
  check_same_space(a, b);
  Circuit c(a.field(), a.nvars());
  NodeId x = c.import(a);
  NodeId y = c.import(b);
  c.add({x, y});
  return c;
}

Circuit circuit_mul(const Circuit& a, const Circuit& b) {
  check_same_space(a, b);
  Circuit c(a.field(), a.nvars());
  NodeId x = c.import(a);
  NodeId y = c.import(b);
  c.mul({x, y});
  return c;
}

Circuit compose_circuits(const Circuit& outer, const std::vector<Circuit>& inner) {
  if (inner.size() != outer.nvars()) {
    throw ArityError("outer circuit expects " + std::to_string(outer.nvars()) +
                     " inputs, got " + std::to_string(inner.size()));
  }
  if (inner.empty()) throw PreconditionError("nothing to compose");
  Circuit c(inner[0].field(), inner[0].nvars());
  if (outer.field() != c.field()) throw FieldMismatch("outer circuit field");
  std::vector<NodeId> roots;
  for (const auto& t : inner) roots.push_back(c.import(t));
  NodeId r = copy_into(c, outer, &roots);
  c.set_root(r);
  return c;
}

Circuit compact(const Circuit& c) {
  Circuit out(c.field(), c.nvars());
  out.import(c);
  return out;
}

}  // namespace jpit
