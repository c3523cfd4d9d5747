#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "jpit/field.hpp"
#include "jpit/poly.hpp"

namespace jpit {

using NodeId = std::uint32_t;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

struct Input {
  std::size_t var;
};
struct Const {
  std::uint64_t value;
};
struct Add {
  std::vector<NodeId> children;
};
struct Mul {
  std::vector<NodeId> children;
};
struct PowProd {
  std::vector<std::pair<NodeId, std::uint64_t>> factors;
};
struct Leaf {
  SparsePoly poly;
};

using Gate = std::variant<Input, Const, Add, Mul, PowProd, Leaf>;

// Append-only DAG. Children always precede their parents, so node order is
// a topological order. The root is the most recently added node unless
// set_root() says otherwise.
class Circuit {
 public:
  Circuit(const PrimeField& field, std::size_t nvars)
      : field_(field), nvars_(nvars) {}

  const PrimeField& field() const { return field_; }
  std::size_t nvars() const { return nvars_; }
  std::size_t node_count() const { return nodes_.size(); }
  const Gate& node(NodeId id) const { return nodes_.at(id); }
  const std::vector<Gate>& nodes() const { return nodes_; }
  NodeId root() const;
  bool has_root() const { return root_.has_value(); }
  void set_root(NodeId id);

  NodeId input(std::size_t var);
  NodeId constant(std::uint64_t value);
  NodeId add(std::vector<NodeId> children);
  NodeId mul(std::vector<NodeId> children);
  NodeId powprod(std::vector<std::pair<NodeId, std::uint64_t>> factors);
  NodeId pow(NodeId child, std::uint64_t e) { return powprod({{child, e}}); }
  NodeId leaf(SparsePoly poly);

  // Copies the part of `other` reachable from its root; returns the new id
  // of that root. Fields and arities must agree.
  NodeId import(const Circuit& other);

  static Circuit from_poly(const SparsePoly& p);

  // Nodes reachable from the root.
  std::vector<bool> reachable() const;

 private:
  NodeId push(Gate g);
  void check_child(NodeId id) const;

  PrimeField field_;
  std::size_t nvars_;
  std::vector<Gate> nodes_;
  std::optional<NodeId> root_;
};

// a - b, a + b, a * b over a shared variable set.
Circuit circuit_sub(const Circuit& a, const Circuit& b);
Circuit circuit_add(const Circuit& a, const Circuit& b);
Circuit circuit_mul(const Circuit& a, const Circuit& b);

// C(T_1, ..., T_m): `outer` is over m variables; inputs become the roots of
// `inner` (all over one n-variable set). Inner circuits are shared, not
// duplicated.
Circuit compose_circuits(const Circuit& outer, const std::vector<Circuit>& inner);

// Drops nodes unreachable from the root.
Circuit compact(const Circuit& c);

// ---- text format ----

Circuit parse_circuit(std::string_view text, const PrimeField& field);
// Header field, if any, wins when `field` is absent.
Circuit parse_circuit(std::string_view text);
std::string serialize_circuit(const Circuit& c);
SparsePoly parse_sparse_poly(std::string_view text, const PrimeField& field,
                             std::size_t nvars);

// ---- evaluation ----

// Reusable scratch for repeated evaluation of one circuit.
class Evaluator {
 public:
  explicit Evaluator(const Circuit& c);
  std::uint64_t operator()(std::span<const std::uint64_t> point);

 private:
  const Circuit* c_;
  std::vector<NodeId> order_;
  std::vector<std::uint64_t> values_;
};

FieldElement eval_circuit(const Circuit& c,
                          const std::vector<FieldElement>& point);
std::uint64_t eval_circuit(const Circuit& c, std::span<const std::uint64_t> point);

// ---- analysis ----

// Collapses every maximal sparse-shaped subcircuit (sums of monomials in
// inputs and constants) into a Leaf. Existing leaves are left alone.
Circuit leafify(const Circuit& c);

struct CircuitProfile {
  std::uint64_t size = 0;
  std::uint64_t depth = 0;
  std::uint64_t syntactic_degree = 0;
  std::vector<std::uint64_t> var_degrees;  // per-variable syntactic bounds
  std::vector<std::uint64_t> occur_counts;
  std::uint64_t top_fanin = 1;
  std::size_t leaf_count = 0;
  std::size_t max_leaf_sparsity = 0;
  std::uint64_t max_exponent = 1;
  bool is_tree = true;
};

// Profile of leafify(c). Sizes: + gates 1, product gates the sum of their
// exponents, leaves term count plus total degree; plus one per edge. Depth
// counts gate layers above the leaves, plus 2.
CircuitProfile analyze(const Circuit& c);

struct OccurReport {
  bool ok = true;
  std::uint64_t max_occur = 0;
  std::vector<std::size_t> offending_vars;  // 0-based
  bool not_a_formula = false;
  bool depth_exceeded = false;
};

// Optional `depth` additionally requires profile depth <= depth.
OccurReport validate_occur_k(const Circuit& c, std::uint64_t k,
                             std::optional<std::uint64_t> depth = std::nullopt);

}  // namespace jpit
