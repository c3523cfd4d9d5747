#include "jpit/circuit.hpp"
#include "jpit/errors.hpp"

namespace jpit {

Evaluator::Evaluator(const Circuit& c) : c_(&c), values_(c.node_count(), 0) {
  auto mark = c.reachable();
  for (std::size_t i = 0; i < mark.size(); ++i) {
    if (mark[i]) order_.push_back(static_cast<NodeId>(i));
  }
}

std::uint64_t Evaluator::operator()(std::span<const std::uint64_t> point) {
  if (point.size() != c_->nvars()) {
    throw ArityError("point of length " + std::to_string(point.size()) +
                     " for a circuit in " + std::to_string(c_->nvars()) + " variables");
  }
  const PrimeField& f = c_->field();
  for (NodeId id : order_) {
    values_[id] = std::visit(
        overloaded{
            [&](const Input& g) { return point[g.var]; },
            [&](const Const& g) { return g.value; },
            [&](const Add& g) {
              std::uint64_t acc = 0;
              for (NodeId ch : g.children) acc = f.add(acc, values_[ch]);
              return acc;
            },
            [&](const Mul& g) {
              std::uint64_t acc = 1;
              for (NodeId ch : g.children) acc = f.mul(acc, values_[ch]);
              return acc;
            },
            [&](const PowProd& g) {
              std::uint64_t acc = 1;
              for (auto& [ch, e] : g.factors) acc = f.mul(acc, f.pow(values_[ch], e));
              return acc;
            },
            [&](const Leaf& g) { return g.poly.evaluate(point); },
        },
        c_->node(id));
  }
  return values_[c_->root()];
}

std::uint64_t eval_circuit(const Circuit& c, std::span<const std::uint64_t> point) {
  Evaluator ev(c);
  return ev(point);
}

FieldElement eval_circuit(const Circuit& c, const std::vector<FieldElement>& point) {
  std::vector<std::uint64_t> raw;
  raw.reserve(point.size());
  for (const auto& e : point) {
    if (e.field() != c.field()) throw FieldMismatch("evaluation point field");
    raw.push_back(e.value());
  }
  return FieldElement(c.field(), eval_circuit(c, std::span<const std::uint64_t>(raw)));
}

}  // namespace jpit
