#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "jpit/circuit.hpp"
#include "jpit/poly.hpp"
#include "jpit/rng.hpp"

namespace jpit {

inline constexpr std::size_t kDefaultSparsityCap = 100000;

struct Verdict {
  enum class Kind { Zero, Nonzero };
  enum class Method { Exact, Randomized };

  Kind kind = Kind::Zero;
  Method method = Method::Exact;
  std::optional<Monomial> witness_monomial;  // exact, nonzero
  std::optional<std::vector<std::uint64_t>> witness_point;  // randomized, nonzero
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double error_bound = 0.0;  // randomized zero verdicts

  bool is_zero() const { return kind == Kind::Zero; }
};

// Bottom-up expansion. Throws CapExceeded naming the gate whose value grows
// past `sparsity_cap` terms.
SparsePoly expand(const Circuit& c, std::size_t sparsity_cap = kDefaultSparsityCap);

Verdict exact_zero_test(const Circuit& c, std::size_t sparsity_cap = kDefaultSparsityCap);

Verdict sz_random_test(const Circuit& c, Rng& rng, std::size_t trials);

// Size of a largest subset of `fs` admitting no nonzero annihilator of total
// degree <= degree_cap (0 selects max_deg^m). Exact once the cap reaches
// the true annihilator degree.
std::size_t annihilator_trdeg(const std::vector<SparsePoly>& fs,
                              std::uint64_t degree_cap = 0,
                              std::size_t dimension_cap = 20000000);

}  // namespace jpit
