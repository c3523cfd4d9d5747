#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "jpit/circuit.hpp"
#include "jpit/oracle.hpp"
#include "jpit/poly.hpp"
#include "json.hpp"

namespace jpit {

inline constexpr std::uint64_t kKroneckerExponentCap = 1ULL << 40;

// x_i -> images[i], each image a polynomial over the target variables.
struct Homomorphism {
  Homomorphism(const PrimeField& f, std::size_t source, std::size_t target)
      : field(f), source_nvars(source), target_nvars(target) {}

  PrimeField field;
  std::size_t source_nvars = 0;
  std::size_t target_nvars = 0;
  std::vector<SparsePoly> images;
  std::string kind;
  nlohmann::json params = nlohmann::json::object();
  std::vector<std::string> target_names;

  // Values of all images at a point of the target space.
  std::vector<std::uint64_t> evaluate(std::span<const std::uint64_t> assignment) const;
};

Homomorphism identity_map(const PrimeField& field, std::size_t n);
// Every variable to zero in `target_nvars` target variables.
Homomorphism zero_map(const PrimeField& field, std::size_t n, std::size_t target_nvars = 0);
// x_i -> sum_{j=1..k} y_j alpha^{i j}, i and j 1-based.
Homomorphism vandermonde_map(const PrimeField& field, std::size_t n, std::size_t k,
                             std::uint64_t alpha);
// x_i -> u^{base^i mod p}; p = 0 means no reduction.
Homomorphism kronecker_map(const PrimeField& field, std::size_t n, std::uint64_t base,
                           std::uint64_t p, std::uint64_t exponent_cap = kKroneckerExponentCap);
// x_i -> sum_{j=1..r} y_j t^{i j} + psi(x_i). Target variables are psi's,
// then t, then y_1..y_r; `tag` is appended to the new variable names.
Homomorphism faithful_compose(const Homomorphism& psi, std::size_t r,
                              const std::string& tag = "");
// x -> b(a(x)).
Homomorphism compose(const Homomorphism& a, const Homomorphism& b,
                     std::size_t sparsity_cap = kDefaultSparsityCap);

SparsePoly apply_hom(const Homomorphism& phi, const SparsePoly& p,
                     std::size_t sparsity_cap = kDefaultSparsityCap);
// Inputs become leaves holding their images; leaves are substituted
// symbolically.
Circuit apply_hom(const Homomorphism& phi, const Circuit& c,
                  std::size_t sparsity_cap = kDefaultSparsityCap);

nlohmann::json to_json(const Homomorphism& phi);
Homomorphism homomorphism_from_json(const nlohmann::json& j);

}  // namespace jpit
