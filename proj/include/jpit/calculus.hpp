#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "jpit/circuit.hpp"
#include "jpit/homo.hpp"
#include "jpit/linalg.hpp"
#include "jpit/rng.hpp"
#include "json.hpp"

namespace jpit {

inline constexpr std::size_t kDefaultTrials = 3;

// Circuit computing the partial derivative in x_var (0-based). Mul gates are
// read as power products; exponents enter as constant factors.
Circuit derive_circuit(const Circuit& c, std::size_t var);

struct JacobianMatrix {
  std::vector<Circuit> rows;  // f_1..f_m
  std::vector<std::size_t> cols;  // 0-based variable indices
  std::vector<std::vector<Circuit>> entries;  // entries[i][j] = d f_i / d x_{cols[j]}

  std::size_t row_count() const { return rows.size(); }
  std::size_t col_count() const { return cols.size(); }
  Matrix evaluate(std::span<const std::uint64_t> point) const;
  // Sum over rows of the largest entry degree: bounds every minor's degree.
  std::uint64_t minor_degree_bound() const;
};

JacobianMatrix jacobian(const std::vector<Circuit>& fs, const std::vector<std::size_t>& cols);
// All variables as columns.
JacobianMatrix jacobian(const std::vector<Circuit>& fs);

// Largest numeric rank over `trials` random points (per-trial streams split
// from `rng`). Never exceeds the rank over the function field.
std::size_t prob_rank(const JacobianMatrix& J, const Rng& rng, std::size_t trials);

struct TrdegReport {
  std::size_t trdeg = 0;
  std::vector<std::size_t> basis;  // indices into fs, 0-based
  std::vector<std::size_t> witness_cols;  // variable indices, 0-based
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t modulus = 0;
  std::vector<std::vector<std::uint64_t>> points;
  std::size_t witness_point = 0;  // index into points
};

TrdegReport trdeg(const std::vector<Circuit>& fs, const Rng& rng,
                  std::size_t trials = kDefaultTrials);
TrdegReport trdeg(const std::vector<SparsePoly>& fs, const Rng& rng,
                  std::size_t trials = kDefaultTrials);
nlohmann::json to_json(const TrdegReport& r);

bool is_faithful(const Homomorphism& phi, const std::vector<Circuit>& fs, const Rng& rng,
                 std::size_t trials = kDefaultTrials);

// rank of J_x(f) after substituting phi, compared with the rank of J_x(f).
// This is the hypothesis on psi under which faithful_compose(psi, r) is
// faithful for sets of trdeg <= r.
bool preserves_jacobian_rank(const Homomorphism& phi, const std::vector<Circuit>& fs,
                             const Rng& rng, std::size_t trials = kDefaultTrials);

}  // namespace jpit
