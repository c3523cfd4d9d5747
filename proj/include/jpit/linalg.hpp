#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "jpit/field.hpp"

namespace jpit {

// Row-major dense matrix of raw residues.
using Matrix = std::vector<std::vector<std::uint64_t>>;

// Rank by Gaussian elimination over F_p.
std::size_t matrix_rank(const PrimeField& field, Matrix m);

std::uint64_t determinant(const PrimeField& field, Matrix m);

// Indices of a maximal independent subset of rows, chosen greedily in
// ascending order (lexicographically first row basis).
std::vector<std::size_t> greedy_row_basis(const PrimeField& field,
                                          const Matrix& m);

Matrix transpose(const Matrix& m);

}  // namespace jpit
