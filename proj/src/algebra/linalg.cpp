#include "jpit/linalg.hpp"

#include <utility>

namespace jpit {
namespace {

// Reduces `row` against an echelon basis kept as (pivot column, row) pairs
// with unit pivots. Returns true if a nonzero remainder was added.
bool insert_row(const PrimeField& f,
                std::vector<std::pair<std::size_t, std::vector<std::uint64_t>>>& basis,
                std::vector<std::uint64_t> row) {
  for (const auto& [pc, b] : basis) {
    std::uint64_t c = row[pc];
    if (c == 0) continue;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (b[j] != 0) row[j] = f.sub(row[j], f.mul(c, b[j]));
    }
  }
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] == 0) continue;
    std::uint64_t inv = f.inv(row[j]);
    for (auto& x : row) x = f.mul(x, inv);
    basis.emplace_back(j, std::move(row));
    return true;
  }
  return false;
}

}  // namespace

std::size_t matrix_rank(const PrimeField& f, Matrix m) {
  std::size_t rank = 0;
  if (m.empty()) return 0;
  const std::size_t rows = m.size();
  const std::size_t cols = m[0].size();
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    std::uint64_t inv = f.inv(m[rank][c]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (m[r][c] == 0) continue;
      std::uint64_t factor = f.mul(m[r][c], inv);
      for (std::size_t j = c; j < cols; ++j) {
        if (m[rank][j] != 0) m[r][j] = f.sub(m[r][j], f.mul(factor, m[rank][j]));
      }
    }
    ++rank;
  }
  return rank;
}

std::uint64_t determinant(const PrimeField& f, Matrix m) {
  const std::size_t n = m.size();
  std::uint64_t det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = f.neg(det);
    }
    det = f.mul(det, m[c][c]);
    std::uint64_t inv = f.inv(m[c][c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m[r][c] == 0) continue;
      std::uint64_t factor = f.mul(m[r][c], inv);
      for (std::size_t j = c; j < n; ++j) {
        m[r][j] = f.sub(m[r][j], f.mul(factor, m[c][j]));
      }
    }
  }
  return det;
}

std::vector<std::size_t> greedy_row_basis(const PrimeField& f,
                                          const Matrix& m) {
  std::vector<std::pair<std::size_t, std::vector<std::uint64_t>>> basis;
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (insert_row(f, basis, m[i])) chosen.push_back(i);
  }
  return chosen;
}

Matrix transpose(const Matrix& m) {
  if (m.empty()) return {};
  Matrix t(m[0].size(), std::vector<std::uint64_t>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  }
  return t;
}

}  // namespace jpit
