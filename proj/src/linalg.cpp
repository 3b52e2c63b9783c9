#include "mtd/linalg.hpp"

namespace mtd {

namespace {

// Forward elimination; returns pivot columns. Destroys m in place.
std::vector<size_t> eliminate(MatrixQ& m) {
  std::vector<size_t> pivots;
  size_t row = 0;
  for (size_t col = 0; col < m.cols && row < m.rows; ++col) {
    size_t p = row;
    while (p < m.rows && m[p][col] == 0) ++p;
    if (p == m.rows) continue;
    std::swap(m.a[p], m.a[row]);
    const Rational inv = 1 / m[row][col];
    for (size_t j = col; j < m.cols; ++j) m[row][j] *= inv;
    for (size_t i = 0; i < m.rows; ++i) {
      if (i == row || m[i][col] == 0) continue;
      const Rational f = m[i][col];
      for (size_t j = col; j < m.cols; ++j) m[i][j] -= f * m[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

size_t rank(MatrixQ m) { return eliminate(m).size(); }

std::vector<VecQ> kernel_basis(MatrixQ m) {
  const size_t n = m.cols;
  std::vector<size_t> pivots = eliminate(m);
  std::vector<char> is_pivot(n, 0);
  for (size_t c : pivots) is_pivot[c] = 1;

  std::vector<VecQ> basis;
  for (size_t free_col = 0; free_col < n; ++free_col) {
    if (is_pivot[free_col]) continue;
    VecQ x(n, Rational(0));
    x[free_col] = 1;
    for (size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = -m[i][free_col];
    basis.push_back(std::move(x));
  }
  return basis;
}

VecQ solve_square(MatrixQ a, VecQ b) {
  if (a.rows != a.cols || b.size() != a.rows) throw input_error("solve_square: shape mismatch");
  const size_t n = a.rows;
  for (size_t i = 0; i < n; ++i) a[i].push_back(b[i]);
  a.cols = n + 1;
  std::vector<size_t> pivots = eliminate(a);
  if (pivots.size() != n || (!pivots.empty() && pivots.back() == n))
    throw input_error("solve_square: singular system");
  VecQ x(n);
  for (size_t i = 0; i < n; ++i) x[pivots[i]] = a[i][n];
  return x;
}

size_t row_space_rank(const std::vector<VecQ>& rows) {
  if (rows.empty()) return 0;
  MatrixQ m(rows.size(), rows[0].size());
  m.a = rows;
  return rank(std::move(m));
}

}  // namespace mtd
