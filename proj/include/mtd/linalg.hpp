#pragma once

#include "mtd/rational.hpp"

namespace mtd {

// Dense rational matrix, row major. Exact arithmetic throughout; there is
// deliberately no floating-point path anywhere in this library.
struct MatrixQ {
  size_t rows = 0, cols = 0;
  std::vector<VecQ> a;

  MatrixQ() = default;
  MatrixQ(size_t r, size_t c) : rows(r), cols(c), a(r, VecQ(c, Rational(0))) {}

  VecQ& operator[](size_t i) { return a[i]; }
  const VecQ& operator[](size_t i) const { return a[i]; }
};

size_t rank(MatrixQ m);

// Basis of the right kernel {x : Ax = 0}.
std::vector<VecQ> kernel_basis(MatrixQ m);

// Solves Ax = b for square nonsingular A; throws input_error otherwise.
VecQ solve_square(MatrixQ a, VecQ b);

// Rank of the set of rows (convenience for span/dimension computations).
size_t row_space_rank(const std::vector<VecQ>& rows);

}  // namespace mtd
