// Copyright 2026 The sysmds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sysmds/matrix.hpp"

#include <string>
#include <utility>

#include "sysmds/error.hpp"

namespace sysmds {

namespace {

std::string dims(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void swap_rows(Matrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(a, c), m(b, c));
}

// row[target] += factor * row[source], from column `from` onward.
void add_scaled_row(const Field& field, Matrix& m, std::size_t target, std::size_t source,
                    FieldElement factor, std::size_t from) {
  for (std::size_t c = from; c < m.cols(); ++c) {
    m(target, c) += field.mul(factor, m(source, c));
  }
}

std::size_t find_pivot(const Matrix& m, std::size_t col, std::size_t first_row) {
  for (std::size_t r = first_row; r < m.rows(); ++r) {
    if (!m(r, col).is_zero()) return r;
  }
  return m.rows();
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = FieldElement(1);
  return m;
}

Matrix Matrix::from_columns(std::span<const Vector> columns) {
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  Matrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) m.set_column(c, columns[c]);
  return m;
}

Vector Matrix::column(std::size_t c) const {
  Vector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void Matrix::set_column(std::size_t c, std::span<const FieldElement> values) {
  if (values.size() != rows_ || c >= cols_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "column of length " + std::to_string(values.size()) + " at index " +
                    std::to_string(c) + " does not fit a " + dims(*this) + " matrix");
  }
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = values[r];
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) t(c, r) = m(r, c);
  }
  return t;
}

Matrix multiply(const Field& field, const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "cannot multiply " + dims(a) + " by " + dims(b));
  }
  Matrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const FieldElement s = a(r, i);
      if (s.is_zero()) continue;
      for (std::size_t c = 0; c < b.cols(); ++c) out(r, c) += field.mul(s, b(i, c));
    }
  }
  return out;
}

FieldElement dot(const Field& field, std::span<const FieldElement> a,
                 std::span<const FieldElement> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "dot product of lengths " +
                                                   std::to_string(a.size()) + " and " +
                                                   std::to_string(b.size()));
  }
  FieldElement acc;
  for (std::size_t i = 0; i < a.size(); ++i) acc += field.mul(a[i], b[i]);
  return acc;
}

FieldElement det(const Field& field, Matrix m) {
  if (!m.is_square()) throw Error(ErrorCode::kNonSquare, "det of " + dims(m) + " matrix");
  const std::size_t n = m.rows();
  FieldElement result(1);
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t pivot = find_pivot(m, col, col);
    if (pivot == n) return FieldElement();
    swap_rows(m, col, pivot);
    const FieldElement p = m(col, col);
    result = field.mul(result, p);
    const FieldElement p_inv = field.inv(p);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m(r, col).is_zero()) continue;
      add_scaled_row(field, m, r, col, field.mul(m(r, col), p_inv), col);
    }
  }
  return result;
}

std::size_t rank(const Field& field, Matrix m) {
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    const std::size_t pivot = find_pivot(m, col, row);
    if (pivot == m.rows()) continue;
    swap_rows(m, row, pivot);
    const FieldElement p_inv = field.inv(m(row, col));
    for (std::size_t r = row + 1; r < m.rows(); ++r) {
      if (m(r, col).is_zero()) continue;
      add_scaled_row(field, m, r, row, field.mul(m(r, col), p_inv), col);
    }
    ++row;
  }
  return row;
}

Matrix invert(const Field& field, const Matrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::kNonSquare, "inverse of " + dims(m) + " matrix");
  const std::size_t n = m.rows();
  // Gauss-Jordan on [m | I].
  Matrix aug(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = m(r, c);
    aug(r, n + r) = FieldElement(1);
  }
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t pivot = find_pivot(aug, col, col);
    if (pivot == n) throw Error(ErrorCode::kSingular, "matrix is singular");
    swap_rows(aug, col, pivot);
    const FieldElement p_inv = field.inv(aug(col, col));
    for (std::size_t c = col; c < 2 * n; ++c) aug(col, c) = field.mul(aug(col, c), p_inv);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || aug(r, col).is_zero()) continue;
      add_scaled_row(field, aug, r, col, aug(r, col), col);
    }
  }
  Matrix out(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) out(r, c) = aug(r, n + c);
  }
  return out;
}

Vector mat_vec(const Field& field, const Matrix& m, std::span<const FieldElement> x) {
  if (x.size() != m.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "cannot multiply " + dims(m) +
                                                   " matrix by vector of length " +
                                                   std::to_string(x.size()));
  }
  Vector out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    FieldElement acc;
    for (std::size_t c = 0; c < m.cols(); ++c) acc += field.mul(m(r, c), x[c]);
    out[r] = acc;
  }
  return out;
}

Vector solve(const Field& field, Matrix m, Vector b) {
  if (!m.is_square()) throw Error(ErrorCode::kNonSquare, "solve with " + dims(m) + " matrix");
  if (b.size() != m.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "right-hand side of length " + std::to_string(b.size()) + " for " + dims(m));
  }
  const std::size_t n = m.rows();
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t pivot = find_pivot(m, col, col);
    if (pivot == n) throw Error(ErrorCode::kSingular, "system matrix is singular");
    swap_rows(m, col, pivot);
    std::swap(b[col], b[pivot]);
    const FieldElement p_inv = field.inv(m(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m(r, col).is_zero()) continue;
      const FieldElement f = field.mul(m(r, col), p_inv);
      add_scaled_row(field, m, r, col, f, col);
      b[r] += field.mul(f, b[col]);
    }
  }
  Vector x(n);
  for (std::size_t i = n; i-- > 0;) {
    FieldElement acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc += field.mul(m(i, c), x[c]);
    x[i] = field.div(acc, m(i, i));
  }
  return x;
}

}  // namespace sysmds
