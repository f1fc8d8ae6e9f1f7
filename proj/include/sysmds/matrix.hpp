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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sysmds/field.hpp"

namespace sysmds {

using Vector = std::vector<FieldElement>;

/// Dense row-major matrix over GF(2^m). The field is supplied per operation;
/// a matrix only stores elements.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);

  static Matrix identity(std::size_t n);
  /// Builds a matrix whose columns are the given vectors (all equal length).
  static Matrix from_columns(std::span<const Vector> columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  FieldElement& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  FieldElement operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  Vector column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const FieldElement> values);

  std::span<const FieldElement> entries() const { return entries_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<FieldElement> entries_;
};

Matrix transpose(const Matrix& m);
Matrix multiply(const Field& field, const Matrix& a, const Matrix& b);

FieldElement dot(const Field& field, std::span<const FieldElement> a,
                 std::span<const FieldElement> b);

// Elimination pivots on the leftmost column, topmost nonzero row. In
// characteristic 2 row swaps do not change the sign of the determinant.

FieldElement det(const Field& field, Matrix m);
Matrix invert(const Field& field, const Matrix& m);
std::size_t rank(const Field& field, Matrix m);
Vector mat_vec(const Field& field, const Matrix& m, std::span<const FieldElement> x);
/// Unique solution of m * x = b. Throws Singular / DimensionMismatch.
Vector solve(const Field& field, Matrix m, Vector b);

}  // namespace sysmds
