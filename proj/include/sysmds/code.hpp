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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sysmds/field.hpp"
#include "sysmds/matrix.hpp"

namespace sysmds {

// Node indices are 0-based throughout the C++ API. Files, reports and the C
// API present them 1-based.

/// 2k information symbols encoded together.
struct Stripe {
  Vector symbols;

  friend bool operator==(const Stripe&, const Stripe&) = default;
};

/// The two symbols a node holds for one stripe: x^T u_i and x^T v_i.
struct NodeContent {
  std::size_t node = 0;
  FieldElement sym_u;
  FieldElement sym_v;

  friend bool operator==(const NodeContent&, const NodeContent&) = default;
};

/// Outcome of an exhaustive subset scan. `first_violation` holds the
/// offending subset (lexicographically first) when ok is false.
struct SubsetScan {
  bool ok = true;
  std::uint64_t checked = 0;
  std::uint64_t total = 0;
  std::vector<std::size_t> first_violation;
};

/// The 2n code vectors {u_i, v_i} in F^{2k}. Column i of U is u_i, column i
/// of V is v_i. Immutable; a repair yields a new state with epoch + 1.
///
/// Combined column indexing, used by MDS scans: j < n names u_j and
/// j >= n names v_{j-n}.
class CodeState {
 public:
  /// Shape-checks only (2k <= n, k >= 1, matrix dimensions, element range).
  /// Use validate_invariants() for the systematic and MDS properties.
  CodeState(std::size_t n, std::size_t k, FieldPtr field, Matrix u, Matrix v,
            std::uint64_t epoch = 0);

  /// Systematic Cauchy initialization: u_1..u_2k = e_1..e_2k and the
  /// remaining 2n-2k columns (u_{2k+1}..u_n, then v_1..v_n) are the columns
  /// of a 2k x (2n-2k) Cauchy matrix 1/(a_i + b_j), a_i = i, b_j = 2k + j.
  ///
  /// Throws BadShape (2k > n or k = 0), UnsupportedShape (n < k + 2) and
  /// FieldTooSmall (|F| <= d0(n, k)). The construction is deterministic;
  /// `seed` is accepted for interface stability and does not affect it.
  static CodeState init_systematic(std::size_t n, std::size_t k, FieldPtr field,
                                   std::uint64_t seed = 0);

  std::size_t n() const { return n_; }
  std::size_t k() const { return k_; }
  /// Length of every code vector, 2k.
  std::size_t dim() const { return 2 * k_; }
  const Field& field() const { return *field_; }
  const FieldPtr& field_ptr() const { return field_; }
  const Matrix& u() const { return u_; }
  const Matrix& v() const { return v_; }
  std::uint64_t epoch() const { return epoch_; }

  Vector u_column(std::size_t node) const { return u_.column(node); }
  Vector v_column(std::size_t node) const { return v_.column(node); }
  /// Combined column j of [U | V].
  Vector column(std::size_t j) const;
  /// "u3" / "v1" style label for combined column j (1-based node number).
  std::string column_label(std::size_t j) const;

  /// Copy with v_{node} replaced and the epoch advanced by one.
  CodeState with_v_column(std::size_t node, std::span<const FieldElement> v_new) const;

 private:
  std::size_t n_;
  std::size_t k_;
  FieldPtr field_;
  Matrix u_;
  Matrix v_;
  std::uint64_t epoch_;
};

/// Every 2k-subset of the 2n columns has full rank; exhaustive over
/// C(2n, 2k) subsets in lexicographic order, stopping at the first failure.
SubsetScan is_mds(const CodeState& state);
/// u_1..u_2k equal e_1..e_2k.
bool is_systematic(const CodeState& state);
/// Throws InvariantViolation naming the first failure.
void validate_invariants(const CodeState& state);

std::vector<NodeContent> encode(const CodeState& state, const Stripe& x);
/// Recovers x from exactly k distinct nodes' contents (2k equations).
Stripe decode(const CodeState& state, std::span<const NodeContent> contents);
/// Returns the u-symbols of nodes 1..2k directly. No field arithmetic.
Stripe read_systematic(const CodeState& state, std::span<const NodeContent> contents);

std::string format_subset(const CodeState& state, std::span<const std::size_t> columns);

}  // namespace sysmds
