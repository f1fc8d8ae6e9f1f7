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

#include "sysmds/code.hpp"

#include <algorithm>
#include <utility>

#include "sysmds/bounds.hpp"
#include "sysmds/error.hpp"
#include "sysmds/subsets.hpp"

namespace sysmds {

namespace {

void check_shape(std::size_t n, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kBadShape, "k must be at least 1");
  if (2 * k > n) {
    throw Error(ErrorCode::kBadShape, "2k <= n violated (n=" + std::to_string(n) +
                                          ", k=" + std::to_string(k) + ")");
  }
}

void check_elements(const Field& field, const Matrix& m, const char* name) {
  for (const FieldElement e : m.entries()) {
    if (!field.contains(e.value())) {
      throw Error(ErrorCode::kBadField,
                  std::string(name) + " has an entry outside the field");
    }
  }
}

}  // namespace

CodeState::CodeState(std::size_t n, std::size_t k, FieldPtr field, Matrix u, Matrix v,
                     std::uint64_t epoch)
    : n_(n), k_(k), field_(std::move(field)), u_(std::move(u)), v_(std::move(v)),
      epoch_(epoch) {
  check_shape(n, k);
  if (!field_) throw Error(ErrorCode::kBadField, "code state without a field");
  for (const Matrix* m : {&u_, &v_}) {
    if (m->rows() != 2 * k || m->cols() != n) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "code matrices must be " + std::to_string(2 * k) + "x" + std::to_string(n));
    }
  }
  check_elements(*field_, u_, "U");
  check_elements(*field_, v_, "V");
}

CodeState CodeState::init_systematic(std::size_t n, std::size_t k, FieldPtr field,
                                     std::uint64_t /*seed*/) {
  check_shape(n, k);
  if (n < k + 2) {
    throw Error(ErrorCode::kUnsupportedShape,
                "repair from k+1 helpers needs n >= k+2 (n=" + std::to_string(n) +
                    ", k=" + std::to_string(k) + ")");
  }
  if (!field) throw Error(ErrorCode::kBadField, "no field given");
  const std::uint64_t threshold = d0(n, k);
  if (field->order() <= threshold) {
    throw Error(ErrorCode::kFieldTooSmall, "|F|=" + std::to_string(field->order()) +
                                               " <= d0=" + std::to_string(threshold));
  }
  if (field->order() < 2 * n) {
    throw Error(ErrorCode::kFieldTooSmall, "field has fewer than 2n distinct Cauchy points");
  }

  const std::size_t dim = 2 * k;
  const Field& f = *field;
  // Parity column j of [I | C].
  auto cauchy_column = [&](std::size_t j) {
    Vector col(dim);
    const auto b = static_cast<FieldElement::Rep>(dim + j);
    for (std::size_t i = 0; i < dim; ++i) {
      col[i] = f.inv(FieldElement(static_cast<FieldElement::Rep>(i)) + FieldElement(b));
    }
    return col;
  };

  Matrix u(dim, n);
  Matrix v(dim, n);
  for (std::size_t i = 0; i < dim; ++i) u(i, i) = FieldElement(1);
  std::size_t next = 0;
  for (std::size_t node = dim; node < n; ++node) u.set_column(node, cauchy_column(next++));
  for (std::size_t node = 0; node < n; ++node) v.set_column(node, cauchy_column(next++));
  return CodeState(n, k, std::move(field), std::move(u), std::move(v), 0);
}

Vector CodeState::column(std::size_t j) const {
  return j < n_ ? u_.column(j) : v_.column(j - n_);
}

std::string CodeState::column_label(std::size_t j) const {
  return (j < n_ ? "u" : "v") + std::to_string((j < n_ ? j : j - n_) + 1);
}

CodeState CodeState::with_v_column(std::size_t node, std::span<const FieldElement> v_new) const {
  Matrix v = v_;
  v.set_column(node, v_new);
  return CodeState(n_, k_, field_, u_, std::move(v), epoch_ + 1);
}

SubsetScan is_mds(const CodeState& state) {
  const std::size_t total_cols = 2 * state.n();
  const std::size_t dim = state.dim();
  std::vector<Vector> columns(total_cols);
  for (std::size_t j = 0; j < total_cols; ++j) columns[j] = state.column(j);

  SubsetScan scan;
  scan.total = binomial(total_cols, dim);
  Matrix sub(dim, dim);
  for_each_subset(total_cols, dim, [&](std::span<const std::size_t> subset) {
    for (std::size_t c = 0; c < dim; ++c) sub.set_column(c, columns[subset[c]]);
    ++scan.checked;
    if (det(state.field(), sub).is_zero()) {
      scan.ok = false;
      scan.first_violation.assign(subset.begin(), subset.end());
      return false;
    }
    return true;
  });
  return scan;
}

bool is_systematic(const CodeState& state) {
  for (std::size_t i = 0; i < state.dim(); ++i) {
    for (std::size_t r = 0; r < state.dim(); ++r) {
      if (state.u()(r, i) != FieldElement(r == i ? 1 : 0)) return false;
    }
  }
  return true;
}

void validate_invariants(const CodeState& state) {
  if (!is_systematic(state)) {
    throw Error(ErrorCode::kInvariantViolation,
                "u_1..u_2k are not the standard basis");
  }
  const SubsetScan scan = is_mds(state);
  if (!scan.ok) {
    throw Error(ErrorCode::kInvariantViolation,
                "not MDS: subset {" + format_subset(state, scan.first_violation) +
                    "} is rank deficient");
  }
}

std::vector<NodeContent> encode(const CodeState& state, const Stripe& x) {
  if (x.symbols.size() != state.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "stripe has " + std::to_string(x.symbols.size()) + " symbols, expected " +
                    std::to_string(state.dim()));
  }
  const Field& f = state.field();
  const Vector xu = mat_vec(f, transpose(state.u()), x.symbols);
  const Vector xv = mat_vec(f, transpose(state.v()), x.symbols);
  std::vector<NodeContent> out(state.n());
  for (std::size_t i = 0; i < state.n(); ++i) out[i] = {i, xu[i], xv[i]};
  return out;
}

Stripe decode(const CodeState& state, std::span<const NodeContent> contents) {
  const std::size_t k = state.k();
  if (contents.size() != k) {
    throw Error(ErrorCode::kTooFewNodes, "decode needs exactly " + std::to_string(k) +
                                             " nodes, got " + std::to_string(contents.size()));
  }
  std::vector<std::size_t> seen;
  for (const NodeContent& c : contents) {
    if (c.node >= state.n()) {
      throw Error(ErrorCode::kInvalidArgument, "node index out of range");
    }
    seen.push_back(c.node);
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw Error(ErrorCode::kInvalidArgument, "decode given duplicate nodes");
  }

  // Row 2i is u_{node}^T, row 2i+1 is v_{node}^T: M x = symbols.
  const std::size_t dim = state.dim();
  Matrix system(dim, dim);
  Vector rhs(dim);
  for (std::size_t i = 0; i < k; ++i) {
    const NodeContent& c = contents[i];
    for (std::size_t r = 0; r < dim; ++r) {
      system(2 * i, r) = state.u()(r, c.node);
      system(2 * i + 1, r) = state.v()(r, c.node);
    }
    rhs[2 * i] = c.sym_u;
    rhs[2 * i + 1] = c.sym_v;
  }
  try {
    return Stripe{solve(state.field(), std::move(system), std::move(rhs))};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSingular) throw;
    throw Error(ErrorCode::kInvariantViolation,
                "decode system singular: code state is not MDS");
  }
}

Stripe read_systematic(const CodeState& state, std::span<const NodeContent> contents) {
  Stripe out{Vector(state.dim())};
  std::vector<bool> have(state.dim(), false);
  for (const NodeContent& c : contents) {
    if (c.node < state.dim()) {
      out.symbols[c.node] = c.sym_u;
      have[c.node] = true;
    }
  }
  for (std::size_t i = 0; i < state.dim(); ++i) {
    if (!have[i]) {
      throw Error(ErrorCode::kMissingNode,
                  "systematic read needs node " + std::to_string(i + 1));
    }
  }
  return out;
}

std::string format_subset(const CodeState& state, std::span<const std::size_t> columns) {
  std::string out;
  for (const std::size_t j : columns) {
    if (!out.empty()) out += ",";
    out += state.column_label(j);
  }
  return out;
}

}  // namespace sysmds
