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

#include "sysmds/repair.hpp"

#include <algorithm>
#include <string>

#include "sysmds/error.hpp"
#include "sysmds/subsets.hpp"

namespace sysmds {

namespace {

Eta split_eta(std::span<const FieldElement> eta) {
  Eta out;
  for (std::size_t i = 0; i + 1 < eta.size(); i += 2) {
    out.alpha.push_back(eta[i]);
    out.beta.push_back(eta[i + 1]);
  }
  return out;
}

// eta restricted to all positions except the free pair (0, 1) is affine in
// (alpha_1, beta_1): rest = base + alpha_1 * da + beta_1 * db. Precomputing
// the three vectors makes each retry a handful of multiplications.
class EtaMap {
 public:
  EtaMap(const CodeState& state, std::span<const std::size_t> helpers, std::size_t failed)
      : field_(state.field()) {
    const Matrix a = helper_matrix(state, helpers);
    const std::size_t dim = state.dim();
    Matrix rest(dim, dim);
    for (std::size_t c = 2; c < a.cols(); ++c) rest.set_column(c - 2, a.column(c));
    Matrix inv;
    try {
      inv = invert(field_, rest);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSingular) throw;
      throw Error(ErrorCode::kInvariantViolation,
                  "helper matrix is singular: code state is not MDS");
    }
    base_ = mat_vec(field_, inv, state.u_column(failed));
    da_ = mat_vec(field_, inv, a.column(0));
    db_ = mat_vec(field_, inv, a.column(1));
  }

  Eta operator()(FieldElement alpha1, FieldElement beta1) const {
    Vector eta{alpha1, beta1};
    for (std::size_t i = 0; i < base_.size(); ++i) {
      eta.push_back(base_[i] + field_.mul(alpha1, da_[i]) + field_.mul(beta1, db_[i]));
    }
    return split_eta(eta);
  }

 private:
  const Field& field_;
  Vector base_;
  Vector da_;
  Vector db_;
};

Xi draw_xi(const Field& field, std::size_t k, Rng& rng) {
  Xi xi;
  xi.alpha1 = field.random_element(rng);
  xi.beta1 = field.random_element(rng);
  xi.rho.resize(k + 1);
  for (FieldElement& r : xi.rho) r = field.random_element(rng);
  return xi;
}

}  // namespace

void validate_helpers(const CodeState& state, std::size_t failed,
                      std::span<const std::size_t> helpers) {
  if (failed >= state.n()) {
    throw Error(ErrorCode::kInvalidArgument, "failed node " + std::to_string(failed + 1) +
                                                 " is out of range 1.." +
                                                 std::to_string(state.n()));
  }
  if (state.n() < state.k() + 2) {
    throw Error(ErrorCode::kUnsupportedShape, "repair from k+1 helpers needs n >= k+2");
  }
  if (helpers.size() != state.k() + 1) {
    throw Error(ErrorCode::kBadHelpers, "need exactly k+1=" + std::to_string(state.k() + 1) +
                                            " helpers, got " + std::to_string(helpers.size()));
  }
  std::vector<std::size_t> sorted(helpers.begin(), helpers.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::kBadHelpers, "helpers must be distinct");
  }
  for (const std::size_t h : helpers) {
    if (h >= state.n()) {
      throw Error(ErrorCode::kBadHelpers, "helper " + std::to_string(h + 1) + " out of range");
    }
    if (h == failed) throw Error(ErrorCode::kBadHelpers, "failed node cannot be a helper");
  }
}

std::vector<std::size_t> default_helpers(const CodeState& state, std::size_t failed) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < state.n() && out.size() < state.k() + 1; ++i) {
    if (i != failed) out.push_back(i);
  }
  return out;
}

Matrix helper_matrix(const CodeState& state, std::span<const std::size_t> helpers) {
  Matrix a(state.dim(), 2 * helpers.size());
  for (std::size_t i = 0; i < helpers.size(); ++i) {
    a.set_column(2 * i, state.u_column(helpers[i]));
    a.set_column(2 * i + 1, state.v_column(helpers[i]));
  }
  return a;
}

Vector solve_eta_fixed(const CodeState& state, std::span<const std::size_t> helpers,
                       std::size_t failed, std::size_t i, FieldElement value_i, std::size_t j,
                       FieldElement value_j) {
  validate_helpers(state, failed, helpers);
  const Matrix a = helper_matrix(state, helpers);
  if (i == j || i >= a.cols() || j >= a.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "fixed eta positions must be distinct and valid");
  }
  const Field& f = state.field();
  Vector rhs = state.u_column(failed);
  for (std::size_t r = 0; r < rhs.size(); ++r) {
    rhs[r] += f.mul(value_i, a(r, i)) + f.mul(value_j, a(r, j));
  }
  Matrix rest(state.dim(), state.dim());
  std::vector<std::size_t> positions;
  for (std::size_t c = 0; c < a.cols(); ++c) {
    if (c == i || c == j) continue;
    rest.set_column(positions.size(), a.column(c));
    positions.push_back(c);
  }
  const Vector solved = solve(f, std::move(rest), std::move(rhs));
  Vector eta(a.cols());
  eta[i] = value_i;
  eta[j] = value_j;
  for (std::size_t p = 0; p < positions.size(); ++p) eta[positions[p]] = solved[p];
  return eta;
}

Eta solve_eta(const CodeState& state, std::span<const std::size_t> helpers, std::size_t failed,
              FieldElement alpha1, FieldElement beta1) {
  return split_eta(solve_eta_fixed(state, helpers, failed, 0, alpha1, 1, beta1));
}

Vector synthesize_v_prime(const CodeState& state, std::span<const std::size_t> helpers,
                          const Eta& eta, std::span<const FieldElement> rho) {
  const std::size_t count = helpers.size();
  if (eta.alpha.size() != count || eta.beta.size() != count || rho.size() != count) {
    throw Error(ErrorCode::kDimensionMismatch,
                "eta and rho must have one entry per helper");
  }
  const Field& f = state.field();
  Vector out(state.dim());
  for (std::size_t i = 0; i < count; ++i) {
    const FieldElement cu = f.mul(rho[i], eta.alpha[i]);
    const FieldElement cv = f.mul(rho[i], eta.beta[i]);
    for (std::size_t r = 0; r < out.size(); ++r) {
      out[r] += f.mul(cu, state.u()(r, helpers[i])) + f.mul(cv, state.v()(r, helpers[i]));
    }
  }
  return out;
}

std::vector<std::size_t> retained_columns(const CodeState& state, std::size_t failed) {
  std::vector<std::size_t> out;
  out.reserve(2 * state.n() - 1);
  for (std::size_t j = 0; j < 2 * state.n(); ++j) {
    if (j != state.n() + failed) out.push_back(j);
  }
  return out;
}

SubsetScan accept_check(const CodeState& state, std::size_t failed,
                        std::span<const FieldElement> v_prime) {
  if (v_prime.size() != state.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "v' must have length 2k");
  }
  if (failed >= state.n()) throw Error(ErrorCode::kInvalidArgument, "failed node out of range");
  const std::vector<std::size_t> kept = retained_columns(state, failed);
  std::vector<Vector> columns;
  for (const std::size_t j : kept) columns.push_back(state.column(j));

  const std::size_t dim = state.dim();
  SubsetScan scan;
  scan.total = binomial(kept.size(), dim - 1);
  Matrix m(dim, dim);
  m.set_column(dim - 1, v_prime);
  for_each_subset(kept.size(), dim - 1, [&](std::span<const std::size_t> s) {
    for (std::size_t c = 0; c + 1 < dim; ++c) m.set_column(c, columns[s[c]]);
    ++scan.checked;
    if (det(state.field(), m).is_zero()) {
      scan.ok = false;
      for (const std::size_t p : s) scan.first_violation.push_back(kept[p]);
      return false;
    }
    return true;
  });
  return scan;
}

bool accept_at_subset(const CodeState& state, std::span<const std::size_t> subset,
                      std::span<const FieldElement> v_prime) {
  const std::size_t dim = state.dim();
  if (subset.size() != dim - 1 || v_prime.size() != dim) {
    throw Error(ErrorCode::kDimensionMismatch, "subset must have 2k-1 columns and v' 2k entries");
  }
  Matrix m(dim, dim);
  for (std::size_t c = 0; c + 1 < dim; ++c) m.set_column(c, state.column(subset[c]));
  m.set_column(dim - 1, v_prime);
  return !det(state.field(), m).is_zero();
}

RepairResult repair(const CodeState& state, std::size_t failed,
                    std::span<const std::size_t> helpers, Rng& rng, std::uint32_t max_retries) {
  validate_helpers(state, failed, helpers);
  const EtaMap eta_of(state, helpers, failed);
  const Field& f = state.field();

  std::uint32_t rejected = 0;
  for (;;) {
    Xi xi = draw_xi(f, state.k(), rng);
    Eta eta = eta_of(xi.alpha1, xi.beta1);
    Vector v_prime = synthesize_v_prime(state, helpers, eta, xi.rho);
    if (accept_check(state, failed, v_prime).ok) {
      RepairTranscript t;
      t.failed = failed;
      t.helpers.assign(helpers.begin(), helpers.end());
      t.xi = std::move(xi);
      t.alpha = std::move(eta.alpha);
      t.beta = std::move(eta.beta);
      t.v_prime = std::move(v_prime);
      t.retries = rejected;
      t.epoch_before = state.epoch();
      t.epoch_after = state.epoch() + 1;
      CodeState next = state.with_v_column(failed, t.v_prime);
      return RepairResult{std::move(next), std::move(t)};
    }
    if (++rejected > max_retries) {
      throw Error(ErrorCode::kRetriesExhausted,
                  "no acceptable repair after " + std::to_string(rejected) + " draws");
    }
  }
}

Xi claim1_witness(const CodeState& state, std::size_t failed,
                  std::span<const std::size_t> helpers, std::span<const std::size_t> subset) {
  validate_helpers(state, failed, helpers);
  if (subset.size() != state.dim() - 1) {
    throw Error(ErrorCode::kInvalidArgument, "witness subset must have 2k-1 columns");
  }
  for (const std::size_t j : subset) {
    if (j >= 2 * state.n() || j == state.n() + failed) {
      throw Error(ErrorCode::kInvalidArgument,
                  "witness subset must be drawn from the retained columns");
    }
  }
  auto in_subset = [&](std::size_t j) {
    return std::find(subset.begin(), subset.end(), j) != subset.end();
  };

  // 2k-1 columns cannot cover all 2k+2 helper vectors, so one is free.
  // Prefer the v vector of the first helper that leaves one out.
  const FieldElement zero(0);
  const FieldElement one(1);
  for (const bool v_case : {true, false}) {
    for (std::size_t p = 0; p < helpers.size(); ++p) {
      const std::size_t col = v_case ? state.n() + helpers[p] : helpers[p];
      if (in_subset(col)) continue;
      const Vector eta = v_case
          ? solve_eta_fixed(state, helpers, failed, 2 * p, zero, 2 * p + 1, one)
          : solve_eta_fixed(state, helpers, failed, 2 * p, one, 2 * p + 1, zero);
      Xi xi;
      xi.alpha1 = eta[0];
      xi.beta1 = eta[1];
      xi.rho.assign(helpers.size(), zero);
      xi.rho[p] = one;
      return xi;
    }
  }
  throw Error(ErrorCode::kInvariantViolation, "no helper vector outside the subset");
}

FieldElement helper_payload(const Field& field, const RepairTranscript& transcript,
                            std::size_t position, const NodeContent& content) {
  if (position >= transcript.helpers.size() || position >= transcript.alpha.size() ||
      position >= transcript.beta.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "helper position out of range");
  }
  if (content.node != transcript.helpers[position]) {
    throw Error(ErrorCode::kBadHelpers, "content is not from the expected helper");
  }
  return field.mul(transcript.alpha[position], content.sym_u) +
         field.mul(transcript.beta[position], content.sym_v);
}

std::pair<FieldElement, FieldElement> combine_download(const Field& field,
                                                       const RepairTranscript& transcript,
                                                       std::span<const FieldElement> payloads) {
  if (payloads.size() != transcript.xi.rho.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "expected one payload per helper");
  }
  FieldElement sym_u;
  FieldElement sym_v;
  for (std::size_t i = 0; i < payloads.size(); ++i) {
    sym_u += payloads[i];
    sym_v += field.mul(transcript.xi.rho[i], payloads[i]);
  }
  return {sym_u, sym_v};
}

std::pair<FieldElement, FieldElement> repair_download(const CodeState& state,
                                                      std::span<const NodeContent> contents,
                                                      const RepairTranscript& transcript) {
  if (transcript.helpers.size() != state.k() + 1 ||
      transcript.xi.rho.size() != transcript.helpers.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "transcript does not match the code shape");
  }
  Vector payloads;
  for (std::size_t p = 0; p < transcript.helpers.size(); ++p) {
    const auto it = std::find_if(contents.begin(), contents.end(), [&](const NodeContent& c) {
      return c.node == transcript.helpers[p];
    });
    if (it == contents.end()) {
      throw Error(ErrorCode::kMissingNode,
                  "no content for helper " + std::to_string(transcript.helpers[p] + 1));
    }
    payloads.push_back(helper_payload(state.field(), transcript, p, *it));
  }
  return combine_download(state.field(), transcript, payloads);
}

bool transcript_consistent(const CodeState& before, const RepairTranscript& t) {
  try {
    validate_helpers(before, t.failed, t.helpers);
  } catch (const Error&) {
    return false;
  }
  const std::size_t count = t.helpers.size();
  if (t.alpha.size() != count || t.beta.size() != count || t.xi.rho.size() != count ||
      t.v_prime.size() != before.dim()) {
    return false;
  }
  if (t.alpha[0] != t.xi.alpha1 || t.beta[0] != t.xi.beta1) return false;
  if (t.epoch_before != before.epoch() || t.epoch_after != before.epoch() + 1) return false;

  const Field& f = before.field();
  const Matrix a = helper_matrix(before, t.helpers);
  Vector eta;
  for (std::size_t i = 0; i < count; ++i) {
    eta.push_back(t.alpha[i]);
    eta.push_back(t.beta[i]);
  }
  if (mat_vec(f, a, eta) != before.u_column(t.failed)) return false;
  return synthesize_v_prime(before, t.helpers, Eta{t.alpha, t.beta}, t.xi.rho) == t.v_prime;
}

}  // namespace sysmds
