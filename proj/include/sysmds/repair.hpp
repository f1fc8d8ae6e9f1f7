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
#include <utility>
#include <vector>

#include "sysmds/code.hpp"

namespace sysmds {

//
// Single-node repair from k+1 helpers.
//
// The replacement for node f downloads d_i = alpha_i x^T u_{h_i} +
// beta_i x^T v_{h_i} from each helper h_i and stores
//
//   x^T u_f  = sum_i d_i               (u_f is rebuilt exactly)
//   x^T v'_f = sum_i rho_i d_i         (v_f is replaced by v'_f)
//
// The coefficient vector eta = (alpha_1, beta_1, ..., alpha_{k+1},
// beta_{k+1}) must satisfy A eta = u_f with A = [u_{h_1}, v_{h_1}, ...].
// Any two entries of eta determine the rest, so a repair attempt is fixed
// by xi = (alpha_1, beta_1, rho_1..rho_{k+1}). An attempt is accepted when
// v'_f is independent of every (2k-1)-subset of the retained vectors
// {u_1..u_n} and {v_i : i != f}, which keeps all 2n vectors MDS.
//

inline constexpr std::uint32_t kDefaultMaxRetries = 64;

/// The k+3 free repair coefficients.
struct Xi {
  FieldElement alpha1;
  FieldElement beta1;
  Vector rho;  // k+1 entries

  friend bool operator==(const Xi&, const Xi&) = default;
};

/// Download coefficients per helper (the full eta, split by parity).
struct Eta {
  Vector alpha;
  Vector beta;

  friend bool operator==(const Eta&, const Eta&) = default;
};

struct RepairTranscript {
  std::size_t failed = 0;
  std::vector<std::size_t> helpers;
  Xi xi;
  Vector alpha;
  Vector beta;
  Vector v_prime;
  std::uint32_t retries = 0;
  std::uint64_t epoch_before = 0;
  std::uint64_t epoch_after = 0;

  friend bool operator==(const RepairTranscript&, const RepairTranscript&) = default;
};

struct RepairResult {
  CodeState state;
  RepairTranscript transcript;
};

/// Throws InvalidArgument for an out-of-range failed node and BadHelpers
/// unless helpers are k+1 distinct in-range nodes excluding `failed`.
void validate_helpers(const CodeState& state, std::size_t failed,
                      std::span<const std::size_t> helpers);

/// The k+1 lowest-indexed nodes other than `failed`.
std::vector<std::size_t> default_helpers(const CodeState& state, std::size_t failed);

/// A = [u_{h_1}, v_{h_1}, ..., u_{h_{k+1}}, v_{h_{k+1}}], 2k x (2k+2).
Matrix helper_matrix(const CodeState& state, std::span<const std::size_t> helpers);

/// Solves A eta = u_failed with eta[i] = value_i and eta[j] = value_j fixed
/// (i != j are positions in eta). Singular signals a non-MDS state.
Vector solve_eta_fixed(const CodeState& state, std::span<const std::size_t> helpers,
                       std::size_t failed, std::size_t i, FieldElement value_i, std::size_t j,
                       FieldElement value_j);

/// solve_eta_fixed with (alpha_1, beta_1) as the free pair.
Eta solve_eta(const CodeState& state, std::span<const std::size_t> helpers, std::size_t failed,
              FieldElement alpha1, FieldElement beta1);

/// v' = sum_i rho_i (alpha_i u_{h_i} + beta_i v_{h_i}).
Vector synthesize_v_prime(const CodeState& state, std::span<const std::size_t> helpers,
                          const Eta& eta, std::span<const FieldElement> rho);

/// Combined column indices of the 2n-1 vectors kept across a repair of
/// `failed`: all u columns, then v columns except v_failed.
std::vector<std::size_t> retained_columns(const CodeState& state, std::size_t failed);

/// det([U_S, v']) != 0 for every (2k-1)-subset S of retained_columns().
/// first_violation holds combined column indices of S.
SubsetScan accept_check(const CodeState& state, std::size_t failed,
                        std::span<const FieldElement> v_prime);

/// det([U_S, v']) != 0 for one subset S (combined column indices).
bool accept_at_subset(const CodeState& state, std::span<const std::size_t> subset,
                      std::span<const FieldElement> v_prime);

/// Draws xi until accept_check passes. Throws RetriesExhausted once more
/// than max_retries draws have been rejected, BadHelpers for bad helpers.
RepairResult repair(const CodeState& state, std::size_t failed,
                    std::span<const std::size_t> helpers, Rng& rng,
                    std::uint32_t max_retries = kDefaultMaxRetries);

/// Deterministic xi making det([U_S, v']) nonzero at the given S. Takes the
/// first helper whose v vector lies outside S, or failing that the first
/// whose u vector does, and routes the whole download to reproduce that
/// vector as v'.
Xi claim1_witness(const CodeState& state, std::size_t failed,
                  std::span<const std::size_t> helpers, std::span<const std::size_t> subset);

/// Symbol a helper sends: alpha_i sym_u + beta_i sym_v. `position` is the
/// helper's index within transcript.helpers.
FieldElement helper_payload(const Field& field, const RepairTranscript& transcript,
                            std::size_t position, const NodeContent& content);

/// The replacement node's (sym_u, sym_v) from the k+1 received payloads.
std::pair<FieldElement, FieldElement> combine_download(const Field& field,
                                                       const RepairTranscript& transcript,
                                                       std::span<const FieldElement> payloads);

/// helper_payload + combine_download over one stripe's node contents.
/// Contents must include every helper; other nodes are ignored.
std::pair<FieldElement, FieldElement> repair_download(const CodeState& state,
                                                      std::span<const NodeContent> contents,
                                                      const RepairTranscript& transcript);

/// Re-derives a transcript against the state it was applied to: helper set,
/// A eta = u_failed, eta's free pair equals xi, and v' from rho.
bool transcript_consistent(const CodeState& before, const RepairTranscript& transcript);

}  // namespace sysmds
