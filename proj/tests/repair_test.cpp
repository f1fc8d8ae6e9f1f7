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
#include <cmath>
#include <optional>

#include "gtest/gtest.h"
#include "sysmds/bounds.hpp"
#include "sysmds/error.hpp"
#include "sysmds/subsets.hpp"

namespace sysmds {
namespace {

template <typename Fn>
ErrorCode error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an exception";
  return ErrorCode::kInvalidArgument;
}

Vector random_vector(const Field& f, std::size_t len, Rng& rng) {
  Vector v(len);
  for (FieldElement& e : v) e = f.random_element(rng);
  return v;
}

Vector flatten(const Eta& eta) {
  Vector out;
  for (std::size_t i = 0; i < eta.alpha.size(); ++i) {
    out.push_back(eta.alpha[i]);
    out.push_back(eta.beta[i]);
  }
  return out;
}

// Some (4,2) MDS state over GF(16): u = e_i, random v columns, kept once
// all 70 subsets are full rank.
CodeState small_field_state() {
  const auto f = std::make_shared<const Field>(4, 0x13);
  Rng rng(99);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    Matrix v(4, 4);
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) v(r, c) = f->random_element(rng);
    CodeState s(4, 2, f, Matrix::identity(4), v);
    if (is_mds(s).ok) return s;
  }
  throw std::runtime_error("no MDS state found");
}

TEST(Helpers, DefaultsAndValidation) {
  const CodeState s = CodeState::init_systematic(4, 2, Field::gf256());
  EXPECT_EQ(default_helpers(s, 0), (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_EQ(default_helpers(s, 2), (std::vector<std::size_t>{0, 1, 3}));
  const std::vector<std::size_t> too_few{1, 2};
  const std::vector<std::size_t> with_failed{0, 1, 2};
  const std::vector<std::size_t> repeated{1, 1, 2};
  const std::vector<std::size_t> out_of_range{1, 2, 9};
  EXPECT_EQ(error_of([&] { validate_helpers(s, 0, too_few); }), ErrorCode::kBadHelpers);
  EXPECT_EQ(error_of([&] { validate_helpers(s, 0, with_failed); }), ErrorCode::kBadHelpers);
  EXPECT_EQ(error_of([&] { validate_helpers(s, 0, repeated); }), ErrorCode::kBadHelpers);
  EXPECT_EQ(error_of([&] { validate_helpers(s, 0, out_of_range); }), ErrorCode::kBadHelpers);
  const std::vector<std::size_t> ok{1, 2, 3};
  EXPECT_EQ(error_of([&] { validate_helpers(s, 7, ok); }), ErrorCode::kInvalidArgument);
  Rng rng(1);
  EXPECT_EQ(error_of([&] { repair(s, 0, repeated, rng); }), ErrorCode::kBadHelpers);
}

TEST(Eta, SolvesHelperSystem) {
  const CodeState s = CodeState::init_systematic(6, 3, Field::gf65536());
  const Field& f = s.field();
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t failed = rng.below(6);
    const auto helpers = default_helpers(s, failed);
    const FieldElement a1 = f.random_element(rng);
    const FieldElement b1 = f.random_element(rng);
    const Eta eta = solve_eta(s, helpers, failed, a1, b1);
    EXPECT_EQ(eta.alpha[0], a1);
    EXPECT_EQ(eta.beta[0], b1);
    EXPECT_EQ(mat_vec(f, helper_matrix(s, helpers), flatten(eta)), s.u_column(failed));
  }
}

TEST(Eta, FreePairDeterminesSolution) {
  const CodeState s = CodeState::init_systematic(4, 2, Field::gf256());
  const auto helpers = default_helpers(s, 3);
  // Distinct free pairs give distinct solutions.
  std::vector<Vector> seen;
  for (std::uint32_t a = 0; a < 4; ++a)
    for (std::uint32_t b = 0; b < 4; ++b)
      seen.push_back(flatten(solve_eta(s, helpers, 3, FieldElement(a), FieldElement(b))));
  std::sort(seen.begin(), seen.end());
  EXPECT_EQ(std::adjacent_find(seen.begin(), seen.end()), seen.end());
}

TEST(Eta, FixedPairAtOtherPositions) {
  const CodeState s = CodeState::init_systematic(4, 2, Field::gf256());
  const Field& f = s.field();
  const auto helpers = default_helpers(s, 0);
  const Matrix a = helper_matrix(s, helpers);
  for (std::size_t i = 0; i < 6; i += 2) {
    const Vector eta = solve_eta_fixed(s, helpers, 0, i, FieldElement(0), i + 1, FieldElement(1));
    EXPECT_EQ(eta[i], FieldElement(0));
    EXPECT_EQ(eta[i + 1], FieldElement(1));
    EXPECT_EQ(mat_vec(f, a, eta), s.u_column(0));
  }
}

TEST(Synthesize, Cases) {
  const CodeState s = CodeState::init_systematic(4, 2, Field::gf256());
  const Field& f = s.field();
  const auto helpers = default_helpers(s, 1);
  Rng rng(3);
  const Eta eta = solve_eta(s, helpers, 1, f.random_element(rng), f.random_element(rng));
  EXPECT_EQ(synthesize_v_prime(s, helpers, eta, Vector(3)), Vector(4));

  for (int trial = 0; trial < 30; ++trial) {
    const Vector rho = random_vector(f, 3, rng);
    Vector expected(4);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t r = 0; r < 4; ++r) {
        const FieldElement w = f.add(f.mul(eta.alpha[i], s.u_column(helpers[i])[r]),
                                     f.mul(eta.beta[i], s.v_column(helpers[i])[r]));
        expected[r] = f.add(expected[r], f.mul(rho[i], w));
      }
    }
    EXPECT_EQ(synthesize_v_prime(s, helpers, eta, rho), expected);
  }
}

TEST(AcceptCheck, RejectsDependentCandidates) {
  const CodeState s = CodeState::init_systematic(4, 2, Field::gf256());
  EXPECT_EQ(retained_columns(s, 1), (std::vector<std::size_t>{0, 1, 2, 3, 4, 6, 7}));
  EXPECT_FALSE(accept_check(s, 1, Vector(4)).ok);
  const SubsetScan dup = accept_check(s, 1, s.v_column(2));
  ASSERT_FALSE(dup.ok);
  EXPECT_NE(std::find(dup.first_violation.begin(), dup.first_violation.end(), 6u),
            dup.first_violation.end());
  EXPECT_FALSE(accept_check(s, 1, s.u_column(0)).ok);
  const SubsetScan old = accept_check(s, 1, s.v_column(1));
  EXPECT_TRUE(old.ok);
  EXPECT_EQ(old.checked, binomial(7, 3));
}

TEST(Repair, KeepsMdsOverManyRounds) {
  CodeState s = CodeState::init_systematic(4, 2, Field::gf256());
  const Matrix u0 = s.u();
  Rng rng(4);
  for (int round = 0; round < 200; ++round) {
    const std::size_t failed = rng.below(4);
    const RepairResult r = repair(s, failed, default_helpers(s, failed), rng);
    EXPECT_TRUE(transcript_consistent(s, r.transcript));
    EXPECT_EQ(r.transcript.epoch_before + 1, r.transcript.epoch_after);
    EXPECT_EQ(r.state.v_column(failed), r.transcript.v_prime);
    s = r.state;
    ASSERT_TRUE(is_mds(s).ok) << "round " << round;
    ASSERT_EQ(s.u(), u0);
  }
  EXPECT_EQ(s.epoch(), 200u);
}

TEST(Repair, SameSeedSameTranscript) {
  const CodeState s = CodeState::init_systematic(6, 3, Field::gf65536());
  const auto helpers = default_helpers(s, 4);
  Rng a(5);
  Rng b(5);
  EXPECT_EQ(repair(s, 4, helpers, a).transcript, repair(s, 4, helpers, b).transcript);
}

TEST(Repair, RetriesRareInLargeField) {
  CodeState s = CodeState::init_systematic(4, 2, Field::gf65536());
  Rng rng(6);
  std::uint64_t retries = 0;
  const int rounds = 1000;
  for (int round = 0; round < rounds; ++round) {
    const std::size_t failed = rng.below(4);
    RepairResult r = repair(s, failed, default_helpers(s, failed), rng);
    retries += r.transcript.retries;
    s = std::move(r.state);
  }
  EXPECT_LE(static_cast<double>(retries) / rounds, 0.05);
  EXPECT_TRUE(is_mds(s).ok);
}

TEST(Repair, RejectionRateWithinFieldBound) {
  // A draw is rejected with probability at most d0 / |F|.
  const auto f = std::make_shared<const Field>(12, 0x1053);
  CodeState s = CodeState::init_systematic(4, 2, f);
  Rng rng(7);
  std::uint64_t retries = 0;
  std::uint64_t draws = 0;
  for (int round = 0; round < 3000; ++round) {
    const std::size_t failed = rng.below(4);
    RepairResult r = repair(s, failed, default_helpers(s, failed), rng);
    retries += r.transcript.retries;
    draws += r.transcript.retries + 1;
    s = std::move(r.state);
  }
  const double p = static_cast<double>(d0(4, 2)) / static_cast<double>(f->order());
  const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(draws));
  EXPECT_LE(static_cast<double>(retries) / static_cast<double>(draws), p + 3 * sigma);
}

TEST(Repair, RetriesExhaustedInTinyField) {
  const CodeState s = small_field_state();
  std::optional<ErrorCode> seen;
  bool accepted = false;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Rng rng(seed);
    try {
      const RepairResult r = repair(s, 0, default_helpers(s, 0), rng, 0);
      EXPECT_EQ(r.transcript.retries, 0u);
      EXPECT_TRUE(is_mds(r.state).ok);
      accepted = true;
    } catch (const Error& e) {
      seen = e.code();
      EXPECT_EQ(e.code(), ErrorCode::kRetriesExhausted);
    }
  }
  EXPECT_TRUE(seen.has_value());
  EXPECT_TRUE(accepted);
  Rng rng(1);
  const RepairResult r = repair(s, 0, default_helpers(s, 0), rng, 1000);
  EXPECT_TRUE(is_mds(r.state).ok);
}

TEST(Witness, CoversEveryRetainedSubset) {
  const CodeState s = CodeState::init_systematic(4, 2, Field::gf256());
  for (std::size_t failed = 0; failed < 4; ++failed) {
    const auto helpers = default_helpers(s, failed);
    const auto retained = retained_columns(s, failed);
    std::size_t covered = 0;
    for_each_subset(retained.size(), 3, [&](std::span<const std::size_t> pick) {
      std::vector<std::size_t> subset;
      for (const std::size_t p : pick) subset.push_back(retained[p]);
      const Xi xi = claim1_witness(s, failed, helpers, subset);
      const Eta eta = solve_eta(s, helpers, failed, xi.alpha1, xi.beta1);
      const Vector vp = synthesize_v_prime(s, helpers, eta, xi.rho);
      EXPECT_TRUE(accept_at_subset(s, subset, vp)) << format_subset(s, subset);

      // v' is one helper's stored vector, and that vector is outside S.
      std::optional<std::size_t> column;
      for (const std::size_t h : helpers) {
        if (vp == s.v_column(h)) column = s.n() + h;
        else if (vp == s.u_column(h)) column = h;
      }
      EXPECT_TRUE(column.has_value());
      if (column) EXPECT_EQ(std::find(subset.begin(), subset.end(), *column), subset.end());
      ++covered;
      return true;
    });
    EXPECT_EQ(covered, 35u);
  }
}

TEST(Witness, PrefersVVectorsThenU) {
  const CodeState s = CodeState::init_systematic(4, 2, Field::gf256());
  const auto helpers = default_helpers(s, 3);  // nodes 0, 1, 2
  auto v_prime = [&](std::span<const std::size_t> subset) {
    const Xi xi = claim1_witness(s, 3, helpers, subset);
    const Eta eta = solve_eta(s, helpers, 3, xi.alpha1, xi.beta1);
    return synthesize_v_prime(s, helpers, eta, xi.rho);
  };
  const std::vector<std::size_t> empty_of_helper0{1, 5, 6};
  EXPECT_EQ(v_prime(empty_of_helper0), s.v_column(0));
  const std::vector<std::size_t> v_of_helper0{4, 1, 2};
  EXPECT_EQ(v_prime(v_of_helper0), s.v_column(1));
  const std::vector<std::size_t> every_helper_v{4, 5, 6};
  EXPECT_EQ(v_prime(every_helper_v), s.u_column(0));
  const std::vector<std::size_t> pair_of_helper0{0, 4, 1};
  EXPECT_EQ(v_prime(pair_of_helper0), s.v_column(1));
}

TEST(Download, ReproducesEncodedSymbols) {
  CodeState s = CodeState::init_systematic(6, 3, Field::gf65536());
  const Field& f = s.field();
  Rng rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    Stripe x{random_vector(f, 6, rng)};
    if (trial == 0) x.symbols.assign(6, FieldElement(0));
    const auto contents = encode(s, x);
    const std::size_t failed = rng.below(6);
    const RepairResult r = repair(s, failed, default_helpers(s, failed), rng);
    const auto [sym_u, sym_v] = repair_download(s, contents, r.transcript);
    EXPECT_EQ(sym_u, dot(f, x.symbols, s.u_column(failed)));
    EXPECT_EQ(sym_v, dot(f, x.symbols, r.transcript.v_prime));
    if (trial == 0) {
      EXPECT_TRUE(sym_u.is_zero());
      EXPECT_TRUE(sym_v.is_zero());
    }
    // One symbol per helper.
    Vector payloads;
    for (std::size_t p = 0; p < r.transcript.helpers.size(); ++p)
      payloads.push_back(helper_payload(f, r.transcript, p, contents[r.transcript.helpers[p]]));
    EXPECT_EQ(payloads.size(), 4u);
    EXPECT_EQ(combine_download(f, r.transcript, payloads), std::pair(sym_u, sym_v));
    s = r.state;
  }
}

TEST(Transcript, TamperingDetected) {
  const CodeState s = CodeState::init_systematic(4, 2, Field::gf256());
  Rng rng(9);
  const RepairResult r = repair(s, 2, default_helpers(s, 2), rng);
  ASSERT_TRUE(transcript_consistent(s, r.transcript));
  RepairTranscript t = r.transcript;
  t.v_prime[0] = s.field().add(t.v_prime[0], FieldElement(1));
  EXPECT_FALSE(transcript_consistent(s, t));
  t = r.transcript;
  t.xi.rho[1] = s.field().add(t.xi.rho[1], FieldElement(1));
  EXPECT_FALSE(transcript_consistent(s, t));
  t = r.transcript;
  t.alpha[2] = s.field().add(t.alpha[2], FieldElement(1));
  EXPECT_FALSE(transcript_consistent(s, t));
  EXPECT_FALSE(transcript_consistent(r.state, r.transcript));
}

}  // namespace
}  // namespace sysmds
