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

#include "sysmds/bounds.hpp"

#include <cstdint>
#include <limits>
#include <ostream>

#include "gtest/gtest.h"
#include "sysmds/error.hpp"
#include "sysmds/field.hpp"
#include "sysmds/subsets.hpp"

namespace sysmds {

void PrintTo(const Rational& r, std::ostream* os) { *os << r.to_string(); }

namespace {

TEST(Rational, NormalizesAndFormats) {
  EXPECT_EQ(Rational(6, 8), Rational(3, 4));
  EXPECT_EQ(Rational(3, -4), Rational(-3, 4));
  EXPECT_EQ(Rational(6, 8).to_string(), "3/4");
  EXPECT_EQ(Rational(9, 3).to_string(), "3");
  EXPECT_EQ(Rational(0, 5).to_string(), "0");
  EXPECT_EQ(Rational(1, 2) + Rational(1, 3), Rational(5, 6));
  EXPECT_EQ(Rational(1, 2) - Rational(1, 3), Rational(1, 6));
  EXPECT_EQ(Rational(2, 3) * Rational(3, 4), Rational(1, 2));
  EXPECT_EQ(Rational(2, 3) / Rational(4, 3), Rational(1, 2));
  EXPECT_LT(Rational(2, 3), Rational(3, 4));
  EXPECT_GT(Rational(-1, 3), Rational(-1, 2));
  EXPECT_THROW(Rational(1, 0), Error);
  EXPECT_THROW(Rational(1) / Rational(0), Error);
  const std::int64_t big = std::numeric_limits<std::int64_t>::max();
  EXPECT_THROW(Rational(big) + Rational(1), Error);
  EXPECT_THROW(Rational(big) * Rational(2), Error);
}

TEST(CutBound, KnownValues) {
  EXPECT_EQ(cut_bound(4, 2, 3), Rational(3));
  EXPECT_EQ(cut_bound(6, 3, 4), Rational(4));
  EXPECT_EQ(cut_bound(6, 3, 5), Rational(10, 3));
  EXPECT_EQ(cut_bound(1, 1, 1), Rational(1));
  for (std::int64_t k = 1; k <= 10; ++k) {
    EXPECT_EQ(cut_bound(2 * k, k, k + 1), Rational(k + 1));
    EXPECT_EQ(cut_bound(7 * k, k, k), Rational(7 * k));
  }
  EXPECT_THROW(cut_bound(4, 2, 1), Error);
  EXPECT_THROW(cut_bound(4, 0, 3), Error);
  EXPECT_THROW(cut_bound(0, 2, 3), Error);
}

TEST(CutBound, DecreasesWithMoreHelpers) {
  // With k = 1 every helper count costs exactly one node's worth.
  EXPECT_EQ(cut_bound(2, 1, 5), Rational(2));
  for (std::int64_t k = 2; k <= 6; ++k) {
    for (std::int64_t d = k; d < k + 10; ++d) {
      EXPECT_GT(cut_bound(2 * k, k, d), cut_bound(2 * k, k, d + 1));
      // Never below one node's worth of data.
      EXPECT_GT(cut_bound(2 * k, k, d), Rational(2));
    }
  }
}

TEST(CutInequalities, UniformOptimumIsTight) {
  for (std::int64_t k = 1; k <= 5; ++k) {
    for (std::int64_t d = k; d <= k + 4; ++d) {
      const std::int64_t b = 2 * k;
      RepairPlan plan{Rational(b), Rational(b, k), {}};
      plan.beta.assign(static_cast<std::size_t>(d), cut_bound(b, k, d) / Rational(d));
      const CutCheck c = check_cut_inequalities(plan, k);
      EXPECT_TRUE(c.ok);
      EXPECT_TRUE(c.all_tight);
    }
  }
}

TEST(CutInequalities, ShortfallDetected) {
  RepairPlan plan{Rational(4), Rational(2), {Rational(1), Rational(1), Rational(0)}};
  const CutCheck c = check_cut_inequalities(plan, 2);
  EXPECT_FALSE(c.ok);
  EXPECT_EQ(c.first_violation, (std::vector<std::size_t>{0}));
  plan.beta = {Rational(2), Rational(1), Rational(1)};
  const CutCheck loose = check_cut_inequalities(plan, 2);
  EXPECT_TRUE(loose.ok);
  EXPECT_FALSE(loose.all_tight);
  EXPECT_EQ(loose.checked, 3u);
}

TEST(CutInequalities, RealizedPlanIsTight) {
  for (std::int64_t k = 1; k <= 8; ++k) {
    const RepairPlan plan = realized_plan(k);
    EXPECT_EQ(plan.file_symbols, Rational(2 * k));
    EXPECT_EQ(plan.node_symbols, Rational(2));
    ASSERT_EQ(plan.beta.size(), static_cast<std::size_t>(k + 1));
    Rational total;
    for (const Rational& b : plan.beta) total += b;
    EXPECT_EQ(total, cut_bound(2 * k, k, k + 1));
    const CutCheck c = check_cut_inequalities(plan, k);
    EXPECT_TRUE(c.ok);
    EXPECT_TRUE(c.all_tight);
    const auto kk = static_cast<std::size_t>(k);
    EXPECT_EQ(c.checked, binomial(kk + 1, kk - 1));
  }
}

TEST(CutInequalities, FeasiblePlansMeetBound) {
  Rng rng(21);
  int feasible = 0;
  for (int trial = 0; trial < 4000; ++trial) {
    const std::int64_t k = 1 + static_cast<std::int64_t>(rng.below(4));
    const std::int64_t d = k + static_cast<std::int64_t>(rng.below(4));
    const std::int64_t b = 2 * k;
    RepairPlan plan{Rational(b), Rational(b, k), {}};
    for (std::int64_t i = 0; i < d; ++i)
      plan.beta.emplace_back(static_cast<std::int64_t>(rng.below(13)), 6);
    if (!check_cut_inequalities(plan, k).ok) continue;
    ++feasible;
    Rational total;
    for (const Rational& x : plan.beta) total += x;
    EXPECT_GE(total, cut_bound(b, k, d));
  }
  EXPECT_GT(feasible, 100);
}

TEST(D0, KnownValues) {
  EXPECT_EQ(d0(4, 2), 70u);
  EXPECT_EQ(d0(6, 3), 924u);
  EXPECT_EQ(d0(2, 1), 6u);
  EXPECT_EQ(d0(5, 2), 2u * 84u);
}

}  // namespace
}  // namespace sysmds
