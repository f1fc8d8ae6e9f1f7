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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace sysmds {

/// Exact rational with a positive denominator, always in lowest terms.
/// Arithmetic throws Overflow rather than wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_integer() const { return den_ == 1; }

  /// "3" or "3/4".
  std::string to_string() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& other) { return *this = *this + other; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Minimum total repair traffic B*d / (k*(d-k+1)) in symbols, for a file of
/// B symbols stored at alpha = B/k per node and repaired from d >= k helpers.
Rational cut_bound(std::int64_t file_symbols, std::int64_t k, std::int64_t d);

/// A repair download plan. d is beta.size().
struct RepairPlan {
  Rational file_symbols;    // B
  Rational node_symbols;    // alpha, B/k for MDS storage
  std::vector<Rational> beta;
};

struct CutCheck {
  bool ok = true;
  /// Every inequality holds with equality.
  bool all_tight = true;
  std::uint64_t checked = 0;
  /// Helper positions P of the first violated inequality.
  std::vector<std::size_t> first_violation;
};

/// For every (k-1)-subset P of the d helpers checks
///   (k-1)*alpha + sum_{i not in P} beta_i >= B.
CutCheck check_cut_inequalities(const RepairPlan& plan, std::int64_t k);

/// The plan realized by one repair of this construction: one symbol from
/// each of k+1 helpers, alpha = 2, B = 2k.
RepairPlan realized_plan(std::int64_t k);

/// Field-size threshold 2 * C(2n-1, 2k-1).
std::uint64_t d0(std::uint64_t n, std::uint64_t k);

}  // namespace sysmds
