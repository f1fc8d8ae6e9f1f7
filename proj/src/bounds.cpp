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

#include <numeric>

#include "sysmds/error.hpp"
#include "sysmds/subsets.hpp"

namespace sysmds {

namespace {

__extension__ typedef __int128 Wide;

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw Error(ErrorCode::kOverflow, "rational arithmetic overflow");
  }
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw Error(ErrorCode::kOverflow, "rational arithmetic overflow");
  }
  return out;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorCode::kInvalidArgument, "rational with zero denominator");
  if (den < 0) {
    num = checked_mul(num, -1);
    den = checked_mul(den, -1);
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  const std::int64_t g = std::gcd(a.den_, b.den_);
  return Rational(checked_add(checked_mul(a.num_, b.den_ / g), checked_mul(b.num_, a.den_ / g)),
                  checked_mul(a.den_ / g, b.den_));
}

Rational operator-(const Rational& a, const Rational& b) {
  return a + Rational(checked_mul(b.num_, -1), b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  const std::int64_t g1 = std::gcd(a.num_, b.den_);
  const std::int64_t g2 = std::gcd(b.num_, a.den_);
  // Denominators are positive, so neither gcd is zero.
  return Rational(checked_mul(a.num_ / g1, b.num_ / g2), checked_mul(a.den_ / g2, b.den_ / g1));
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw Error(ErrorCode::kInvalidArgument, "rational division by zero");
  return a * Rational(b.den_, b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const Wide lhs = static_cast<Wide>(a.num_) * b.den_;
  const Wide rhs = static_cast<Wide>(b.num_) * a.den_;
  return lhs <=> rhs;
}

Rational cut_bound(std::int64_t file_symbols, std::int64_t k, std::int64_t d) {
  if (k < 1) throw Error(ErrorCode::kBadShape, "k must be at least 1");
  if (d < k) {
    throw Error(ErrorCode::kBadShape, "cut bound needs d >= k (d=" + std::to_string(d) +
                                          ", k=" + std::to_string(k) + ")");
  }
  if (file_symbols <= 0) throw Error(ErrorCode::kBadShape, "file size must be positive");
  return Rational(file_symbols) * Rational(d, checked_mul(k, d - k + 1));
}

CutCheck check_cut_inequalities(const RepairPlan& plan, std::int64_t k) {
  const std::size_t d = plan.beta.size();
  if (k < 1 || d < static_cast<std::size_t>(k)) {
    throw Error(ErrorCode::kBadShape, "cut inequalities need d >= k >= 1");
  }
  const Rational stored = Rational(k - 1) * plan.node_symbols;
  CutCheck out;
  std::vector<bool> in_p(d);
  for_each_subset(d, static_cast<std::size_t>(k - 1), [&](std::span<const std::size_t> p) {
    std::fill(in_p.begin(), in_p.end(), false);
    for (const std::size_t i : p) in_p[i] = true;
    Rational cut = stored;
    for (std::size_t i = 0; i < d; ++i) {
      if (!in_p[i]) cut += plan.beta[i];
    }
    ++out.checked;
    if (cut != plan.file_symbols) out.all_tight = false;
    if (cut < plan.file_symbols) {
      out.ok = false;
      out.first_violation.assign(p.begin(), p.end());
      return false;
    }
    return true;
  });
  return out;
}

RepairPlan realized_plan(std::int64_t k) {
  if (k < 1) throw Error(ErrorCode::kBadShape, "k must be at least 1");
  return RepairPlan{Rational(2 * k), Rational(2),
                    std::vector<Rational>(static_cast<std::size_t>(k + 1), Rational(1))};
}

std::uint64_t d0(std::uint64_t n, std::uint64_t k) {
  if (k == 0 || 2 * k > n) {
    throw Error(ErrorCode::kBadShape, "d0 needs 1 <= k and 2k <= n");
  }
  const std::uint64_t c = binomial(2 * n - 1, 2 * k - 1);
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(c, std::uint64_t{2}, &out)) {
    throw Error(ErrorCode::kOverflow, "d0 overflows 64 bits");
  }
  return out;
}

}  // namespace sysmds
