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
#include <numeric>
#include <span>
#include <vector>

#include "sysmds/error.hpp"

namespace sysmds {

/// Exact binomial coefficient; throws Overflow if it does not fit 64 bits.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  std::uint64_t out = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    // out * (n - r + i) / i is exact at every step.
    const std::uint64_t g = std::gcd(out, i);
    const std::uint64_t factor = (n - r + i) / (i / g);
    std::uint64_t next = 0;
    if (__builtin_mul_overflow(out / g, factor, &next)) {
      throw Error(ErrorCode::kOverflow, "binomial coefficient overflows 64 bits");
    }
    out = next;
  }
  return out;
}

/// Calls fn(subset) for every r-subset of {0..n-1} in lexicographic order.
/// Stops early when fn returns false; returns false in that case.
template <typename Fn>
bool for_each_subset(std::size_t n, std::size_t r, Fn&& fn) {
  if (r > n) return true;
  std::vector<std::size_t> idx(r);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (;;) {
    if (!fn(std::span<const std::size_t>(idx))) return false;
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == n - r + (i - 1)) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace sysmds
