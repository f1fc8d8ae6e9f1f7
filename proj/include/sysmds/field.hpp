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
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

namespace sysmds {

/// An element of GF(2^m), m <= 16. Addition is field independent (XOR);
/// everything else goes through a Field.
class FieldElement {
 public:
  using Rep = std::uint16_t;

  constexpr FieldElement() = default;
  constexpr explicit FieldElement(Rep value) : value_(value) {}

  constexpr Rep value() const { return value_; }
  constexpr bool is_zero() const { return value_ == 0; }

  friend constexpr FieldElement operator+(FieldElement a, FieldElement b) {
    return FieldElement(static_cast<Rep>(a.value_ ^ b.value_));
  }
  friend constexpr FieldElement operator-(FieldElement a, FieldElement b) {
    return a + b;
  }
  constexpr FieldElement& operator+=(FieldElement other) {
    value_ ^= other.value_;
    return *this;
  }

  friend constexpr auto operator<=>(FieldElement, FieldElement) = default;

 private:
  Rep value_ = 0;
};

/// Seeded random stream. One stream per logical task; never shared.
///
/// Raw 64-bit outputs of mt19937_64 are consumed directly (masked or
/// rejection sampled) so that sequences are identical across standard
/// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be nonzero.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

/// GF(2^m) defined by a primitive reduction polynomial, with log/antilog
/// tables built once at construction. Immutable afterwards.
class Field {
 public:
  static constexpr std::uint32_t kGf256Poly = 0x11D;
  static constexpr std::uint32_t kGf65536Poly = 0x1100B;

  /// Throws Error(kBadField) unless 2 <= m <= 16, the polynomial has degree
  /// exactly m, and x generates the full multiplicative group.
  Field(unsigned m, std::uint32_t reduction_poly);

  /// Shared GF(2^8)/0x11D and GF(2^16)/0x1100B instances.
  static std::shared_ptr<const Field> gf256();
  static std::shared_ptr<const Field> gf65536();
  /// Shared instance for m in {8, 16} with the default polynomial.
  static std::shared_ptr<const Field> standard(unsigned m);

  unsigned bits() const { return bits_; }
  std::uint32_t reduction_poly() const { return poly_; }
  std::uint32_t order() const { return order_; }

  bool contains(std::uint32_t value) const { return value < order_; }
  /// Checked conversion from an integer.
  FieldElement element(std::uint32_t value) const;

  FieldElement add(FieldElement a, FieldElement b) const { return a + b; }
  FieldElement mul(FieldElement a, FieldElement b) const;
  FieldElement inv(FieldElement a) const;
  FieldElement div(FieldElement a, FieldElement b) const;

  /// Uniform over all 2^m values.
  FieldElement random_element(Rng& rng) const;

  friend bool operator==(const Field& a, const Field& b) {
    return a.bits_ == b.bits_ && a.poly_ == b.poly_;
  }

 private:
  unsigned bits_;
  std::uint32_t poly_;
  std::uint32_t order_;
  std::vector<std::uint16_t> log_;
  std::vector<std::uint16_t> exp_;  // doubled so log sums need no reduction
};

using FieldPtr = std::shared_ptr<const Field>;

/// Number of Field::mul/inv/div calls made on the calling thread.
std::uint64_t field_mul_count() noexcept;

}  // namespace sysmds
