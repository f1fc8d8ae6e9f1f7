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

#include "sysmds/field.hpp"

#include <bit>
#include <string>

#include "sysmds/error.hpp"

namespace sysmds {

namespace {

thread_local std::uint64_t g_mul_count = 0;

std::string hex(std::uint32_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  do {
    out.insert(out.begin(), kDigits[v & 0xF]);
    v >>= 4;
  } while (v != 0);
  return "0x" + out;
}

}  // namespace

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kBadField: return "BadField";
    case ErrorCode::kZeroInverse: return "ZeroInverse";
    case ErrorCode::kNonSquare: return "NonSquare";
    case ErrorCode::kSingular: return "Singular";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kBadShape: return "BadShape";
    case ErrorCode::kUnsupportedShape: return "UnsupportedShape";
    case ErrorCode::kFieldTooSmall: return "FieldTooSmall";
    case ErrorCode::kMissingNode: return "MissingNode";
    case ErrorCode::kBadHelpers: return "BadHelpers";
    case ErrorCode::kRetriesExhausted: return "RetriesExhausted";
    case ErrorCode::kTooFewSurvivors: return "TooFewSurvivors";
    case ErrorCode::kTooFewNodes: return "TooFewNodes";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
    case ErrorCode::kOverflow: return "Overflow";
    case ErrorCode::kParse: return "Parse";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kInvalidArgument, "Rng::below(0)");
  // Largest multiple of bound representable; reject the tail.
  const std::uint64_t limit = bound * (UINT64_MAX / bound);
  for (;;) {
    const std::uint64_t r = engine_();
    if (r < limit) return r % bound;
  }
}

Field::Field(unsigned m, std::uint32_t reduction_poly)
    : bits_(m), poly_(reduction_poly), order_(0) {
  if (m < 2 || m > 16) {
    throw Error(ErrorCode::kBadField,
                "field bit width must be in [2, 16], got " + std::to_string(m));
  }
  order_ = 1u << m;
  if (std::bit_width(reduction_poly) != m + 1) {
    throw Error(ErrorCode::kBadField, "reduction polynomial " + hex(reduction_poly) +
                                          " does not have degree " + std::to_string(m));
  }
  const std::uint32_t group = order_ - 1;
  log_.assign(order_, 0);
  exp_.assign(2 * static_cast<std::size_t>(group), 0);
  std::uint32_t value = 1;
  for (std::uint32_t i = 0; i < group; ++i) {
    if (value == 1 && i != 0) {
      throw Error(ErrorCode::kBadField, "reduction polynomial " + hex(reduction_poly) +
                                            " is not primitive: x has order " +
                                            std::to_string(i));
    }
    if (value == 0) {
      throw Error(ErrorCode::kBadField,
                  "reduction polynomial " + hex(reduction_poly) + " is reducible");
    }
    exp_[i] = static_cast<std::uint16_t>(value);
    exp_[i + group] = static_cast<std::uint16_t>(value);
    log_[value] = static_cast<std::uint16_t>(i);
    value <<= 1;
    if (value & order_) value ^= reduction_poly;
  }
  if (value != 1) {
    throw Error(ErrorCode::kBadField,
                "reduction polynomial " + hex(reduction_poly) + " is not primitive");
  }
}

std::shared_ptr<const Field> Field::gf256() {
  static const auto field = std::make_shared<const Field>(8, kGf256Poly);
  return field;
}

std::shared_ptr<const Field> Field::gf65536() {
  static const auto field = std::make_shared<const Field>(16, kGf65536Poly);
  return field;
}

std::shared_ptr<const Field> Field::standard(unsigned m) {
  if (m == 8) return gf256();
  if (m == 16) return gf65536();
  throw Error(ErrorCode::kBadField,
              "no standard field for bit width " + std::to_string(m) + " (use 8 or 16)");
}

FieldElement Field::element(std::uint32_t value) const {
  if (!contains(value)) {
    throw Error(ErrorCode::kBadField, "value " + hex(value) + " is outside GF(2^" +
                                          std::to_string(bits_) + ")");
  }
  return FieldElement(static_cast<FieldElement::Rep>(value));
}

FieldElement Field::mul(FieldElement a, FieldElement b) const {
  ++g_mul_count;
  if (a.is_zero() || b.is_zero()) return FieldElement();
  return FieldElement(exp_[static_cast<std::size_t>(log_[a.value()]) + log_[b.value()]]);
}

FieldElement Field::inv(FieldElement a) const {
  ++g_mul_count;
  if (a.is_zero()) throw Error(ErrorCode::kZeroInverse, "inverse of zero");
  const std::uint32_t group = order_ - 1;
  return FieldElement(exp_[(group - log_[a.value()]) % group]);
}

FieldElement Field::div(FieldElement a, FieldElement b) const {
  ++g_mul_count;
  if (b.is_zero()) throw Error(ErrorCode::kZeroInverse, "division by zero");
  if (a.is_zero()) return FieldElement();
  const std::uint32_t group = order_ - 1;
  return FieldElement(exp_[log_[a.value()] + group - log_[b.value()]]);
}

FieldElement Field::random_element(Rng& rng) const {
  // order_ divides 2^64, so masking is exactly uniform.
  return FieldElement(static_cast<FieldElement::Rep>(rng.next() & (order_ - 1)));
}

std::uint64_t field_mul_count() noexcept { return g_mul_count; }

}  // namespace sysmds
