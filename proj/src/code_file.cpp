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

#include "sysmds/code_file.hpp"

#include <utility>

#include <json.hpp>

#include "sysmds/error.hpp"

namespace sysmds {

namespace {

using nlohmann::ordered_json;

std::size_t hex_width(const Field& field) { return (field.bits() + 3) / 4; }

std::string hex_symbol(FieldElement e, std::size_t width) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(width, '0');
  std::uint32_t v = e.value();
  for (std::size_t i = width; i-- > 0; v >>= 4) out[i] = kDigits[v & 0xF];
  return out;
}

std::string hex_poly(std::uint32_t poly) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string h;
  for (; poly != 0; poly >>= 4) h.insert(h.begin(), kDigits[poly & 0xF]);
  return "0x" + h;
}

std::string hex_vector(std::span<const FieldElement> values, std::size_t width) {
  std::string out;
  for (const FieldElement e : values) {
    if (!out.empty()) out += ' ';
    out += hex_symbol(e, width);
  }
  return out;
}

[[noreturn]] void parse_error(const std::string& what) {
  throw Error(ErrorCode::kParse, "code file: " + what);
}

FieldElement parse_symbol(std::string_view token, const Field& field) {
  if (token.size() != hex_width(field)) {
    parse_error("symbol '" + std::string(token) + "' has wrong width");
  }
  std::uint32_t v = 0;
  for (const char c : token) {
    std::uint32_t digit = 0;
    if (c >= '0' && c <= '9') {
      digit = static_cast<std::uint32_t>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      digit = static_cast<std::uint32_t>(c - 'a' + 10);
    } else {
      parse_error("symbol '" + std::string(token) + "' is not lowercase hex");
    }
    v = (v << 4) | digit;
  }
  if (!field.contains(v)) parse_error("symbol '" + std::string(token) + "' is outside the field");
  return FieldElement(static_cast<FieldElement::Rep>(v));
}

Vector parse_vector(const ordered_json& j, const Field& field, std::size_t expected,
                    const char* name) {
  if (!j.is_string()) parse_error(std::string(name) + " must be a string");
  const std::string& s = j.get_ref<const std::string&>();
  Vector out;
  std::size_t pos = 0;
  while (pos <= s.size() && !s.empty()) {
    const std::size_t next = s.find(' ', pos);
    const std::size_t end = next == std::string::npos ? s.size() : next;
    out.push_back(parse_symbol(std::string_view(s).substr(pos, end - pos), field));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (out.size() != expected) {
    parse_error(std::string(name) + " has " + std::to_string(out.size()) + " symbols, expected " +
                std::to_string(expected));
  }
  return out;
}

const ordered_json& member(const ordered_json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_error(std::string("missing key '") + key + "'");
  return j.at(key);
}

std::uint64_t as_uint(const ordered_json& j, const char* key) {
  const ordered_json& v = member(j, key);
  if (!v.is_number_unsigned()) {
    parse_error(std::string("'") + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::size_t as_node(const ordered_json& v, std::size_t n) {
  if (!v.is_number_unsigned()) parse_error("node numbers must be positive integers");
  const auto node = v.get<std::uint64_t>();
  if (node < 1 || node > n) parse_error("node number " + std::to_string(node) + " out of range");
  return static_cast<std::size_t>(node - 1);
}

Matrix parse_columns(const ordered_json& j, const Field& field, std::size_t n, std::size_t dim,
                     const char* name) {
  if (!j.is_array() || j.size() != n) {
    parse_error(std::string(name) + " must list " + std::to_string(n) + " columns");
  }
  Matrix m(dim, n);
  for (std::size_t c = 0; c < n; ++c) m.set_column(c, parse_vector(j[c], field, dim, name));
  return m;
}

ordered_json columns_json(const Matrix& m, std::size_t width) {
  ordered_json out = ordered_json::array();
  for (std::size_t c = 0; c < m.cols(); ++c) out.push_back(hex_vector(m.column(c), width));
  return out;
}

FieldPtr make_field(unsigned m, std::uint32_t poly) {
  if (m == 8 && poly == Field::kGf256Poly) return Field::gf256();
  if (m == 16 && poly == Field::kGf65536Poly) return Field::gf65536();
  return std::make_shared<const Field>(m, poly);
}

}  // namespace

std::string serialize(const StoredCode& code) {
  const CodeState& s = code.state;
  const std::size_t width = hex_width(s.field());
  ordered_json j;
  j["version"] = kCodeFileVersion;
  ordered_json field;
  field["m"] = s.field().bits();
  field["reduction_poly"] = hex_poly(s.field().reduction_poly());
  j["field"] = field;
  j["n"] = s.n();
  j["k"] = s.k();
  j["epoch"] = s.epoch();
  j["U"] = columns_json(s.u(), width);
  j["V"] = columns_json(s.v(), width);

  ordered_json history = ordered_json::array();
  for (const RepairTranscript& t : code.history) {
    ordered_json e;
    e["epoch_before"] = t.epoch_before;
    e["epoch_after"] = t.epoch_after;
    e["failed"] = t.failed + 1;
    ordered_json helpers = ordered_json::array();
    for (const std::size_t h : t.helpers) helpers.push_back(h + 1);
    e["helpers"] = helpers;
    ordered_json xi;
    xi["alpha1"] = hex_symbol(t.xi.alpha1, width);
    xi["beta1"] = hex_symbol(t.xi.beta1, width);
    xi["rho"] = hex_vector(t.xi.rho, width);
    e["xi"] = xi;
    e["alpha"] = hex_vector(t.alpha, width);
    e["beta"] = hex_vector(t.beta, width);
    e["v_prime"] = hex_vector(t.v_prime, width);
    e["retries"] = t.retries;
    history.push_back(e);
  }
  j["history"] = history;
  return j.dump(2) + "\n";
}

StoredCode parse_code_file(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    parse_error(std::string("invalid JSON: ") + e.what());
  }
  const ordered_json& version = member(j, "version");
  if (!version.is_string() || version.get<std::string>() != kCodeFileVersion) {
    parse_error("unsupported version (expected " + std::string(kCodeFileVersion) + ")");
  }

  const ordered_json& field_j = member(j, "field");
  const std::uint64_t m = as_uint(field_j, "m");
  const ordered_json& poly_j = member(field_j, "reduction_poly");
  if (!poly_j.is_string()) parse_error("reduction_poly must be a hex string");
  const std::string poly_s = poly_j.get<std::string>();
  if (poly_s.size() < 3 || poly_s.rfind("0x", 0) != 0 || poly_s.size() > 7) {
    parse_error("reduction_poly must look like 0x11d");
  }
  std::uint32_t poly = 0;
  for (const char c : poly_s.substr(2)) {
    if (c >= '0' && c <= '9') {
      poly = (poly << 4) | static_cast<std::uint32_t>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      poly = (poly << 4) | static_cast<std::uint32_t>(c - 'a' + 10);
    } else {
      parse_error("reduction_poly must be lowercase hex");
    }
  }
  if (m > 16) parse_error("field width too large");
  const FieldPtr field = make_field(static_cast<unsigned>(m), poly);

  const std::uint64_t n64 = as_uint(j, "n");
  const std::uint64_t k64 = as_uint(j, "k");
  if (n64 > 64 || k64 > 32) parse_error("code shape too large");
  const auto n = static_cast<std::size_t>(n64);
  const auto k = static_cast<std::size_t>(k64);
  const std::uint64_t epoch = as_uint(j, "epoch");
  const std::size_t dim = 2 * k;

  Matrix u = parse_columns(member(j, "U"), *field, n, dim, "U");
  Matrix v = parse_columns(member(j, "V"), *field, n, dim, "V");
  StoredCode out{CodeState(n, k, field, std::move(u), std::move(v), epoch), {}};

  const ordered_json& history = member(j, "history");
  if (!history.is_array()) parse_error("history must be a list");
  for (const ordered_json& e : history) {
    RepairTranscript t;
    t.epoch_before = as_uint(e, "epoch_before");
    t.epoch_after = as_uint(e, "epoch_after");
    t.failed = as_node(member(e, "failed"), n);
    const ordered_json& helpers = member(e, "helpers");
    if (!helpers.is_array()) parse_error("helpers must be a list");
    for (const ordered_json& h : helpers) t.helpers.push_back(as_node(h, n));
    const std::size_t count = t.helpers.size();
    const ordered_json& xi = member(e, "xi");
    t.xi.alpha1 = parse_vector(member(xi, "alpha1"), *field, 1, "xi.alpha1")[0];
    t.xi.beta1 = parse_vector(member(xi, "beta1"), *field, 1, "xi.beta1")[0];
    t.xi.rho = parse_vector(member(xi, "rho"), *field, count, "xi.rho");
    t.alpha = parse_vector(member(e, "alpha"), *field, count, "alpha");
    t.beta = parse_vector(member(e, "beta"), *field, count, "beta");
    t.v_prime = parse_vector(member(e, "v_prime"), *field, dim, "v_prime");
    const std::uint64_t retries = as_uint(e, "retries");
    if (retries > UINT32_MAX) parse_error("retries out of range");
    t.retries = static_cast<std::uint32_t>(retries);
    out.history.push_back(std::move(t));
  }
  return out;
}

StoredCode load_code_file(std::string_view text) {
  StoredCode code = parse_code_file(text);
  validate_invariants(code.state);
  return code;
}

VerifyReport verify(const StoredCode& code) {
  VerifyReport report;
  report.systematic = is_systematic(code.state);
  report.mds = is_mds(code.state);

  auto fail = [&](std::string why) {
    report.history_ok = false;
    report.history_problem = std::move(why);
    return report;
  };
  const CodeState& s = code.state;
  if (s.epoch() != code.history.size()) {
    return fail("epoch " + std::to_string(s.epoch()) + " but " +
                std::to_string(code.history.size()) + " transcripts");
  }
  try {
    CodeState replay = CodeState::init_systematic(s.n(), s.k(), s.field_ptr());
    for (std::size_t i = 0; i < code.history.size(); ++i) {
      const RepairTranscript& t = code.history[i];
      if (!transcript_consistent(replay, t)) {
        return fail("transcript " + std::to_string(i + 1) + " is inconsistent with epoch " +
                    std::to_string(replay.epoch()));
      }
      replay = replay.with_v_column(t.failed, t.v_prime);
      if (i + 1 < code.history.size() && !is_mds(replay).ok) {
        return fail("state after transcript " + std::to_string(i + 1) + " is not MDS");
      }
    }
    if (replay.u() != s.u() || replay.v() != s.v()) {
      return fail("replayed history does not reproduce the stored vectors");
    }
  } catch (const Error& e) {
    return fail(std::string("replay failed: ") + e.what());
  }
  report.history_ok = true;
  return report;
}

}  // namespace sysmds
