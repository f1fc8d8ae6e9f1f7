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

#include "sysmds/sysmds.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sysmds/bounds.hpp"
#include "sysmds/code_file.hpp"
#include "sysmds/error.hpp"
#include "sysmds/sim.hpp"

struct sysmds_code {
  sysmds::StoredCode stored;
};

struct sysmds_cluster {
  sysmds::Cluster cluster;
  sysmds::Rng rng;
};

namespace {

using sysmds::Error;
using sysmds::ErrorCode;

thread_local std::string g_last_error;

sysmds_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBadField: return SYSMDS_ERR_BAD_FIELD;
    case ErrorCode::kZeroInverse: return SYSMDS_ERR_ZERO_INVERSE;
    case ErrorCode::kNonSquare: return SYSMDS_ERR_NON_SQUARE;
    case ErrorCode::kSingular: return SYSMDS_ERR_SINGULAR;
    case ErrorCode::kDimensionMismatch: return SYSMDS_ERR_DIMENSION_MISMATCH;
    case ErrorCode::kBadShape: return SYSMDS_ERR_BAD_SHAPE;
    case ErrorCode::kUnsupportedShape: return SYSMDS_ERR_UNSUPPORTED_SHAPE;
    case ErrorCode::kFieldTooSmall: return SYSMDS_ERR_FIELD_TOO_SMALL;
    case ErrorCode::kMissingNode: return SYSMDS_ERR_MISSING_NODE;
    case ErrorCode::kBadHelpers: return SYSMDS_ERR_BAD_HELPERS;
    case ErrorCode::kRetriesExhausted: return SYSMDS_ERR_RETRIES_EXHAUSTED;
    case ErrorCode::kTooFewSurvivors: return SYSMDS_ERR_TOO_FEW_SURVIVORS;
    case ErrorCode::kTooFewNodes: return SYSMDS_ERR_TOO_FEW_NODES;
    case ErrorCode::kInvariantViolation: return SYSMDS_ERR_INVARIANT_VIOLATION;
    case ErrorCode::kOverflow: return SYSMDS_ERR_OVERFLOW;
    case ErrorCode::kParse: return SYSMDS_ERR_PARSE;
    case ErrorCode::kInvalidArgument: return SYSMDS_ERR_INVALID_ARGUMENT;
  }
  return SYSMDS_ERR_INTERNAL;
}

template <typename Fn>
sysmds_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    g_last_error.clear();
    return SYSMDS_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SYSMDS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SYSMDS_ERR_INTERNAL;
  }
}

void require(bool condition, const char* what) {
  if (!condition) throw Error(ErrorCode::kInvalidArgument, what);
}

// 1-based external node number to 0-based index.
std::size_t node_index(std::uint32_t node) {
  if (node == 0) throw Error(ErrorCode::kInvalidArgument, "node numbers start at 1");
  return node - 1;
}

std::vector<std::size_t> node_indices(const std::uint32_t* nodes, std::size_t count) {
  require(count == 0 || nodes != nullptr, "node list is null");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(node_index(nodes[i]));
  return out;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <std::size_t N>
void copy_fixed(char (&dst)[N], const std::string& s) {
  const std::size_t len = std::min(s.size(), N - 1);
  std::memcpy(dst, s.data(), len);
  dst[len] = '\0';
}

void give_bytes(const std::vector<std::uint8_t>& data, std::uint8_t** bytes, std::size_t* length) {
  auto* out = static_cast<std::uint8_t*>(std::malloc(data.empty() ? 1 : data.size()));
  if (out == nullptr) throw std::bad_alloc();
  if (!data.empty()) std::memcpy(out, data.data(), data.size());
  *bytes = out;
  *length = data.size();
}

void fill_repair_result(const sysmds::RepairTranscript& t, std::size_t k,
                        sysmds_repair_result* out) {
  *out = sysmds_repair_result{};
  out->failed = static_cast<std::uint32_t>(t.failed + 1);
  out->helper_count = static_cast<std::uint32_t>(t.helpers.size());
  for (std::size_t i = 0; i < t.helpers.size() && i < SYSMDS_MAX_NODES; ++i) {
    out->helpers[i] = static_cast<std::uint32_t>(t.helpers[i] + 1);
  }
  out->retries = t.retries;
  out->epoch_after = t.epoch_after;
  out->downloaded_symbols = t.helpers.size();
  const auto kk = static_cast<std::int64_t>(k);
  const sysmds::Rational bound = sysmds::cut_bound(2 * kk, kk, kk + 1);
  out->bound_num = bound.num();
  out->bound_den = bound.den();
  out->naive_symbols = 2 * k;
}

}  // namespace

extern "C" {

const char* sysmds_version(void) { return "1.0.0"; }

const char* sysmds_status_name(sysmds_status status) {
  switch (status) {
    case SYSMDS_OK: return "OK";
    case SYSMDS_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case SYSMDS_ERR_BAD_FIELD: return "BadField";
    case SYSMDS_ERR_BAD_SHAPE: return "BadShape";
    case SYSMDS_ERR_UNSUPPORTED_SHAPE: return "UnsupportedShape";
    case SYSMDS_ERR_FIELD_TOO_SMALL: return "FieldTooSmall";
    case SYSMDS_ERR_ZERO_INVERSE: return "ZeroInverse";
    case SYSMDS_ERR_NON_SQUARE: return "NonSquare";
    case SYSMDS_ERR_SINGULAR: return "Singular";
    case SYSMDS_ERR_DIMENSION_MISMATCH: return "DimensionMismatch";
    case SYSMDS_ERR_MISSING_NODE: return "MissingNode";
    case SYSMDS_ERR_BAD_HELPERS: return "BadHelpers";
    case SYSMDS_ERR_RETRIES_EXHAUSTED: return "RetriesExhausted";
    case SYSMDS_ERR_TOO_FEW_SURVIVORS: return "TooFewSurvivors";
    case SYSMDS_ERR_TOO_FEW_NODES: return "TooFewNodes";
    case SYSMDS_ERR_INVARIANT_VIOLATION: return "InvariantViolation";
    case SYSMDS_ERR_OVERFLOW: return "Overflow";
    case SYSMDS_ERR_PARSE: return "Parse";
    case SYSMDS_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

const char* sysmds_last_error(void) { return g_last_error.c_str(); }

void sysmds_free_string(char* text) { std::free(text); }
void sysmds_free_bytes(uint8_t* bytes) { std::free(bytes); }

sysmds_status sysmds_cut_bound(int64_t file_symbols, int64_t k, int64_t d, int64_t* num,
                               int64_t* den) {
  return guarded([&] {
    require(num != nullptr && den != nullptr, "output pointers are null");
    const sysmds::Rational r = sysmds::cut_bound(file_symbols, k, d);
    *num = r.num();
    *den = r.den();
  });
}

sysmds_status sysmds_d0(uint64_t n, uint64_t k, uint64_t* out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    *out = sysmds::d0(n, k);
  });
}

sysmds_status sysmds_code_create(uint32_t n, uint32_t k, uint32_t field_bits, uint64_t seed,
                                 sysmds_code** out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    require(n <= SYSMDS_MAX_NODES, "n exceeds SYSMDS_MAX_NODES");
    auto state =
        sysmds::CodeState::init_systematic(n, k, sysmds::Field::standard(field_bits), seed);
    *out = new sysmds_code{sysmds::StoredCode{std::move(state), {}}};
  });
}

sysmds_status sysmds_code_parse(const char* text, size_t length, sysmds_code** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = new sysmds_code{sysmds::parse_code_file(std::string_view(text, length))};
  });
}

sysmds_status sysmds_code_load(const char* text, size_t length, sysmds_code** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = new sysmds_code{sysmds::load_code_file(std::string_view(text, length))};
  });
}

void sysmds_code_free(sysmds_code* code) { delete code; }

sysmds_status sysmds_code_serialize(const sysmds_code* code, char** text, size_t* length) {
  return guarded([&] {
    require(code != nullptr && text != nullptr, "null argument");
    const std::string s = sysmds::serialize(code->stored);
    *text = copy_string(s);
    if (length != nullptr) *length = s.size();
  });
}

sysmds_status sysmds_code_get_info(const sysmds_code* code, sysmds_code_info* info) {
  return guarded([&] {
    require(code != nullptr && info != nullptr, "null argument");
    const sysmds::CodeState& s = code->stored.state;
    info->n = static_cast<uint32_t>(s.n());
    info->k = static_cast<uint32_t>(s.k());
    info->field_bits = s.field().bits();
    info->reduction_poly = s.field().reduction_poly();
    info->epoch = s.epoch();
    info->history_length = code->stored.history.size();
  });
}

sysmds_status sysmds_code_verify(const sysmds_code* code, sysmds_verify_report* report) {
  return guarded([&] {
    require(code != nullptr && report != nullptr, "null argument");
    const sysmds::VerifyReport r = sysmds::verify(code->stored);
    *report = sysmds_verify_report{};
    report->ok = r.ok();
    report->mds_ok = r.mds.ok;
    report->subsets_checked = r.mds.checked;
    report->subsets_total = r.mds.total;
    report->systematic_ok = r.systematic;
    report->history_ok = r.history_ok;
    copy_fixed(report->violation, sysmds::format_subset(code->stored.state, r.mds.first_violation));
    copy_fixed(report->history_problem, r.history_problem);
  });
}

sysmds_status sysmds_code_repair(sysmds_code* code, uint32_t failed, const uint32_t* helpers,
                                 size_t helper_count, uint64_t seed, uint32_t max_retries,
                                 sysmds_repair_result* result) {
  return guarded([&] {
    require(code != nullptr, "null code handle");
    const sysmds::CodeState& state = code->stored.state;
    const std::size_t failed_index = node_index(failed);
    if (failed_index >= state.n()) {
      throw Error(ErrorCode::kInvalidArgument, "failed node " + std::to_string(failed) +
                                                   " is out of range 1.." +
                                                   std::to_string(state.n()));
    }
    const std::vector<std::size_t> chosen = helper_count == 0
        ? sysmds::default_helpers(state, failed_index)
        : node_indices(helpers, helper_count);
    sysmds::Rng rng(seed);
    sysmds::RepairResult r = sysmds::repair(state, failed_index, chosen, rng, max_retries);
    if (result != nullptr) fill_repair_result(r.transcript, state.k(), result);
    code->stored.history.push_back(std::move(r.transcript));
    code->stored.state = std::move(r.state);
  });
}

sysmds_status sysmds_cluster_ingest(const uint8_t* bytes, size_t length, uint32_t n, uint32_t k,
                                    uint32_t field_bits, uint64_t seed, sysmds_cluster** out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    require(length == 0 || bytes != nullptr, "null input with nonzero length");
    require(n <= SYSMDS_MAX_NODES, "n exceeds SYSMDS_MAX_NODES");
    auto cluster = sysmds::Cluster::ingest(std::span<const std::uint8_t>(bytes, length), n, k,
                                           sysmds::Field::standard(field_bits), seed);
    *out = new sysmds_cluster{std::move(cluster), sysmds::Rng(seed)};
  });
}

void sysmds_cluster_free(sysmds_cluster* cluster) { delete cluster; }

sysmds_status sysmds_cluster_stripe_count(const sysmds_cluster* cluster, uint64_t* stripes) {
  return guarded([&] {
    require(cluster != nullptr && stripes != nullptr, "null argument");
    *stripes = cluster->cluster.stripes().size();
  });
}

sysmds_status sysmds_cluster_fail(sysmds_cluster* cluster, uint32_t node) {
  return guarded([&] {
    require(cluster != nullptr, "null cluster handle");
    cluster->cluster.fail(node_index(node));
  });
}

sysmds_status sysmds_cluster_fail_and_repair(sysmds_cluster* cluster, uint32_t failed,
                                             const uint32_t* helpers, size_t helper_count,
                                             sysmds_repair_result* result) {
  return guarded([&] {
    require(cluster != nullptr, "null cluster handle");
    std::optional<std::vector<std::size_t>> chosen;
    if (helper_count != 0) chosen = node_indices(helpers, helper_count);
    const sysmds::RepairTranscript& t =
        cluster->cluster.fail_and_repair(node_index(failed), std::move(chosen), cluster->rng);
    if (result != nullptr) {
      fill_repair_result(t, cluster->cluster.state().k(), result);
      const sysmds::RepairRecord& rec = cluster->cluster.ledger().records().back();
      result->downloaded_symbols = rec.symbols_downloaded;
      result->bound_num = rec.bound_symbols.num();
      result->bound_den = rec.bound_symbols.den();
      result->naive_symbols = rec.naive_symbols;
    }
  });
}

sysmds_status sysmds_cluster_extract(const sysmds_cluster* cluster, const uint32_t* nodes,
                                     size_t node_count, uint8_t** bytes, size_t* length) {
  return guarded([&] {
    require(cluster != nullptr && bytes != nullptr && length != nullptr, "null argument");
    give_bytes(cluster->cluster.extract(node_indices(nodes, node_count)), bytes, length);
  });
}

sysmds_status sysmds_cluster_extract_systematic(const sysmds_cluster* cluster, uint8_t** bytes,
                                                size_t* length) {
  return guarded([&] {
    require(cluster != nullptr && bytes != nullptr && length != nullptr, "null argument");
    give_bytes(cluster->cluster.extract_systematic(), bytes, length);
  });
}

sysmds_status sysmds_cluster_campaign(sysmds_cluster* cluster, uint64_t rounds,
                                      sysmds_failure_policy policy, uint32_t max_retries,
                                      sysmds_campaign_summary* summary, char** report_json,
                                      char** summary_text) {
  return guarded([&] {
    require(cluster != nullptr, "null cluster handle");
    require(policy == SYSMDS_FAILURE_UNIFORM || policy == SYSMDS_FAILURE_ROUND_ROBIN,
            "unknown failure policy");
    sysmds::CampaignOptions options;
    options.rounds = rounds;
    options.policy = policy == SYSMDS_FAILURE_UNIFORM ? sysmds::FailurePolicy::kUniform
                                                      : sysmds::FailurePolicy::kRoundRobin;
    options.max_retries = max_retries;
    const sysmds::CampaignReport r = sysmds::run_campaign(cluster->cluster, options, cluster->rng);

    // Render strings first so a failed allocation leaks nothing.
    std::string json = report_json != nullptr ? sysmds::report_json(r) : std::string();
    std::string text = summary_text != nullptr ? sysmds::report_summary(r) : std::string();
    if (summary != nullptr) {
      sysmds_campaign_summary& s = *summary;
      s = sysmds_campaign_summary{};
      s.n = static_cast<uint32_t>(r.n);
      s.k = static_cast<uint32_t>(r.k);
      s.field_bits = r.field_bits;
      s.stripes = r.stripes;
      s.rounds = r.rounds;
      s.epoch = r.epoch;
      s.downloaded_symbols = r.downloaded_symbols;
      s.naive_symbols = r.naive_symbols;
      s.bound_num = r.bound_symbols.num();
      s.bound_den = r.bound_symbols.den();
      s.ratio_num = r.ratio ? r.ratio->num() : 0;
      s.ratio_den = r.ratio ? r.ratio->den() : 0;
      s.total_retries = r.total_retries;
      s.total_draws = r.total_draws;
      s.mean_retries = r.mean_retries();
      s.rejection_rate = r.rejection_rate();
      s.subsets_per_check = r.subsets_per_check;
      s.mds_passed = r.mds.passed;
      s.systematic_passed = r.systematic.passed;
      s.exact_u_repair_passed = r.exact_u_repair.passed;
      s.conservation_passed = r.conservation.passed;
      s.decode_passed = r.decode.passed;
      s.bandwidth_passed = r.bandwidth.passed;
      s.checks_failed = r.mds.failed + r.systematic.failed + r.exact_u_repair.failed +
                        r.conservation.failed + r.decode.failed + r.bandwidth.failed;
      s.all_passed = r.all_passed();
    }
    char* json_out = report_json != nullptr ? copy_string(json) : nullptr;
    char* text_out = nullptr;
    if (summary_text != nullptr) {
      try {
        text_out = copy_string(text);
      } catch (...) {
        std::free(json_out);
        throw;
      }
    }
    if (report_json != nullptr) *report_json = json_out;
    if (summary_text != nullptr) *summary_text = text_out;
  });
}

}  // extern "C"
