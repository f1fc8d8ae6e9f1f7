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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sysmds/bounds.hpp"
#include "sysmds/code.hpp"
#include "sysmds/repair.hpp"

namespace sysmds {

/// Bandwidth accounting for one repair event across all stripes.
struct RepairRecord {
  std::uint64_t epoch_after = 0;
  std::size_t failed = 0;
  std::vector<std::size_t> helpers;
  std::uint32_t retries = 0;
  std::uint64_t stripes = 0;
  std::uint64_t symbols_downloaded = 0;
  Rational bound_symbols;       // cut bound, all stripes
  std::uint64_t naive_symbols = 0;  // k nodes x 2 symbols per stripe
};

class BandwidthLedger {
 public:
  void record(RepairRecord r);

  const std::vector<RepairRecord>& records() const { return records_; }
  std::uint64_t downloaded_total() const { return downloaded_; }
  std::uint64_t naive_total() const { return naive_; }
  Rational bound_total() const { return bound_; }
  /// downloaded / naive, absent while nothing has been downloaded.
  std::optional<Rational> savings_ratio() const;

 private:
  std::vector<RepairRecord> records_;
  std::uint64_t downloaded_ = 0;
  std::uint64_t naive_ = 0;
  Rational bound_;
};

/// n simulated nodes holding one NodeContent per stripe each.
class Cluster {
 public:
  /// Packs bytes into big-endian m/8-byte symbols, groups them into
  /// zero-padded stripes of 2k symbols and encodes them onto n nodes.
  static Cluster ingest(std::span<const std::uint8_t> bytes, std::size_t n, std::size_t k,
                        FieldPtr field, std::uint64_t seed = 0);

  const CodeState& state() const { return state_; }
  const std::vector<Stripe>& stripes() const { return stripes_; }
  std::size_t byte_length() const { return byte_length_; }
  bool is_live(std::size_t node) const;
  std::size_t live_count() const;
  std::span<const NodeContent> node_contents(std::size_t node) const;
  const BandwidthLedger& ledger() const { return ledger_; }
  const std::vector<RepairTranscript>& history() const { return history_; }

  /// Erases a node's contents.
  void fail(std::size_t node);

  /// Erases `failed` (if still live), repairs the code once from k+1 live
  /// helpers (default: lowest-indexed) and regenerates every stripe on the
  /// replacement from helper payloads only.
  const RepairTranscript& fail_and_repair(std::size_t failed,
                                          std::optional<std::vector<std::size_t>> helpers,
                                          Rng& rng,
                                          std::uint32_t max_retries = kDefaultMaxRetries);

  /// Decodes every stripe from exactly k live nodes.
  std::vector<std::uint8_t> extract(std::span<const std::size_t> nodes) const;
  /// Reads the u-symbols of nodes 1..2k; no field arithmetic.
  std::vector<std::uint8_t> extract_systematic() const;

  /// The ingested bytes, rebuilt from the retained stripes rather than from
  /// any node. Used as the oracle for extract().
  std::vector<std::uint8_t> reference_bytes() const { return unpack(stripes_); }

  /// Every stored symbol equals its recomputation from the code state.
  bool store_consistent() const;

 private:
  Cluster(CodeState state, std::vector<Stripe> stripes, std::size_t byte_length);

  std::vector<std::uint8_t> unpack(std::span<const Stripe> stripes) const;

  CodeState state_;
  std::vector<Stripe> stripes_;
  std::size_t byte_length_;
  std::vector<bool> live_;
  std::vector<std::vector<NodeContent>> store_;  // [node][stripe]
  BandwidthLedger ledger_;
  std::vector<RepairTranscript> history_;
};

enum class FailurePolicy {
  kUniform,     // any node, uniformly, including previously repaired ones
  kRoundRobin,  // 1, 2, ..., n, 1, ...
};

struct CampaignOptions {
  std::uint64_t rounds = 0;
  FailurePolicy policy = FailurePolicy::kUniform;
  std::uint32_t max_retries = kDefaultMaxRetries;
};

struct InvariantTally {
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;

  void add(bool ok) { ok ? ++passed : ++failed; }
};

struct CampaignReport {
  std::size_t n = 0;
  std::size_t k = 0;
  unsigned field_bits = 0;
  std::uint64_t stripes = 0;
  std::uint64_t rounds = 0;
  std::uint64_t epoch = 0;

  std::uint64_t downloaded_symbols = 0;
  std::uint64_t naive_symbols = 0;
  Rational bound_symbols;
  std::optional<Rational> ratio;

  std::uint64_t total_retries = 0;
  std::uint64_t total_draws = 0;
  std::map<std::uint32_t, std::uint64_t> retry_histogram;

  std::uint64_t subsets_per_check = 0;
  InvariantTally mds;
  InvariantTally systematic;
  InvariantTally exact_u_repair;
  InvariantTally conservation;
  InvariantTally decode;
  InvariantTally bandwidth;

  std::vector<RepairRecord> repairs;

  double mean_retries() const;
  /// Rejected draws over all draws.
  double rejection_rate() const;
  bool all_passed() const;
};

/// Runs single-failure repairs and after each one checks: exhaustive MDS,
/// systematic columns unchanged, exact u-repair, store conservation, decode
/// from a random k-subset plus the systematic read, and per-stripe traffic
/// equal to the cut bound.
CampaignReport run_campaign(Cluster& cluster, const CampaignOptions& options, Rng& rng);

/// Deterministic JSON rendering with fixed key order.
std::string report_json(const CampaignReport& report);
/// Short human-readable summary.
std::string report_summary(const CampaignReport& report);

}  // namespace sysmds
