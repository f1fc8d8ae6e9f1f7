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

#include "sysmds/sim.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "sysmds/error.hpp"
#include "sysmds/subsets.hpp"

namespace sysmds {

namespace {

std::size_t bytes_per_symbol(const Field& field) {
  if (field.bits() % 8 != 0) {
    throw Error(ErrorCode::kBadField, "byte packing needs a field width that is a multiple of 8");
  }
  return field.bits() / 8;
}

std::vector<std::size_t> random_subset(std::size_t n, std::size_t r, Rng& rng) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < r; ++i) {
    const std::size_t j = i + rng.below(n - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(r);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

void BandwidthLedger::record(RepairRecord r) {
  downloaded_ += r.symbols_downloaded;
  naive_ += r.naive_symbols;
  bound_ += r.bound_symbols;
  records_.push_back(std::move(r));
}

std::optional<Rational> BandwidthLedger::savings_ratio() const {
  if (naive_ == 0) return std::nullopt;
  return Rational(static_cast<std::int64_t>(downloaded_), static_cast<std::int64_t>(naive_));
}

Cluster::Cluster(CodeState state, std::vector<Stripe> stripes, std::size_t byte_length)
    : state_(std::move(state)),
      stripes_(std::move(stripes)),
      byte_length_(byte_length),
      live_(state_.n(), true),
      store_(state_.n()) {
  for (const Stripe& s : stripes_) {
    const std::vector<NodeContent> encoded = encode(state_, s);
    for (std::size_t node = 0; node < state_.n(); ++node) store_[node].push_back(encoded[node]);
  }
}

Cluster Cluster::ingest(std::span<const std::uint8_t> bytes, std::size_t n, std::size_t k,
                        FieldPtr field, std::uint64_t seed) {
  CodeState state = CodeState::init_systematic(n, k, std::move(field), seed);
  const std::size_t width = bytes_per_symbol(state.field());
  const std::size_t symbols = (bytes.size() + width - 1) / width;
  const std::size_t per_stripe = state.dim();
  const std::size_t stripe_count = (symbols + per_stripe - 1) / per_stripe;

  std::vector<Stripe> stripes(stripe_count, Stripe{Vector(per_stripe)});
  for (std::size_t s = 0; s < symbols; ++s) {
    std::uint32_t value = 0;
    for (std::size_t b = 0; b < width; ++b) {
      const std::size_t at = s * width + b;
      value = (value << 8) | (at < bytes.size() ? bytes[at] : 0u);
    }
    stripes[s / per_stripe].symbols[s % per_stripe] =
        FieldElement(static_cast<FieldElement::Rep>(value));
  }
  return Cluster(std::move(state), std::move(stripes), bytes.size());
}

bool Cluster::is_live(std::size_t node) const {
  if (node >= live_.size()) throw Error(ErrorCode::kInvalidArgument, "node out of range");
  return live_[node];
}

std::size_t Cluster::live_count() const {
  return static_cast<std::size_t>(std::count(live_.begin(), live_.end(), true));
}

std::span<const NodeContent> Cluster::node_contents(std::size_t node) const {
  if (!is_live(node)) return {};
  return store_[node];
}

void Cluster::fail(std::size_t node) {
  if (!is_live(node)) return;
  live_[node] = false;
  store_[node].clear();
}

const RepairTranscript& Cluster::fail_and_repair(std::size_t failed,
                                                 std::optional<std::vector<std::size_t>> helpers,
                                                 Rng& rng, std::uint32_t max_retries) {
  if (failed >= state_.n()) {
    throw Error(ErrorCode::kInvalidArgument, "failed node out of range");
  }
  fail(failed);
  std::vector<std::size_t> survivors;
  for (std::size_t i = 0; i < state_.n(); ++i) {
    if (live_[i]) survivors.push_back(i);
  }
  if (survivors.size() < state_.k() + 1) {
    throw Error(ErrorCode::kTooFewSurvivors,
                std::to_string(survivors.size()) + " survivors, need k+1=" +
                    std::to_string(state_.k() + 1));
  }
  std::vector<std::size_t> chosen;
  if (helpers) {
    chosen = std::move(*helpers);
    for (const std::size_t h : chosen) {
      if (h < state_.n() && h != failed && !live_[h]) {
        throw Error(ErrorCode::kBadHelpers, "helper " + std::to_string(h + 1) + " is not live");
      }
    }
  } else {
    const auto count = static_cast<std::ptrdiff_t>(state_.k() + 1);
    chosen.assign(survivors.begin(), survivors.begin() + count);
  }

  RepairResult result = repair(state_, failed, chosen, rng, max_retries);
  const RepairTranscript& t = result.transcript;
  const Field& f = state_.field();

  // Each helper sends one symbol per stripe; the replacement sees nothing else.
  std::vector<NodeContent> rebuilt(stripes_.size());
  Vector payloads(t.helpers.size());
  for (std::size_t s = 0; s < stripes_.size(); ++s) {
    for (std::size_t p = 0; p < t.helpers.size(); ++p) {
      payloads[p] = helper_payload(f, t, p, store_[t.helpers[p]][s]);
    }
    const auto [sym_u, sym_v] = combine_download(f, t, payloads);
    rebuilt[s] = NodeContent{failed, sym_u, sym_v};
  }

  const auto k = static_cast<std::int64_t>(state_.k());
  const auto stripe_count = static_cast<std::uint64_t>(stripes_.size());
  RepairRecord rec;
  rec.epoch_after = t.epoch_after;
  rec.failed = failed;
  rec.helpers = t.helpers;
  rec.retries = t.retries;
  rec.stripes = stripe_count;
  rec.symbols_downloaded = stripe_count * t.helpers.size();
  rec.bound_symbols = stripe_count == 0
      ? Rational(0)
      : cut_bound(2 * k, k, k + 1) * Rational(static_cast<std::int64_t>(stripe_count));
  rec.naive_symbols = stripe_count * 2 * state_.k();
  ledger_.record(std::move(rec));

  store_[failed] = std::move(rebuilt);
  live_[failed] = true;
  state_ = std::move(result.state);
  history_.push_back(std::move(result.transcript));
  return history_.back();
}

std::vector<std::uint8_t> Cluster::unpack(std::span<const Stripe> stripes) const {
  const std::size_t width = bytes_per_symbol(state_.field());
  std::vector<std::uint8_t> out;
  out.reserve(stripes.size() * state_.dim() * width);
  for (const Stripe& s : stripes) {
    for (const FieldElement e : s.symbols) {
      for (std::size_t b = width; b-- > 0;) {
        out.push_back(static_cast<std::uint8_t>((e.value() >> (8 * b)) & 0xFF));
      }
    }
  }
  out.resize(byte_length_);
  return out;
}

std::vector<std::uint8_t> Cluster::extract(std::span<const std::size_t> nodes) const {
  if (nodes.size() != state_.k()) {
    throw Error(ErrorCode::kTooFewNodes, "extract needs exactly k=" +
                                             std::to_string(state_.k()) + " nodes");
  }
  for (const std::size_t node : nodes) {
    if (!is_live(node)) {
      throw Error(ErrorCode::kTooFewNodes, "node " + std::to_string(node + 1) + " is not live");
    }
  }
  std::vector<Stripe> decoded;
  decoded.reserve(stripes_.size());
  std::vector<NodeContent> contents(nodes.size());
  for (std::size_t s = 0; s < stripes_.size(); ++s) {
    for (std::size_t i = 0; i < nodes.size(); ++i) contents[i] = store_[nodes[i]][s];
    decoded.push_back(decode(state_, contents));
  }
  return unpack(decoded);
}

std::vector<std::uint8_t> Cluster::extract_systematic() const {
  for (std::size_t node = 0; node < state_.dim(); ++node) {
    if (!live_[node]) {
      throw Error(ErrorCode::kTooFewNodes,
                  "systematic read needs node " + std::to_string(node + 1));
    }
  }
  std::vector<Stripe> decoded;
  decoded.reserve(stripes_.size());
  std::vector<NodeContent> contents(state_.dim());
  for (std::size_t s = 0; s < stripes_.size(); ++s) {
    for (std::size_t node = 0; node < state_.dim(); ++node) contents[node] = store_[node][s];
    decoded.push_back(read_systematic(state_, contents));
  }
  return unpack(decoded);
}

bool Cluster::store_consistent() const {
  for (std::size_t s = 0; s < stripes_.size(); ++s) {
    const std::vector<NodeContent> expected = encode(state_, stripes_[s]);
    for (std::size_t node = 0; node < state_.n(); ++node) {
      if (live_[node] && store_[node][s] != expected[node]) return false;
    }
  }
  return true;
}

double CampaignReport::mean_retries() const {
  return rounds == 0 ? 0.0 : static_cast<double>(total_retries) / static_cast<double>(rounds);
}

double CampaignReport::rejection_rate() const {
  return total_draws == 0 ? 0.0
                          : static_cast<double>(total_retries) / static_cast<double>(total_draws);
}

bool CampaignReport::all_passed() const {
  for (const InvariantTally* t :
       {&mds, &systematic, &exact_u_repair, &conservation, &decode, &bandwidth}) {
    if (t->failed != 0) return false;
  }
  return true;
}

CampaignReport run_campaign(Cluster& cluster, const CampaignOptions& options, Rng& rng) {
  const CodeState& initial = cluster.state();
  const std::size_t n = initial.n();
  const std::size_t k = initial.k();
  const Matrix u0 = initial.u();
  const auto per_stripe_bound =
      cut_bound(2 * static_cast<std::int64_t>(k), static_cast<std::int64_t>(k),
                static_cast<std::int64_t>(k) + 1);

  const std::vector<std::uint8_t> original = cluster.reference_bytes();

  CampaignReport report;
  report.n = n;
  report.k = k;
  report.field_bits = initial.field().bits();
  report.stripes = cluster.stripes().size();
  report.subsets_per_check = binomial(2 * n, 2 * k);

  for (std::uint64_t round = 0; round < options.rounds; ++round) {
    const std::size_t failed = options.policy == FailurePolicy::kUniform
        ? static_cast<std::size_t>(rng.below(n))
        : static_cast<std::size_t>(round % n);
    std::vector<NodeContent> before(cluster.node_contents(failed).begin(),
                                    cluster.node_contents(failed).end());

    const RepairTranscript& t = cluster.fail_and_repair(failed, std::nullopt, rng,
                                                        options.max_retries);
    report.total_retries += t.retries;
    report.total_draws += t.retries + 1;
    ++report.retry_histogram[t.retries];

    const CodeState& state = cluster.state();
    report.mds.add(is_mds(state).ok);
    report.systematic.add(is_systematic(state) && state.u() == u0);

    bool exact_u = before.size() == cluster.stripes().size();
    const std::span<const NodeContent> after = cluster.node_contents(failed);
    for (std::size_t s = 0; exact_u && s < before.size(); ++s) {
      exact_u = before[s].sym_u == after[s].sym_u;
    }
    report.exact_u_repair.add(exact_u);
    report.conservation.add(cluster.store_consistent());

    bool decoded = true;
    try {
      const std::vector<std::size_t> nodes = random_subset(n, k, rng);
      decoded = cluster.extract(nodes) == original && cluster.extract_systematic() == original;
    } catch (const Error&) {
      decoded = false;
    }
    report.decode.add(decoded);

    const RepairRecord& rec = cluster.ledger().records().back();
    const Rational downloaded(static_cast<std::int64_t>(rec.symbols_downloaded));
    report.bandwidth.add(per_stripe_bound == Rational(static_cast<std::int64_t>(k) + 1) &&
                         rec.symbols_downloaded == rec.stripes * (k + 1) &&
                         rec.bound_symbols == downloaded);
    report.repairs.push_back(rec);
  }

  report.rounds = options.rounds;
  report.epoch = cluster.state().epoch();
  for (const RepairRecord& rec : report.repairs) {
    report.downloaded_symbols += rec.symbols_downloaded;
    report.naive_symbols += rec.naive_symbols;
    report.bound_symbols += rec.bound_symbols;
  }
  if (report.naive_symbols != 0) {
    report.ratio = Rational(static_cast<std::int64_t>(report.downloaded_symbols),
                            static_cast<std::int64_t>(report.naive_symbols));
  }
  return report;
}

std::string report_json(const CampaignReport& r) {
  using nlohmann::ordered_json;
  auto tally = [](const InvariantTally& t) {
    ordered_json j;
    j["passed"] = t.passed;
    j["failed"] = t.failed;
    return j;
  };

  ordered_json j;
  j["n"] = r.n;
  j["k"] = r.k;
  j["field_bits"] = r.field_bits;
  j["stripes"] = r.stripes;
  j["rounds"] = r.rounds;
  j["epoch"] = r.epoch;
  j["downloaded_symbols"] = r.downloaded_symbols;
  j["bound_symbols"] = r.bound_symbols.to_string();
  j["naive_symbols"] = r.naive_symbols;
  j["ratio"] = r.ratio ? ordered_json(r.ratio->to_string()) : ordered_json(nullptr);

  ordered_json retries;
  retries["total"] = r.total_retries;
  retries["draws"] = r.total_draws;
  retries["mean"] = r.mean_retries();
  retries["rejection_rate"] = r.rejection_rate();
  ordered_json hist = ordered_json::object();
  for (const auto& [count, times] : r.retry_histogram) hist[std::to_string(count)] = times;
  retries["histogram"] = hist;
  j["retries"] = retries;

  ordered_json inv;
  inv["subsets_per_check"] = r.subsets_per_check;
  inv["mds"] = tally(r.mds);
  inv["systematic"] = tally(r.systematic);
  inv["exact_u_repair"] = tally(r.exact_u_repair);
  inv["conservation"] = tally(r.conservation);
  inv["decode"] = tally(r.decode);
  inv["bandwidth"] = tally(r.bandwidth);
  inv["all_passed"] = r.all_passed();
  j["invariants"] = inv;

  ordered_json repairs = ordered_json::array();
  for (const RepairRecord& rec : r.repairs) {
    ordered_json e;
    e["epoch"] = rec.epoch_after;
    e["failed"] = rec.failed + 1;
    ordered_json helpers = ordered_json::array();
    for (const std::size_t h : rec.helpers) helpers.push_back(h + 1);
    e["helpers"] = helpers;
    e["retries"] = rec.retries;
    e["downloaded_symbols"] = rec.symbols_downloaded;
    e["bound_symbols"] = rec.bound_symbols.to_string();
    e["naive_symbols"] = rec.naive_symbols;
    repairs.push_back(e);
  }
  j["repairs"] = repairs;
  return j.dump(2) + "\n";
}

std::string report_summary(const CampaignReport& r) {
  std::ostringstream out;
  out << "campaign n=" << r.n << " k=" << r.k << " field=GF(2^" << r.field_bits << ")"
      << " stripes=" << r.stripes << " rounds=" << r.rounds << "\n";
  out << "epoch: " << r.epoch << "\n";
  out << "downloaded_symbols: " << r.downloaded_symbols << "\n";
  out << "bound_symbols: " << r.bound_symbols.to_string() << "\n";
  out << "naive_symbols: " << r.naive_symbols << "\n";
  out << "ratio: " << (r.ratio ? r.ratio->to_string() : std::string("n/a")) << "\n";
  out << "retries: " << r.total_retries << " over " << r.total_draws << " draws (mean "
      << r.mean_retries() << ")\n";
  out << "invariants: mds " << r.mds.passed << "/" << r.rounds << ", systematic "
      << r.systematic.passed << "/" << r.rounds << ", decode " << r.decode.passed << "/"
      << r.rounds << ", bandwidth " << r.bandwidth.passed << "/" << r.rounds << "\n";
  out << (r.all_passed() ? "all invariants passed" : "INVARIANT FAILURES") << "\n";
  return out.str();
}

}  // namespace sysmds
