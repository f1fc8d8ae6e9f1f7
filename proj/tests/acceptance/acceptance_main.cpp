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

// Acceptance suite. Prints one [PASS]/[FAIL] line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "sysmds/bounds.hpp"
#include "sysmds/code.hpp"
#include "sysmds/repair.hpp"
#include "sysmds/sim.hpp"
#include "sysmds/subsets.hpp"

namespace sysmds {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::vector<std::uint8_t> random_bytes(std::size_t len, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<std::uint8_t> out(len);
  for (std::uint8_t& b : out) b = static_cast<std::uint8_t>(gen());
  return out;
}

// Kept across criteria so that later checks can reuse the long campaigns.
CampaignReport g_campaign_42;
CampaignReport g_campaign_63;

Outcome bandwidth_optimality() {
  const auto start = std::chrono::steady_clock::now();
  Cluster c = Cluster::ingest(random_bytes(4096, 1), 4, 2, Field::gf65536());
  Rng rng(1001);
  g_campaign_42 = run_campaign(c, {1000, FailurePolicy::kUniform}, rng);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const Rational bound = cut_bound(4, 2, 3);
  std::uint64_t exact = 0;
  for (const RepairRecord& r : g_campaign_42.repairs) {
    const Rational per_stripe_bound = bound * Rational(static_cast<std::int64_t>(r.stripes));
    if (r.symbols_downloaded == 3 * r.stripes && r.bound_symbols == per_stripe_bound)
      ++exact;
  }
  std::ostringstream d;
  d << exact << "/" << g_campaign_42.repairs.size() << " repairs at 3 symbols/stripe, bound "
    << bound.to_string() << ", " << g_campaign_42.stripes << " stripes, "
    << g_campaign_42.rounds << " rounds in " << seconds << " s";
  const bool ok = bound == Rational(3) && exact == 1000 && g_campaign_42.repairs.size() == 1000 &&
                  g_campaign_42.bandwidth.failed == 0 && seconds < 60.0;
  return {ok, d.str()};
}

// Criteria 2 and 3 share these campaigns.
struct PersistenceRun {
  std::uint64_t repairs = 0;
  std::uint64_t mds_ok = 0;
  std::uint64_t subsets = 0;
  std::uint64_t systematic_ok = 0;
  std::uint64_t u_identical = 0;
};

PersistenceRun persistence(std::size_t n, std::size_t k, FieldPtr field, std::uint64_t seed,
                           int rounds, CampaignReport* report) {
  const auto bytes = random_bytes(2048, seed);
  Cluster c = Cluster::ingest(bytes, n, k, field);
  const Matrix u0 = c.state().u();
  const std::vector<Stripe> stripes = c.stripes();
  Rng rng(seed);
  PersistenceRun out;
  for (int round = 0; round < rounds; ++round) {
    c.fail_and_repair(rng.below(n), std::nullopt, rng);
    ++out.repairs;
    const SubsetScan scan = is_mds(c.state());
    out.subsets = scan.checked;
    if (scan.ok) ++out.mds_ok;
    if (c.state().u() == u0) ++out.u_identical;

    // read_systematic on every stripe as stored on the nodes.
    bool all = true;
    for (std::size_t s = 0; s < stripes.size() && all; ++s) {
      std::vector<NodeContent> row;
      for (std::size_t i = 0; i < n; ++i) row.push_back(c.node_contents(i)[s]);
      all = read_systematic(c.state(), row) == stripes[s];
    }
    if (all && c.extract_systematic() == bytes) ++out.systematic_ok;
  }
  if (report != nullptr) {
    Rng campaign_rng(seed + 1);
    *report = run_campaign(c, {50, FailurePolicy::kRoundRobin}, campaign_rng);
  }
  return out;
}

PersistenceRun g_run_42;
PersistenceRun g_run_63;

Outcome mds_preservation() {
  g_run_42 = persistence(4, 2, Field::gf256(), 2001, 500, nullptr);
  g_run_63 = persistence(6, 3, Field::gf65536(), 2002, 500, &g_campaign_63);
  std::ostringstream d;
  d << "(4,2) GF(2^8): " << g_run_42.mds_ok << "/" << g_run_42.repairs << " repairs MDS over "
    << g_run_42.subsets << " subsets; (6,3) GF(2^16): " << g_run_63.mds_ok << "/"
    << g_run_63.repairs << " over " << g_run_63.subsets << " subsets";
  const bool ok = g_run_42.repairs >= 500 && g_run_42.mds_ok == g_run_42.repairs &&
                  g_run_42.subsets == 70 && g_run_63.repairs >= 500 &&
                  g_run_63.mds_ok == g_run_63.repairs && g_run_63.subsets == 924;
  return {ok, d.str()};
}

Outcome systematic_persistence() {
  std::ostringstream d;
  d << "(4,2): read_systematic exact " << g_run_42.systematic_ok << "/" << g_run_42.repairs
    << ", U identical " << g_run_42.u_identical << "/" << g_run_42.repairs
    << "; (6,3): " << g_run_63.systematic_ok << "/" << g_run_63.repairs << ", "
    << g_run_63.u_identical << "/" << g_run_63.repairs;
  const bool ok = g_run_42.repairs > 0 && g_run_63.repairs > 0 &&
                  g_run_42.systematic_ok == g_run_42.repairs &&
                  g_run_42.u_identical == g_run_42.repairs &&
                  g_run_63.systematic_ok == g_run_63.repairs &&
                  g_run_63.u_identical == g_run_63.repairs;
  return {ok, d.str()};
}

Outcome decodability() {
  struct Shape {
    std::size_t n;
    std::size_t k;
    FieldPtr field;
  };
  const std::vector<Shape> shapes{{4, 2, Field::gf256()},
                                  {6, 3, Field::gf65536()},
                                  {5, 2, Field::gf65536()}};
  std::uint64_t histories = 0;
  std::uint64_t extracts = 0;
  std::uint64_t exact = 0;
  for (const Shape& shape : shapes) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto bytes = random_bytes(1000 + 37 * seed, 4000 + seed);
      Cluster c = Cluster::ingest(bytes, shape.n, shape.k, shape.field);
      Rng rng(4100 + seed);
      for (int round = 0; round < 100; ++round) {
        // Odd seeds keep returning to node 1 so it is repaired many times over.
        const bool sticky = seed % 2 == 1 && round % 3 == 0;
        const std::size_t failed = sticky ? 0 : rng.below(shape.n);
        c.fail_and_repair(failed, std::nullopt, rng);
      }
      ++histories;
      for_each_subset(shape.n, shape.k, [&](std::span<const std::size_t> pick) {
        ++extracts;
        if (c.extract(pick) == bytes) ++exact;
        return true;
      });
    }
  }
  std::ostringstream d;
  d << histories << " histories of 100 repairs; " << exact << "/" << extracts
    << " k-subset extracts byte-exact";
  return {exact == extracts && extracts > 0, d.str()};
}

Outcome retry_probability() {
  CodeState s = CodeState::init_systematic(4, 2, Field::gf65536());
  Rng rng(5001);
  std::uint64_t repairs = 0;
  std::uint64_t retries = 0;
  for (int round = 0; round < 5000; ++round) {
    const std::size_t failed = rng.below(4);
    RepairResult r = repair(s, failed, default_helpers(s, failed), rng);
    retries += r.transcript.retries;
    ++repairs;
    s = std::move(r.state);
  }
  const std::uint64_t draws = repairs + retries;
  const double rate = static_cast<double>(retries) / static_cast<double>(draws);
  const double bound = 70.0 / 65536.0;
  std::ostringstream d;
  d << repairs << " repairs, " << draws << " draws, rejection rate " << rate
    << " (limit 0.011, d0/|F| = " << bound << "), mean retries " << static_cast<double>(retries) / static_cast<double>(repairs);
  return {repairs >= 1000 && rate <= 0.011, d.str()};
}

Outcome witness_suite() {
  const CodeState s = CodeState::init_systematic(4, 2, Field::gf256());
  const std::size_t failed = 3;
  const std::vector<std::size_t> helpers{0, 1, 2};
  const auto retained = retained_columns(s, failed);
  std::uint64_t subsets = 0;
  std::uint64_t nonzero = 0;
  for_each_subset(retained.size(), 3, [&](std::span<const std::size_t> pick) {
    std::vector<std::size_t> subset;
    for (const std::size_t p : pick) subset.push_back(retained[p]);
    const Xi xi = claim1_witness(s, failed, helpers, subset);
    const Eta eta = solve_eta(s, helpers, failed, xi.alpha1, xi.beta1);
    const Vector vp = synthesize_v_prime(s, helpers, eta, xi.rho);
    ++subsets;
    if (accept_at_subset(s, subset, vp)) ++nonzero;
    return true;
  });
  std::ostringstream d;
  d << nonzero << "/" << subsets << " subsets with det([U_S, v']) != 0";
  return {subsets == 35 && nonzero == 35, d.str()};
}

Outcome cut_consistency() {
  std::uint64_t plans = 0;
  std::uint64_t tight = 0;
  std::uint64_t inequalities = 0;
  bool counts_ok = true;
  auto check = [&](const RepairPlan& plan, std::int64_t k) {
    const CutCheck c = check_cut_inequalities(plan, k);
    ++plans;
    inequalities += c.checked;
    counts_ok = counts_ok && c.checked == binomial(static_cast<std::size_t>(k + 1),
                                                   static_cast<std::size_t>(k - 1));
    if (c.ok && c.all_tight) ++tight;
  };
  for (std::int64_t k = 1; k <= 8; ++k) check(realized_plan(k), k);
  // Plans realized by the campaigns: one symbol per helper per stripe.
  for (const auto* report : {&g_campaign_42, &g_campaign_63}) {
    const auto k = static_cast<std::int64_t>(report->k);
    for (const RepairRecord& r : report->repairs) {
      RepairPlan plan{Rational(2 * k), Rational(2), {}};
      for (std::size_t h = 0; h < r.helpers.size(); ++h)
        plan.beta.emplace_back(static_cast<std::int64_t>(r.symbols_downloaded / r.helpers.size()),
                               static_cast<std::int64_t>(r.stripes));
      check(plan, k);
    }
  }
  std::ostringstream d;
  d << tight << "/" << plans << " plans tight on all inequalities (" << inequalities
    << " checked)";
  return {plans > 8 && tight == plans && counts_ok, d.str()};
}

Outcome baseline_ratio() {
  Cluster c = Cluster::ingest(random_bytes(1024, 8001), 8, 4, Field::gf65536());
  Rng rng(8002);
  CampaignReport r84 = run_campaign(c, {5, FailurePolicy::kUniform}, rng);
  std::ostringstream d;
  bool ok = true;
  for (const CampaignReport* r : {&g_campaign_42, &g_campaign_63, &r84}) {
    const auto k = static_cast<std::int64_t>(r->k);
    const Rational want(k + 1, 2 * k);
    ok = ok && r->ratio.has_value() && *r->ratio == want && r->all_passed();
    d << "k=" << k << ": " << (r->ratio ? r->ratio->to_string() : "none") << " (want "
      << want.to_string() << ")" << (r == &r84 ? "" : "; ");
  }
  return {ok, d.str()};
}

Outcome field_oracle() {
  std::uint64_t mismatches = 0;
  const Field& f8 = *Field::gf256();
  for (std::uint32_t a = 0; a < 256; ++a)
    for (std::uint32_t b = 0; b < 256; ++b)
      if (f8.mul(FieldElement(a), FieldElement(b)).value() !=
          oracle::clmul_reduce(a, b, 0x11D, 8))
        ++mismatches;
  const Field& f16 = *Field::gf65536();
  std::mt19937_64 gen(9001);
  const std::uint64_t pairs16 = 1000000;
  for (std::uint64_t i = 0; i < pairs16; ++i) {
    const auto a = static_cast<std::uint32_t>(gen() & 0xFFFF);
    const auto b = static_cast<std::uint32_t>(gen() & 0xFFFF);
    if (f16.mul(FieldElement(a), FieldElement(b)).value() !=
        oracle::clmul_reduce(a, b, 0x1100B, 16))
      ++mismatches;
  }
  std::ostringstream d;
  d << "65536 GF(2^8) pairs + " << pairs16 << " GF(2^16) pairs, " << mismatches
    << " mismatches";
  return {mismatches == 0, d.str()};
}

}  // namespace
}  // namespace sysmds

int main() {
  using sysmds::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 bandwidth optimality", sysmds::bandwidth_optimality},
      {"2 MDS preservation", sysmds::mds_preservation},
      {"3 systematic persistence", sysmds::systematic_persistence},
      {"4 decodability", sysmds::decodability},
      {"5 retry probability", sysmds::retry_probability},
      {"6 witness suite", sysmds::witness_suite},
      {"7 cut-inequality consistency", sysmds::cut_consistency},
      {"8 baseline comparison", sysmds::baseline_ratio},
      {"9 field oracle equivalence", sysmds::field_oracle},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
