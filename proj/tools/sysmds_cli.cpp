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

// sysmds command-line tool. Built only against the C API.
//
// Exit codes: 0 success, 1 invariant or verification failure, 2 usage error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sysmds/sysmds.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct CodeDeleter {
  void operator()(sysmds_code* c) const { sysmds_code_free(c); }
};
struct ClusterDeleter {
  void operator()(sysmds_cluster* c) const { sysmds_cluster_free(c); }
};
struct StringDeleter {
  void operator()(char* s) const { sysmds_free_string(s); }
};
using CodePtr = std::unique_ptr<sysmds_code, CodeDeleter>;
using ClusterPtr = std::unique_ptr<sysmds_cluster, ClusterDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

// Thrown to unwind to main with an exit code after printing a diagnostic.
struct Exit {
  int code;
};

[[noreturn]] void die(int code, const std::string& message) {
  std::cerr << "sysmds: " << message << "\n";
  throw Exit{code};
}

int exit_code_for(sysmds_status status) {
  switch (status) {
    case SYSMDS_ERR_INVALID_ARGUMENT:
    case SYSMDS_ERR_BAD_FIELD:
    case SYSMDS_ERR_BAD_SHAPE:
    case SYSMDS_ERR_UNSUPPORTED_SHAPE:
    case SYSMDS_ERR_FIELD_TOO_SMALL:
    case SYSMDS_ERR_BAD_HELPERS:
      return kExitUsage;
    default:
      return kExitFailure;
  }
}

void check(sysmds_status status) {
  if (status == SYSMDS_OK) return;
  die(exit_code_for(status),
      std::string(sysmds_status_name(status)) + ": " + sysmds_last_error());
}

uint32_t field_bits(const std::string& name) {
  if (name == "gf256") return 8;
  if (name == "gf65536") return 16;
  die(kExitUsage, "unknown field '" + name + "' (use gf256 or gf65536)");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die(kExitUsage, "cannot read " + path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::string& contents) {
  // Write beside the target and rename so a failure never truncates it.
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) die(kExitUsage, "cannot write " + path);
    out << contents;
    if (!out.flush()) die(kExitFailure, "failed writing " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) die(kExitFailure, "cannot replace " + path + ": " + ec.message());
}

std::string serialize(const sysmds_code* code) {
  char* raw = nullptr;
  size_t len = 0;
  check(sysmds_code_serialize(code, &raw, &len));
  StringPtr text(raw);
  return std::string(text.get(), len);
}

std::string fraction(int64_t num, int64_t den) {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

CodePtr parse_code(const std::string& path) {
  const std::string text = read_file(path);
  sysmds_code* raw = nullptr;
  check(sysmds_code_parse(text.data(), text.size(), &raw));
  return CodePtr(raw);
}

int cmd_gen(uint32_t n, uint32_t k, const std::string& field, uint64_t seed,
            const std::string& out_path) {
  sysmds_code* raw = nullptr;
  check(sysmds_code_create(n, k, field_bits(field), seed, &raw));
  CodePtr code(raw);
  write_file(out_path, serialize(code.get()));
  std::cout << "wrote (" << n << "," << k << ") code over " << field << " to " << out_path << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& path) {
  CodePtr code = parse_code(path);
  sysmds_code_info info{};
  check(sysmds_code_get_info(code.get(), &info));
  sysmds_verify_report report{};
  check(sysmds_code_verify(code.get(), &report));

  std::cout << "code (" << info.n << "," << info.k << ") over GF(2^" << info.field_bits
            << "), epoch " << info.epoch << "\n";
  if (report.mds_ok) {
    std::cout << report.subsets_checked << "/" << report.subsets_total
              << " subsets full rank\n";
  } else {
    std::cout << "rank-deficient subset {" << report.violation << "} after "
              << report.subsets_checked << "/" << report.subsets_total << " subsets\n";
  }
  std::cout << "systematic columns: " << (report.systematic_ok ? "ok" : "VIOLATED") << "\n";
  if (report.history_ok) {
    std::cout << "history: " << info.history_length << " transcripts replayed\n";
  } else {
    std::cout << "history: " << report.history_problem << "\n";
  }
  std::cout << (report.ok ? "PASS" : "FAIL") << "\n";
  return report.ok ? kExitOk : kExitFailure;
}

int cmd_repair(const std::string& path, uint32_t failed, const std::vector<uint32_t>& helpers,
               uint64_t seed, uint32_t max_retries) {
  const std::string text = read_file(path);
  sysmds_code* raw = nullptr;
  check(sysmds_code_load(text.data(), text.size(), &raw));
  CodePtr code(raw);

  sysmds_repair_result result{};
  check(sysmds_code_repair(code.get(), failed, helpers.empty() ? nullptr : helpers.data(),
                           helpers.size(), seed, max_retries, &result));
  write_file(path, serialize(code.get()));

  std::cout << "repaired node " << result.failed << " from helpers ";
  for (uint32_t i = 0; i < result.helper_count; ++i) {
    std::cout << (i ? "," : "") << result.helpers[i];
  }
  std::cout << "\nepoch " << result.epoch_after << ", retries " << result.retries << "\n";
  std::cout << "downloads " << result.downloaded_symbols << " symbols; bound "
            << fraction(result.bound_num, result.bound_den) << "; naive "
            << result.naive_symbols << "\n";
  return kExitOk;
}

int cmd_simulate(uint32_t n, uint32_t k, const std::string& field, uint64_t rounds,
                 uint64_t seed, const std::string& input, uint64_t byte_count,
                 const std::string& policy, const std::string& report_path) {
  std::vector<uint8_t> bytes;
  if (!input.empty()) {
    const std::string data = read_file(input);
    bytes.assign(data.begin(), data.end());
  } else {
    std::mt19937_64 gen(seed);
    bytes.resize(byte_count);
    for (uint8_t& b : bytes) b = static_cast<uint8_t>(gen() >> 56);
  }
  sysmds_failure_policy p = SYSMDS_FAILURE_UNIFORM;
  if (policy == "round-robin") {
    p = SYSMDS_FAILURE_ROUND_ROBIN;
  } else if (policy != "uniform") {
    die(kExitUsage, "unknown policy '" + policy + "'");
  }

  sysmds_cluster* raw = nullptr;
  check(sysmds_cluster_ingest(bytes.data(), bytes.size(), n, k, field_bits(field), seed, &raw));
  ClusterPtr cluster(raw);

  sysmds_campaign_summary summary{};
  char* json_raw = nullptr;
  char* text_raw = nullptr;
  check(sysmds_cluster_campaign(cluster.get(), rounds, p, SYSMDS_DEFAULT_MAX_RETRIES, &summary,
                                report_path.empty() ? nullptr : &json_raw, &text_raw));
  StringPtr json(json_raw);
  StringPtr text(text_raw);
  if (!report_path.empty()) write_file(report_path, json.get());
  std::cout << text.get();
  if (summary.ratio_den != 0) {
    std::cout << "savings ratio vs naive repair: "
              << fraction(summary.ratio_num, summary.ratio_den) << "\n";
  }
  return summary.all_passed ? kExitOk : kExitFailure;
}

int cmd_bound(std::optional<int64_t> file_symbols, int64_t k, std::optional<int64_t> d,
              std::optional<uint64_t> n) {
  if (!n && !(file_symbols && d)) die(kExitUsage, "bound needs --B and --d, or --n");
  if (file_symbols.has_value() != d.has_value()) die(kExitUsage, "--B and --d go together");
  if (file_symbols) {
    int64_t num = 0;
    int64_t den = 1;
    check(sysmds_cut_bound(*file_symbols, k, *d, &num, &den));
    std::cout << "cut_bound = " << fraction(num, den) << "\n";
  }
  if (n) {
    uint64_t value = 0;
    check(sysmds_d0(*n, static_cast<uint64_t>(k), &value));
    std::cout << "d0 = " << value << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Systematic MDS codes with minimum-bandwidth single-node repair"};
  app.require_subcommand(1);

  uint32_t n = 0;
  uint32_t k = 0;
  std::string field = "gf65536";
  uint64_t seed = 1;
  std::string path;

  auto* gen = app.add_subcommand("gen", "Write a freshly initialized code state");
  gen->add_option("--n", n, "Node count")->required();
  gen->add_option("--k", k, "Data pieces; 2k <= n")->required();
  gen->add_option("--field", field, "gf256 or gf65536")->capture_default_str();
  gen->add_option("--seed", seed)->capture_default_str();
  gen->add_option("--out", path, "Output code file")->required();

  auto* verify = app.add_subcommand("verify", "Check MDS, systematic columns and history");
  verify->add_option("path", path, "Code file")->required();

  uint32_t failed = 0;
  std::vector<uint32_t> helpers;
  uint32_t max_retries = SYSMDS_DEFAULT_MAX_RETRIES;
  auto* repair = app.add_subcommand("repair", "Repair one node in place");
  repair->add_option("path", path, "Code file")->required();
  repair->add_option("--failed", failed, "Failed node (1-based)")->required();
  repair->add_option("--helpers", helpers, "k+1 helper nodes, comma separated")->delimiter(',');
  repair->add_option("--seed", seed)->capture_default_str();
  repair->add_option("--max-retries", max_retries)->capture_default_str();

  uint64_t rounds = 0;
  std::string input;
  uint64_t byte_count = 4096;
  std::string policy = "uniform";
  std::string report_path;
  auto* simulate = app.add_subcommand("simulate", "Run a failure/repair campaign");
  simulate->add_option("--n", n)->required();
  simulate->add_option("--k", k)->required();
  simulate->add_option("--field", field)->capture_default_str();
  simulate->add_option("--rounds", rounds)->required();
  simulate->add_option("--seed", seed)->capture_default_str();
  simulate->add_option("--input", input, "File to store (default: seeded random bytes)");
  simulate->add_option("--bytes", byte_count, "Size of the generated input")->capture_default_str();
  simulate->add_option("--policy", policy, "uniform or round-robin")->capture_default_str();
  simulate->add_option("--report", report_path, "Write the JSON campaign report here");

  std::optional<int64_t> bound_b;
  std::optional<int64_t> bound_d;
  std::optional<uint64_t> bound_n;
  int64_t bound_k = 0;
  auto* bound = app.add_subcommand("bound", "Print the cut bound and/or d0");
  bound->add_option("--B", bound_b, "File size in symbols");
  bound->add_option("--k", bound_k)->required();
  bound->add_option("--d", bound_d, "Helper count");
  bound->add_option("--n", bound_n, "Node count, prints d0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) return cmd_gen(n, k, field, seed, path);
    if (*verify) return cmd_verify(path);
    if (*repair) return cmd_repair(path, failed, helpers, seed, max_retries);
    if (*simulate) {
      return cmd_simulate(n, k, field, rounds, seed, input, byte_count, policy, report_path);
    }
    if (*bound) return cmd_bound(bound_b, bound_k, bound_d, bound_n);
  } catch (const Exit& e) {
    return e.code;
  }
  return kExitUsage;
}
