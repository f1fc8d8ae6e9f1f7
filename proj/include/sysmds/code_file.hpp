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

#include <string>
#include <string_view>
#include <vector>

#include "sysmds/code.hpp"
#include "sysmds/repair.hpp"

namespace sysmds {

inline constexpr std::string_view kCodeFileVersion = "sysmds-code/1";

/// A code state together with the transcripts of every repair applied to it.
struct StoredCode {
  CodeState state;
  std::vector<RepairTranscript> history;
};

/// Canonical text form: JSON with fixed key order, two-space indent,
/// lowercase fixed-width hex symbols, 1-based node numbers and a trailing
/// newline. U and V are lists of columns; each column is a space-separated
/// string of 2k symbols.
std::string serialize(const StoredCode& code);

/// Structural parse. Checks the version, shapes and hex syntax but not the
/// code invariants, so that damaged states can still be inspected.
/// Throws Error(kParse) or the shape errors of CodeState.
StoredCode parse_code_file(std::string_view text);

/// parse_code_file followed by validate_invariants().
StoredCode load_code_file(std::string_view text);

struct VerifyReport {
  SubsetScan mds;
  bool systematic = false;
  bool history_ok = false;
  std::string history_problem;

  bool ok() const { return mds.ok && systematic && history_ok; }
};

/// Exhaustive MDS scan, systematic-column check and a replay of the history
/// from the deterministic initial state, checking every transcript and the
/// MDS property at every intermediate epoch.
VerifyReport verify(const StoredCode& code);

}  // namespace sysmds
