// Copyright 2026 The ppcard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Scans what the linkage unit receives for anything beyond perturbed bits.

#ifndef PPCARD_TESTS_PRIVACY_SCAN_H_
#define PPCARD_TESTS_PRIVACY_SCAN_H_

#include <cctype>
#include <filesystem>
#include <regex>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ppcard/datagen.h"
#include "ppcard/encoding.h"
#include "ppcard/io.h"

namespace ppcard::testing {

// Plaintext needles: entity ids, normalized attribute values and their
// tagged q-gram tokens. Values that are valid lowercase hex could occur in a
// filter line by chance, so they are skipped.
inline std::set<std::string> PlaintextNeedles(std::span<const Provider> providers,
                                              const RecordSchema& schema,
                                              const EncodingParams& params) {
  const std::regex hex("^[0-9a-f]*$");
  std::set<std::string> out;
  for (const Provider& p : providers) {
    for (const PlainRecord& r : p.records) {
      if (r.entity_id) out.insert(*r.entity_id);
      for (const std::string& v : r.values) {
        const std::string n = NormalizeValue(v);
        if (n.size() >= 3 && !std::regex_match(n, hex)) out.insert(n);
      }
      auto tokens = RecordTokens(r, schema, params);
      if (tokens.ok()) out.insert(tokens->begin(), tokens->end());
    }
  }
  return out;
}

// Returns the violations found; empty means the files carry only the
// exchange header and fixed-width hex rows.
inline std::vector<std::string> ScanLinkageInputs(
    std::span<const std::filesystem::path> files,
    const std::set<std::string>& needles) {
  const std::regex header(
      "^ppcard-bf v1, ell=[0-9]+, epsilon=[0-9.e+-]+, provider=[A-Za-z0-9._-]+, "
      "n=[0-9]+$");
  const std::regex row("^[0-9a-f]+$");
  std::vector<std::string> bad;
  for (const auto& f : files) {
    if (f.extension() != ".bf") bad.push_back(f.string() + ": not an exchange file");
    auto text = ReadFile(f);
    if (!text.ok()) {
      bad.push_back(f.string() + ": unreadable");
      continue;
    }
    auto ds = ParseExchangeFile(*text);
    if (!ds.ok()) {
      bad.push_back(f.string() + ": " + std::string(ds.status().message()));
      continue;
    }
    const size_t width = 2 * ((ds->ell + 7) / 8);
    size_t start = 0;
    for (int line_no = 0; start < text->size(); ++line_no) {
      size_t end = text->find('\n', start);
      if (end == std::string::npos) end = text->size();
      const std::string line = text->substr(start, end - start);
      start = end + 1;
      if (line_no == 0) {
        if (!std::regex_match(line, header)) bad.push_back(f.string() + ": header " + line);
      } else if (!std::regex_match(line, row) || line.size() != width) {
        bad.push_back(f.string() + ": row " + std::to_string(line_no));
      }
    }
    for (const std::string& n : needles) {
      if (text->find(n) != std::string::npos) {
        bad.push_back(f.string() + ": contains '" + n + "'");
      }
    }
  }
  return bad;
}

}  // namespace ppcard::testing

#endif  // PPCARD_TESTS_PRIVACY_SCAN_H_
