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


// File formats: plaintext record CSVs with a JSON schema, the encoded
// exchange file a provider ships to the linkage unit, the ground-truth
// sidecar, and the tabular outputs of sweeps, grids and theory curves.
//
// Missing or unreadable files yield NotFound; malformed content yields
// DataLoss.

#ifndef PPCARD_IO_H_
#define PPCARD_IO_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "ppcard/cardinality.h"
#include "ppcard/encoding.h"
#include "ppcard/ldp.h"
#include "ppcard/theory.h"

namespace ppcard {

inline constexpr std::string_view kEntityIdColumn = "entity_id";

absl::StatusOr<std::string> ReadFile(const std::filesystem::path& path);
// Creates parent directories as needed.
absl::Status WriteFile(const std::filesystem::path& path,
                       std::string_view content);

// Shortest text that parses back to the same double ("0.1", "3", "1e-05").
std::string FormatDouble(double v);

// {"attributes": [{"name": "given_name", "kind": "string"}, ...]}
absl::StatusOr<RecordSchema> ParseSchemaJson(std::string_view text);
std::string SchemaToJson(const RecordSchema& schema);
absl::StatusOr<RecordSchema> ReadSchemaFile(const std::filesystem::path& path);

// Header row names the columns. Every schema attribute must appear; an
// optional entity_id column fills PlainRecord::entity_id. Other columns are
// ignored. Fields may be double-quoted.
absl::StatusOr<std::vector<PlainRecord>> ParseRecordsCsv(
    std::string_view text, const RecordSchema& schema);
absl::StatusOr<std::vector<PlainRecord>> ReadRecordsCsv(
    const std::filesystem::path& path, const RecordSchema& schema);
std::string RecordsToCsv(std::span<const PlainRecord> records,
                         const RecordSchema& schema, bool with_entity_id);

// Exchange file:
//   ppcard-bf v1, ell=<ell>, epsilon=<eps>, provider=<id>, n=<count>
// followed by one lowercase hex filter per line. Ground truth is never
// written here.
std::string ExchangeFileText(const EncodedDataset& dataset);
absl::StatusOr<EncodedDataset> ParseExchangeFile(std::string_view text);
absl::StatusOr<EncodedDataset> ReadExchangeFile(
    const std::filesystem::path& path);

// Ground-truth sidecar:
//   ppcard-truth v1, provider=<id>, n=<count>
// followed by one entity id per line, aligned with the exchange file.
std::string TruthFileText(std::string_view provider_id,
                          std::span<const std::string> entity_ids);
absl::StatusOr<std::vector<std::string>> ParseTruthFile(
    std::string_view text, std::string_view expected_provider);

// k,Purity_k,silhouette,CH,inertia. Undefined baseline scores are empty.
std::string SweepCsv(const PuritySweep& sweep);

// epsilon,r,r_frac,p_closed,p_mc,mu,sigma. p_mc is empty when absent.
std::string TheoryCsv(std::span<const TheoryPoint> points);

}  // namespace ppcard

#endif  // PPCARD_IO_H_
