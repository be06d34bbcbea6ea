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

// Synthetic voter-style person records with known entity ids, duplicated and
// corrupted with character edits, then split across data providers.

#ifndef PPCARD_DATAGEN_H_
#define PPCARD_DATAGEN_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "ppcard/encoding.h"

namespace ppcard {

enum class EditOp { kInsert, kDelete, kSubstitute, kTranspose };

std::string_view EditOpName(EditOp op);
absl::StatusOr<EditOp> ParseEditOp(std::string_view name);

struct CorruptionConfig {
  double record_corruption_fraction = 0.0;
  int min_edits = 1;
  int max_edits = 2;
  std::vector<EditOp> edit_ops = {EditOp::kInsert, EditOp::kDelete,
                                  EditOp::kSubstitute, EditOp::kTranspose};
  uint64_t seed = 7;

  absl::Status Validate() const;
};

struct DuplicateConfig {
  // Each entity gets a uniform count in [min, max] of extra records.
  int min_duplicates = 1;
  int max_duplicates = 1;
};

struct Provider {
  std::string id;
  std::vector<PlainRecord> records;
};

struct DatasetBundle {
  std::vector<Provider> providers;
  int k_true = 0;
};

// n people over PersonSchema() with distinct entity ids "voter-000001", ...
std::vector<PlainRecord> GenerateEntities(int n, uint64_t seed);

// Applies one edit. Positions are clamped into range; substitution and
// insertion use `letter`. Transposition swaps s[pos] and s[pos + 1].
std::string ApplyEdit(std::string_view s, EditOp op, size_t pos, char letter);

// Emits each entity followed by its duplicates. Exactly
// round(fraction * #duplicates) duplicates are corrupted, each with a
// uniform number of edits in [min_edits, max_edits] on string attributes; a
// corrupted duplicate always differs from its original.
absl::StatusOr<std::vector<PlainRecord>> DuplicateAndCorrupt(
    const std::vector<PlainRecord>& entities, const DuplicateConfig& dup,
    const CorruptionConfig& corruption);

// Shuffles the records and deals them round-robin to providers
// "provider-1", "provider-2", ... so provider sizes differ by at most one.
absl::StatusOr<DatasetBundle> SplitProviders(std::vector<PlainRecord> records,
                                             int num_providers, uint64_t seed);

// Distinct entity ids across all providers.
int CountEntities(const DatasetBundle& bundle);

}  // namespace ppcard

#endif  // PPCARD_DATAGEN_H_
