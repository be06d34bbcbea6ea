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

// Reference filters with labelled dummy copies. They are planted into the
// pool the linkage unit clusters and act as pseudo ground truth: a good
// clustering puts each reference together with exactly its own dummies.

#ifndef PPCARD_REFERENCES_H_
#define PPCARD_REFERENCES_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "ppcard/bloom_filter.h"
#include "ppcard/ldp.h"

namespace ppcard {

enum class ReferenceMethod {
  kRandom,  // "A": fake filters with iid Bernoulli(1/2) bits
  kSample,  // "B": copies of a uniform sample of the pooled inputs
};

std::string_view ReferenceMethodName(ReferenceMethod method);  // "A" / "B"
absl::StatusOr<ReferenceMethod> ParseReferenceMethod(std::string_view name);

struct ReferenceConfig {
  ReferenceMethod method = ReferenceMethod::kRandom;
  // n_ref = max(1, round(pick_ratio * N)) for N pooled input filters.
  double pick_ratio = 0.1;
  // Total dummies = max(n_ref, round(dummy_ratio * N)), spread evenly.
  double dummy_ratio = 0.1;
  // Per-bit flip probability used to derive dummies from their reference.
  double p_flip = 0.1;
  uint64_t seed = 11;
  // Method B only: drop the sampled originals from the pool so a reference
  // does not coexist with its identical twin.
  bool exclude_sampled_originals = false;

  absl::Status Validate() const;
};

struct SourceIndex {
  size_t dataset = 0;
  size_t record = 0;
};

struct Reference {
  int id = 0;
  BloomFilter filter;
  std::optional<SourceIndex> source;  // set for Method B
};

struct Dummy {
  int reference_id = 0;
  BloomFilter filter;
};

struct ReferenceSet {
  std::vector<Reference> references;
  std::vector<Dummy> dummies;
  std::vector<int> dummies_per_reference;
};

// Returns {n_ref, total dummies} for N pooled inputs.
std::pair<int, int> ReferenceCounts(size_t num_inputs,
                                    const ReferenceConfig& config);

absl::StatusOr<ReferenceSet> MakeReferences(
    std::span<const EncodedDataset> inputs, const ReferenceConfig& config);

enum class PointRole { kInput, kReference, kDummy };

struct PoolPoint {
  PointRole role = PointRole::kInput;
  int reference_id = -1;  // for references and dummies
};

// Everything the linkage unit clusters: references, dummies and all inputs.
struct Pool {
  std::vector<BloomFilter> filters;
  std::vector<PoolPoint> points;
  int num_references = 0;
  size_t num_inputs = 0;
};

absl::StatusOr<Pool> BuildPool(std::span<const EncodedDataset> inputs,
                               const ReferenceSet& references,
                               bool exclude_sampled_originals = false);

}  // namespace ppcard

#endif  // PPCARD_REFERENCES_H_
