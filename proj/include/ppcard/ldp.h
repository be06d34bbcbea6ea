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

// Randomized response over Bloom filter bits. Each bit is flipped
// independently with probability eta = 1 / (1 + e^epsilon), which makes the
// released filter epsilon-locally differentially private with respect to
// filters that differ in a single bit.

#ifndef PPCARD_LDP_H_
#define PPCARD_LDP_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "ppcard/bloom_filter.h"

namespace ppcard {

// Rejects epsilon <= 0 and NaN. Infinity maps to 0.
absl::StatusOr<double> FlipProbability(double epsilon);

class PrivacyParams {
 public:
  static absl::StatusOr<PrivacyParams> Create(double epsilon, uint64_t seed);

  double epsilon() const { return epsilon_; }
  uint64_t seed() const { return seed_; }
  // Always derived from epsilon.
  double eta() const;

 private:
  PrivacyParams(double epsilon, uint64_t seed)
      : epsilon_(epsilon), seed_(seed) {}

  double epsilon_;
  uint64_t seed_;
};

// Probability that randomized response maps input bit `in` to output `out`.
double BitTransitionProbability(double epsilon, bool in, bool out);

// Flips each bit with probability eta. The random stream depends only on
// (privacy.seed(), record_index), so datasets can be perturbed in any order.
BloomFilter Perturb(const BloomFilter& bf, const PrivacyParams& privacy,
                    uint64_t record_index);

// What a data provider ships to the linkage unit, plus an evaluation-only
// ground-truth column that is stored in a separate file.
struct EncodedDataset {
  std::string provider_id;
  size_t ell = 0;
  double epsilon = 0;
  std::vector<BloomFilter> filters;
  std::optional<std::vector<std::string>> ground_truth;
};

// Perturbs filters[i] with record index i. Rejects an empty input or mixed
// filter lengths.
absl::StatusOr<EncodedDataset> PerturbDataset(
    std::span<const BloomFilter> filters, const PrivacyParams& privacy,
    std::string provider_id = "provider");

}  // namespace ppcard

#endif  // PPCARD_LDP_H_
