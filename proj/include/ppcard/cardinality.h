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

// Cardinality estimation at the linkage unit: plant references, cluster the
// pool for every candidate k, and pick the k with the highest total purity.

#ifndef PPCARD_CARDINALITY_H_
#define PPCARD_CARDINALITY_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "ppcard/kmeans.h"
#include "ppcard/ldp.h"
#include "ppcard/metrics.h"
#include "ppcard/references.h"

namespace ppcard {

struct SweepSettings {
  KMeansOptions kmeans;
  uint64_t seed = 13;
  // Silhouette and Calinski-Harabasz per k. They cost O(n^2) per k.
  bool compute_baselines = true;
};

struct SweepEntry {
  int k = 0;
  double purity = 0;
  std::vector<double> per_reference;
  double inertia = 0;
  std::optional<double> silhouette;
  std::optional<double> calinski_harabasz;
  double min_centroid_distance = 0;
};

struct PuritySweep {
  std::vector<SweepEntry> entries;
  int k_star = 0;
  std::optional<int> k_silhouette;
  std::optional<int> k_ch;
};

// Index of the largest value, smallest index on ties.
size_t ArgmaxFirst(std::span<const double> values);

// Clusters the pool once per k in `range` with seed DeriveSeed(seed, k) and
// scores every clustering. k_star maximizes total purity (smallest k on
// ties); the baseline selections use the same rule on their own scores.
absl::StatusOr<PuritySweep> SweepK(const Pool& pool, const KRange& range,
                                   const SweepSettings& settings);

// [2, min(n, 2 * expected_upper)] when an upper guess is known, else [2, n].
KRange DefaultKRange(size_t pool_size, std::optional<int> expected_upper);

// The exhaustive sweep k = 1 .. number of input filters.
KRange FullKRange(size_t num_inputs);

// |estimate - k_true| / k_true; 0 when k_true is not positive.
double ErrorRate(int estimate, int k_true);

struct CardinalityReport {
  ReferenceMethod method = ReferenceMethod::kRandom;
  double p_flip = 0;
  int num_references = 0;
  int num_dummies = 0;
  size_t num_inputs = 0;
  // Argmax of total purity: the distinct-entity estimate.
  int k_star = 0;
  std::optional<int> k_silhouette;
  std::optional<int> k_ch;
  std::optional<int> k_true;
  std::optional<int> error;
  std::optional<double> error_rate;
  std::optional<double> silhouette_error_rate;
  PuritySweep sweep;
};

absl::StatusOr<CardinalityReport> EstimateCardinality(
    std::span<const EncodedDataset> inputs, const ReferenceConfig& config,
    const KRange& range, const SweepSettings& settings,
    std::optional<int> k_true = std::nullopt);

}  // namespace ppcard

#endif  // PPCARD_CARDINALITY_H_
