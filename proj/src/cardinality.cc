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

#include "ppcard/cardinality.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "ppcard/purity.h"
#include "ppcard/random.h"

namespace ppcard {

size_t ArgmaxFirst(std::span<const double> values) {
  size_t best = 0;
  for (size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

absl::StatusOr<PuritySweep> SweepK(const Pool& pool, const KRange& range,
                                   const SweepSettings& settings) {
  const std::vector<int> ks = range.Values();
  if (ks.empty()) return absl::InvalidArgumentError("empty k range");
  if (ks.front() < 1 || static_cast<size_t>(ks.back()) > pool.filters.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "k range [", ks.front(), ", ", ks.back(), "] outside [1, ",
        pool.filters.size(), "]"));
  }
  absl::StatusOr<PointSet> points = PointSet::Create(pool.filters);
  if (!points.ok()) return points.status();
  std::optional<DistanceMatrix> distances;
  if (settings.compute_baselines) distances.emplace(*points);

  PuritySweep sweep;
  sweep.entries.reserve(ks.size());
  for (int k : ks) {
    absl::StatusOr<KMeansResult> km =
        KMeans(*points, k, DeriveSeed(settings.seed, static_cast<uint64_t>(k)),
               settings.kmeans);
    if (!km.ok()) return km.status();
    absl::StatusOr<PurityScores> purity =
        Purity(pool.points, pool.num_references, km->assignments, k);
    if (!purity.ok()) return purity.status();

    SweepEntry e;
    e.k = k;
    e.purity = purity->total;
    e.per_reference = std::move(purity->per_reference);
    e.inertia = km->inertia;
    e.min_centroid_distance = MinCentroidDistance(*km);
    if (settings.compute_baselines && k >= 2 &&
        static_cast<size_t>(k) < points->size()) {
      if (auto s = MeanSilhouette(*distances, km->assignments, k); s.ok()) {
        e.silhouette = *s;
      }
      if (auto ch = CalinskiHarabasz(*points, km->assignments); ch.ok()) {
        e.calinski_harabasz = *ch;
      }
    }
    sweep.entries.push_back(std::move(e));
  }

  std::vector<double> purities;
  for (const SweepEntry& e : sweep.entries) purities.push_back(e.purity);
  sweep.k_star = sweep.entries[ArgmaxFirst(purities)].k;

  // Baselines: argmax over the k values where the score is defined.
  auto select = [&](auto field) -> std::optional<int> {
    std::optional<int> best_k;
    double best = 0;
    for (const SweepEntry& e : sweep.entries) {
      const std::optional<double>& v = e.*field;
      if (v && (!best_k || *v > best)) {
        best = *v;
        best_k = e.k;
      }
    }
    return best_k;
  };
  sweep.k_silhouette = select(&SweepEntry::silhouette);
  sweep.k_ch = select(&SweepEntry::calinski_harabasz);
  return sweep;
}

double ErrorRate(int estimate, int k_true) {
  if (k_true <= 0) return 0.0;
  return std::abs(estimate - k_true) / static_cast<double>(k_true);
}

KRange DefaultKRange(size_t pool_size, std::optional<int> expected_upper) {
  const int n = static_cast<int>(pool_size);
  int last = n;
  if (expected_upper) last = std::min(n, 2 * *expected_upper);
  return {std::min(2, n), std::max(std::min(2, n), last), 1};
}

KRange FullKRange(size_t num_inputs) {
  return {1, static_cast<int>(num_inputs), 1};
}

absl::StatusOr<CardinalityReport> EstimateCardinality(
    std::span<const EncodedDataset> inputs, const ReferenceConfig& config,
    const KRange& range, const SweepSettings& settings,
    std::optional<int> k_true) {
  absl::StatusOr<ReferenceSet> refs = MakeReferences(inputs, config);
  if (!refs.ok()) return refs.status();
  absl::StatusOr<Pool> pool =
      BuildPool(inputs, *refs, config.exclude_sampled_originals);
  if (!pool.ok()) return pool.status();
  absl::StatusOr<PuritySweep> sweep = SweepK(*pool, range, settings);
  if (!sweep.ok()) return sweep.status();

  CardinalityReport report;
  report.method = config.method;
  report.p_flip = config.p_flip;
  report.num_references = static_cast<int>(refs->references.size());
  report.num_dummies = static_cast<int>(refs->dummies.size());
  for (const EncodedDataset& d : inputs) report.num_inputs += d.filters.size();
  report.k_star = sweep->k_star;
  report.k_silhouette = sweep->k_silhouette;
  report.k_ch = sweep->k_ch;
  if (k_true) {
    report.k_true = k_true;
    report.error = std::abs(report.k_star - *k_true);
    report.error_rate = ErrorRate(report.k_star, *k_true);
    if (report.k_silhouette) {
      report.silhouette_error_rate = ErrorRate(*report.k_silhouette, *k_true);
    }
  }
  report.sweep = *std::move(sweep);
  return report;
}

}  // namespace ppcard
