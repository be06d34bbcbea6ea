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

// Distance-based cluster quality scores used as elbow-style baselines.

#ifndef PPCARD_METRICS_H_
#define PPCARD_METRICS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "ppcard/kmeans.h"

namespace ppcard {

// Returned instead of infinity when the within-cluster dispersion is zero.
inline constexpr double kCalinskiHarabaszCap = 1e12;

// Dense symmetric Euclidean distance matrix, sqrt(Hamming).
class DistanceMatrix {
 public:
  explicit DistanceMatrix(const PointSet& points);

  size_t size() const { return n_; }
  float operator()(size_t i, size_t j) const { return d_[i * n_ + j]; }

 private:
  size_t n_;
  std::vector<float> d_;
};

// Mean silhouette (b - a) / max(a, b) over all points, where a is the mean
// distance to the rest of the point's cluster and b the smallest mean
// distance to another nonempty cluster. Points in singleton clusters score
// 0. Needs at least two nonempty clusters.
absl::StatusOr<double> MeanSilhouette(const DistanceMatrix& distances,
                                      std::span<const int> labels, int k);

// (B / (k - 1)) / (W / (n - k)) over the nonempty clusters of `labels`, with
// B and W the between- and within-cluster dispersions. Requires
// 2 <= k < n. Perfectly tight clusterings return kCalinskiHarabaszCap.
absl::StatusOr<double> CalinskiHarabasz(const PointSet& points,
                                        std::span<const int> labels);

// Smallest Euclidean distance between two centroids.
double MinCentroidDistance(const KMeansResult& result);

struct KRange {
  int first = 2;
  int last = 2;
  int stride = 1;

  std::vector<int> Values() const;
};

// Runs k-means for every k in `range` (seeded with DeriveSeed(seed, k)) and
// returns the k with the highest mean silhouette, smallest k on ties.
// Requires 2 <= k <= n - 1 throughout the range.
absl::StatusOr<int> SilhouetteSelect(const PointSet& points, const KRange& range,
                                     uint64_t seed,
                                     const KMeansOptions& options = {});

}  // namespace ppcard

#endif  // PPCARD_METRICS_H_
