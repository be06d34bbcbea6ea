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

#ifndef PPCARD_KMEANS_H_
#define PPCARD_KMEANS_H_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "absl/status/statusor.h"
#include "ppcard/bloom_filter.h"

namespace ppcard {

struct KMeansOptions {
  int max_iter = 300;
  // Lloyd stops once the summed squared centroid movement drops below tol.
  double tol = 1e-4;
  // Independent k-means++ restarts; the lowest-inertia run is kept.
  int n_init = 1;
};

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct KMeansResult {
  int k = 0;
  std::vector<int> assignments;
  // k x ell.
  RowMatrix centroids;
  double inertia = 0;
  int iterations = 0;
  // Inertia after every assignment step of the kept run.
  std::vector<double> inertia_history;
};

// Binary points embedded in R^ell, prepared once and shared by every k of a
// sweep. Squared Euclidean distances between points are Hamming distances.
class PointSet {
 public:
  // All filters must share one length.
  static absl::StatusOr<PointSet> Create(std::span<const BloomFilter> filters);

  size_t size() const { return filters_.size(); }
  size_t dim() const { return dim_; }
  const std::vector<BloomFilter>& filters() const { return filters_; }
  const Eigen::MatrixXf& matrix() const { return matrix_; }
  const Eigen::VectorXf& popcounts() const { return popcounts_; }

  size_t Hamming(size_t i, size_t j) const {
    return HammingDistance(filters_[i], filters_[j]);
  }

 private:
  std::vector<BloomFilter> filters_;
  size_t dim_ = 0;
  Eigen::MatrixXf matrix_;  // dim x n, one column per point.
  Eigen::VectorXf popcounts_;
};

// Lloyd's algorithm with k-means++ seeding. Empty clusters are re-seeded
// from the point farthest from its centroid. Rejects k outside [1, n].
absl::StatusOr<KMeansResult> KMeans(const PointSet& points, int k,
                                    uint64_t seed,
                                    const KMeansOptions& options = {});

absl::StatusOr<KMeansResult> KMeans(std::span<const BloomFilter> points, int k,
                                    uint64_t seed,
                                    const KMeansOptions& options = {});

}  // namespace ppcard

#endif  // PPCARD_KMEANS_H_
