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

#include "ppcard/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "ppcard/random.h"

namespace ppcard {

DistanceMatrix::DistanceMatrix(const PointSet& points)
    : n_(points.size()), d_(n_ * n_, 0.0f) {
  for (size_t i = 0; i < n_; ++i) {
    for (size_t j = i + 1; j < n_; ++j) {
      const float d = std::sqrt(static_cast<float>(points.Hamming(i, j)));
      d_[i * n_ + j] = d;
      d_[j * n_ + i] = d;
    }
  }
}

absl::StatusOr<double> MeanSilhouette(const DistanceMatrix& distances,
                                      std::span<const int> labels, int k) {
  const size_t n = distances.size();
  if (labels.size() != n) {
    return absl::InvalidArgumentError("label count does not match distances");
  }
  std::vector<int> size(k, 0);
  for (int c : labels) {
    if (c < 0 || c >= k) return absl::InvalidArgumentError("label out of range");
    ++size[c];
  }
  const auto nonempty = std::count_if(size.begin(), size.end(),
                                      [](int s) { return s > 0; });
  if (nonempty < 2) {
    return absl::InvalidArgumentError("silhouette needs two nonempty clusters");
  }
  std::vector<double> sum(k);
  double total = 0;
  for (size_t i = 0; i < n; ++i) {
    const int own = labels[i];
    if (size[own] == 1) continue;
    std::fill(sum.begin(), sum.end(), 0.0);
    for (size_t j = 0; j < n; ++j) sum[labels[j]] += distances(i, j);
    const double a = sum[own] / (size[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      if (c != own && size[c] > 0) b = std::min(b, sum[c] / size[c]);
    }
    const double denom = std::max(a, b);
    if (denom > 0) total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

absl::StatusOr<double> CalinskiHarabasz(const PointSet& points,
                                        std::span<const int> labels) {
  const size_t n = points.size();
  if (labels.size() != n) {
    return absl::InvalidArgumentError("label count does not match points");
  }
  int max_label = -1;
  for (int c : labels) {
    if (c < 0) return absl::InvalidArgumentError("negative label");
    max_label = std::max(max_label, c);
  }
  const Eigen::Index dim = static_cast<Eigen::Index>(points.dim());
  std::vector<int> size(max_label + 1, 0);
  RowMatrix means = RowMatrix::Zero(max_label + 1, dim);
  for (size_t i = 0; i < n; ++i) {
    ++size[labels[i]];
    means.row(labels[i]) += points.matrix().col(static_cast<Eigen::Index>(i))
                                .cast<double>().transpose();
  }
  int k = 0;
  for (int c = 0; c <= max_label; ++c) {
    if (size[c] == 0) continue;
    ++k;
    means.row(c) /= size[c];
  }
  if (k < 2 || static_cast<size_t>(k) >= n) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Calinski-Harabasz needs 2 <= k < n, got k=", k, " n=", n));
  }
  const Eigen::RowVectorXd center =
      points.matrix().cast<double>().rowwise().mean().transpose();
  double between = 0;
  for (int c = 0; c <= max_label; ++c) {
    if (size[c] > 0) between += size[c] * (means.row(c) - center).squaredNorm();
  }
  double within = 0;
  for (size_t i = 0; i < n; ++i) {
    within += (points.matrix().col(static_cast<Eigen::Index>(i))
                   .cast<double>().transpose() - means.row(labels[i]))
                  .squaredNorm();
  }
  if (within <= 1e-12) return kCalinskiHarabaszCap;
  const double score = (between / (k - 1)) / (within / (static_cast<double>(n) - k));
  return std::min(score, kCalinskiHarabaszCap);
}

double MinCentroidDistance(const KMeansResult& result) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index a = 0; a < result.centroids.rows(); ++a) {
    for (Eigen::Index b = a + 1; b < result.centroids.rows(); ++b) {
      best = std::min(best, (result.centroids.row(a) - result.centroids.row(b)).norm());
    }
  }
  return std::isinf(best) ? 0.0 : best;
}

std::vector<int> KRange::Values() const {
  std::vector<int> out;
  if (stride < 1) return out;
  for (int k = first; k <= last; k += stride) out.push_back(k);
  return out;
}

absl::StatusOr<int> SilhouetteSelect(const PointSet& points, const KRange& range,
                                     uint64_t seed,
                                     const KMeansOptions& options) {
  const std::vector<int> ks = range.Values();
  if (ks.empty()) return absl::InvalidArgumentError("empty k range");
  if (ks.front() < 2) {
    return absl::InvalidArgumentError("silhouette selection needs k >= 2");
  }
  if (static_cast<size_t>(ks.back()) + 1 > points.size()) {
    return absl::InvalidArgumentError("silhouette selection needs k <= n - 1");
  }
  const DistanceMatrix distances(points);
  int best_k = ks.front();
  double best = -std::numeric_limits<double>::infinity();
  for (int k : ks) {
    absl::StatusOr<KMeansResult> r = KMeans(points, k, DeriveSeed(seed, k), options);
    if (!r.ok()) return r.status();
    absl::StatusOr<double> s = MeanSilhouette(distances, r->assignments, k);
    if (!s.ok()) continue;  // degenerate clustering, e.g. duplicate points
    if (*s > best) {
      best = *s;
      best_k = k;
    }
  }
  return best_k;
}

}  // namespace ppcard
