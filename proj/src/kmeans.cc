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

#include "ppcard/kmeans.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "ppcard/random.h"

namespace ppcard {
namespace {

// Greedy k-means++: the first center is uniform; for every further center
// 2 + floor(ln k) candidates are drawn with probability proportional to
// their squared distance to the nearest chosen center, and the candidate
// that leaves the smallest total potential is kept. Centers are data points,
// so distances are Hamming counts.
std::vector<size_t> SeedPlusPlus(const PointSet& points, int k, Rng& rng) {
  const size_t n = points.size();
  const int trials = 2 + static_cast<int>(std::log(static_cast<double>(k)));
  std::vector<size_t> centers;
  centers.reserve(k);
  centers.push_back(UniformIndex(rng, n));
  std::vector<double> d2(n);
  for (size_t i = 0; i < n; ++i) {
    d2[i] = static_cast<double>(points.Hamming(i, centers[0]));
  }
  std::vector<double> candidate_d2(n);
  std::vector<double> best_d2(n);
  while (static_cast<int>(centers.size()) < k) {
    double total = 0;
    for (double v : d2) total += v;
    if (total <= 0) {
      // Every point coincides with a center already; duplicates are fine.
      centers.push_back(UniformIndex(rng, n));
      continue;
    }
    size_t best = n;
    double best_potential = 0;
    for (int t = 0; t < trials; ++t) {
      const double target = UniformDouble(rng) * total;
      double acc = 0;
      size_t pick = n;
      for (size_t i = 0; i < n; ++i) {
        if (d2[i] <= 0) continue;
        acc += d2[i];
        pick = i;
        if (acc > target) break;
      }
      double potential = 0;
      for (size_t i = 0; i < n; ++i) {
        candidate_d2[i] =
            std::min(d2[i], static_cast<double>(points.Hamming(i, pick)));
        potential += candidate_d2[i];
      }
      if (best == n || potential < best_potential) {
        best = pick;
        best_potential = potential;
        best_d2.swap(candidate_d2);
      }
    }
    centers.push_back(best);
    d2.swap(best_d2);
  }
  return centers;
}

struct Assignment {
  std::vector<int> labels;
  std::vector<double> dist;  // squared distance to the assigned centroid
  double inertia = 0;
};

Assignment Assign(const PointSet& points, const RowMatrix& centroids) {
  const size_t n = points.size();
  const Eigen::MatrixXf cf = centroids.cast<float>();
  const Eigen::VectorXf cnorm = cf.rowwise().squaredNorm();
  // k x n inner products.
  const Eigen::MatrixXf gram = cf * points.matrix();
  Assignment a;
  a.labels.resize(n);
  a.dist.resize(n);
  const Eigen::Index k = centroids.rows();
  for (size_t i = 0; i < n; ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    int best = 0;
    float best_d = std::numeric_limits<float>::max();
    for (Eigen::Index c = 0; c < k; ++c) {
      const float d = cnorm(c) - 2.0f * gram(c, col);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    a.labels[i] = best;
  }
  // Exact distances in double for the chosen centroids.
  for (size_t i = 0; i < n; ++i) {
    const auto row = centroids.row(a.labels[i]);
    double d = row.squaredNorm() + points.popcounts()(i);
    for (size_t w = 0; w < points.filters()[i].words().size(); ++w) {
      uint64_t bits = points.filters()[i].words()[w];
      while (bits != 0) {
        const int b = std::countr_zero(bits);
        d -= 2.0 * row(static_cast<Eigen::Index>(64 * w + b));
        bits &= bits - 1;
      }
    }
    a.dist[i] = std::max(0.0, d);
    a.inertia += a.dist[i];
  }
  return a;
}

// Moves the farthest points into empty clusters. Returns true if anything
// was relocated.
bool FillEmptyClusters(Assignment& a, RowMatrix& centroids,
                       const PointSet& points) {
  const int k = static_cast<int>(centroids.rows());
  std::vector<int> counts(k, 0);
  for (int label : a.labels) ++counts[label];
  bool moved = false;
  for (int c = 0; c < k; ++c) {
    if (counts[c] > 0) continue;
    size_t far = points.size();
    double far_d = -1;
    for (size_t i = 0; i < points.size(); ++i) {
      if (counts[a.labels[i]] > 1 && a.dist[i] > far_d) {
        far_d = a.dist[i];
        far = i;
      }
    }
    if (far == points.size()) break;  // fewer distinct points than clusters
    --counts[a.labels[far]];
    a.labels[far] = c;
    a.dist[far] = 0;
    ++counts[c];
    moved = true;
  }
  return moved;
}

// Means of the assigned points; clusters that stay empty keep their centroid.
RowMatrix UpdateCentroids(const PointSet& points, const std::vector<int>& labels,
                          const RowMatrix& previous) {
  const Eigen::Index k = previous.rows();
  RowMatrix sums = RowMatrix::Zero(k, static_cast<Eigen::Index>(points.dim()));
  std::vector<int> counts(k, 0);
  for (size_t i = 0; i < points.size(); ++i) {
    const int c = labels[i];
    ++counts[c];
    for (size_t w = 0; w < points.filters()[i].words().size(); ++w) {
      uint64_t bits = points.filters()[i].words()[w];
      while (bits != 0) {
        sums(c, static_cast<Eigen::Index>(64 * w + std::countr_zero(bits))) += 1.0;
        bits &= bits - 1;
      }
    }
  }
  for (Eigen::Index c = 0; c < k; ++c) {
    if (counts[c] == 0) {
      sums.row(c) = previous.row(c);
    } else {
      sums.row(c) /= static_cast<double>(counts[c]);
    }
  }
  return sums;
}

KMeansResult RunOnce(const PointSet& points, int k, Rng& rng,
                     const KMeansOptions& options) {
  const auto dim = static_cast<Eigen::Index>(points.dim());
  KMeansResult result;
  result.k = k;
  result.centroids.resize(k, dim);
  const std::vector<size_t> seeds = SeedPlusPlus(points, k, rng);
  for (int c = 0; c < k; ++c) {
    result.centroids.row(c) =
        points.matrix().col(static_cast<Eigen::Index>(seeds[c])).cast<double>().transpose();
  }

  Assignment a;
  for (int iter = 0; iter < options.max_iter; ++iter) {
    a = Assign(points, result.centroids);
    result.inertia_history.push_back(a.inertia);
    FillEmptyClusters(a, result.centroids, points);
    RowMatrix next = UpdateCentroids(points, a.labels, result.centroids);
    const double shift = (next - result.centroids).squaredNorm();
    result.centroids = std::move(next);
    result.iterations = iter + 1;
    if (shift < options.tol) break;
  }
  // Final assignment against the final centroids so every label is the
  // nearest centroid.
  a = Assign(points, result.centroids);
  result.inertia_history.push_back(a.inertia);
  result.assignments = std::move(a.labels);
  result.inertia = a.inertia;
  return result;
}

}  // namespace

absl::StatusOr<PointSet> PointSet::Create(std::span<const BloomFilter> filters) {
  PointSet ps;
  if (filters.empty()) return ps;
  ps.dim_ = filters.front().size();
  ps.filters_.assign(filters.begin(), filters.end());
  const auto n = static_cast<Eigen::Index>(filters.size());
  ps.matrix_ = Eigen::MatrixXf::Zero(static_cast<Eigen::Index>(ps.dim_), n);
  ps.popcounts_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const BloomFilter& bf = filters[static_cast<size_t>(i)];
    if (bf.size() != ps.dim_) {
      return absl::InvalidArgumentError(
          absl::StrCat("point ", i, " has length ", bf.size(), ", expected ",
                       ps.dim_));
    }
    for (size_t b = 0; b < ps.dim_; ++b) {
      if (bf.Test(b)) ps.matrix_(static_cast<Eigen::Index>(b), i) = 1.0f;
    }
    ps.popcounts_(i) = static_cast<float>(bf.Popcount());
  }
  return ps;
}

absl::StatusOr<KMeansResult> KMeans(const PointSet& points, int k,
                                    uint64_t seed,
                                    const KMeansOptions& options) {
  if (k < 1 || static_cast<size_t>(k) > points.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "k=", k, " outside [1, ", points.size(), "]"));
  }
  if (options.max_iter < 1 || options.n_init < 1) {
    return absl::InvalidArgumentError("max_iter and n_init must be >= 1");
  }
  Rng rng(seed);
  KMeansResult best;
  for (int run = 0; run < options.n_init; ++run) {
    KMeansResult r = RunOnce(points, k, rng, options);
    if (run == 0 || r.inertia < best.inertia) best = std::move(r);
  }
  return best;
}

absl::StatusOr<KMeansResult> KMeans(std::span<const BloomFilter> points, int k,
                                    uint64_t seed,
                                    const KMeansOptions& options) {
  absl::StatusOr<PointSet> ps = PointSet::Create(points);
  if (!ps.ok()) return ps.status();
  return KMeans(*ps, k, seed, options);
}

}  // namespace ppcard
