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

#include "ppcard/purity.h"

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace ppcard {

absl::StatusOr<PurityScores> Purity(std::span<const PoolPoint> points,
                                    int num_references,
                                    std::span<const int> assignments, int k) {
  if (points.size() != assignments.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        points.size(), " pooled points but ", assignments.size(), " labels"));
  }
  if (num_references < 0 || k < 1) {
    return absl::InvalidArgumentError("need num_references >= 0 and k >= 1");
  }
  std::vector<int> cluster_size(k, 0);
  std::vector<int> reference_cluster(num_references, -1);
  std::vector<int> dummy_total(num_references, 0);
  for (size_t j = 0; j < points.size(); ++j) {
    const int c = assignments[j];
    if (c < 0 || c >= k) {
      return absl::InvalidArgumentError(
          absl::StrCat("label ", c, " of point ", j, " outside [0, ", k, ")"));
    }
    ++cluster_size[c];
    const PoolPoint& p = points[j];
    if (p.role == PointRole::kInput) continue;
    if (p.reference_id < 0 || p.reference_id >= num_references) {
      return absl::InvalidArgumentError(
          absl::StrCat("point ", j, " names unknown reference ", p.reference_id));
    }
    if (p.role == PointRole::kReference) {
      reference_cluster[p.reference_id] = c;
    } else {
      ++dummy_total[p.reference_id];
    }
  }
  // Dummies of each reference that share the reference's cluster.
  std::vector<int> dummy_in_cluster(num_references, 0);
  for (size_t j = 0; j < points.size(); ++j) {
    const PoolPoint& p = points[j];
    if (p.role == PointRole::kDummy &&
        assignments[j] == reference_cluster[p.reference_id]) {
      ++dummy_in_cluster[p.reference_id];
    }
  }

  PurityScores scores;
  scores.per_reference.resize(num_references);
  for (int i = 0; i < num_references; ++i) {
    if (reference_cluster[i] < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("reference ", i, " is not in the pool"));
    }
    if (dummy_total[i] == 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("reference ", i, " has no dummies"));
    }
    const int n_c = cluster_size[reference_cluster[i]];
    const int hit = dummy_in_cluster[i];
    scores.per_reference[i] = static_cast<double>(hit) /
                              static_cast<double>(dummy_total[i] + n_c - 1 - hit);
    scores.total += scores.per_reference[i];
  }
  return scores;
}

}  // namespace ppcard
