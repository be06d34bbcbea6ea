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

#ifndef PPCARD_PURITY_H_
#define PPCARD_PURITY_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "ppcard/references.h"

namespace ppcard {

struct PurityScores {
  std::vector<double> per_reference;
  double total = 0;
};

// Scores how completely and exclusively each reference's cluster holds its
// dummies. For reference i sitting in cluster c:
//
//   purity_i = n_dum_c / (n_dum + n_c - 1 - n_dum_c)
//
// where n_dum_c counts i's dummies inside c, n_dum is i's dummy total and
// n_c is the size of c. purity_i is 1 exactly when c is {i} plus all of its
// dummies. The total is the plain sum over references.
//
// `points[j]` describes the pooled point with label `assignments[j]`.
// Rejects mismatched sizes, labels outside [0, k), references that are
// missing from the pool or that own no dummies.
absl::StatusOr<PurityScores> Purity(std::span<const PoolPoint> points,
                                    int num_references,
                                    std::span<const int> assignments, int k);

}  // namespace ppcard

#endif  // PPCARD_PURITY_H_
