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


// Closed-form and simulated probabilities that a perturbed filter stays
// within distance r of its original, as a function of the privacy budget.

#ifndef PPCARD_THEORY_H_
#define PPCARD_THEORY_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace ppcard {

// P(||bf - bf'||^2 <= r^2) under the Gaussian model of the flip count:
//
//   1/2 + 1/2 erf((r^2 - mu) / (sqrt(2) sigma)),  mu = ell eta,
//   sigma = sqrt(ell eta (1 - eta)),
//
// clamped to [0, 1]. r is in Euclidean distance units. When sigma is 0
// (epsilon = infinity) the flip count is 0 and the result is 1. Rejects
// ell < 1, r < 0 and epsilon <= 0.
absl::StatusOr<double> SameClusterProbability(size_t ell, double epsilon,
                                              double r);

// Same with the threshold given as a fraction of ell: r = r_frac * ell.
absl::StatusOr<double> SameClusterProbabilityFrac(size_t ell, double epsilon,
                                                  double r_frac);

// Exact P(Binomial(ell, eta) <= floor(r^2)).
absl::StatusOr<double> ExactSameClusterProbability(size_t ell, double epsilon,
                                                   double r);

// Fraction of `trials` perturbations of a fixed random filter that end up
// within Euclidean distance r of it.
absl::StatusOr<double> MonteCarloSameCluster(size_t ell, double epsilon,
                                             double r, int trials,
                                             uint64_t seed);

struct TheoryPoint {
  double epsilon = 0;
  double r = 0;
  double r_frac = 0;
  size_t ell = 0;
  double p_closed = 0;
  std::optional<double> p_mc;
  double mu = 0;
  double sigma = 0;
};

struct CurveSpec {
  size_t ell = 200;
  std::vector<double> epsilons;
  // Thresholds in distance units; each point also reports r / ell.
  std::vector<double> rs;
  // 0 skips the simulation column.
  int mc_trials = 0;
  uint64_t seed = 1;
};

// One point per (epsilon, r), epsilon-major. Rejects empty grids.
absl::StatusOr<std::vector<TheoryPoint>> EmitCurves(const CurveSpec& spec);

}  // namespace ppcard

#endif  // PPCARD_THEORY_H_
