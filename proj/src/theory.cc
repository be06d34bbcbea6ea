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


#include "ppcard/theory.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "ppcard/bloom_filter.h"
#include "ppcard/ldp.h"
#include "ppcard/random.h"

namespace ppcard {
namespace {

absl::Status CheckArgs(size_t ell, double r) {
  if (ell < 1) return absl::InvalidArgumentError("ell must be >= 1");
  if (!(r >= 0)) return absl::InvalidArgumentError("r must be >= 0");
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<double> SameClusterProbability(size_t ell, double epsilon,
                                              double r) {
  if (absl::Status s = CheckArgs(ell, r); !s.ok()) return s;
  absl::StatusOr<double> eta = FlipProbability(epsilon);
  if (!eta.ok()) return eta.status();
  const double n = static_cast<double>(ell);
  const double mu = n * *eta;
  const double sigma = std::sqrt(n * *eta * (1.0 - *eta));
  if (sigma == 0) return 1.0;
  const double p =
      0.5 + 0.5 * std::erf((r * r - mu) / (std::sqrt(2.0) * sigma));
  return std::clamp(p, 0.0, 1.0);
}

absl::StatusOr<double> SameClusterProbabilityFrac(size_t ell, double epsilon,
                                                  double r_frac) {
  return SameClusterProbability(ell, epsilon,
                                r_frac * static_cast<double>(ell));
}

absl::StatusOr<double> ExactSameClusterProbability(size_t ell, double epsilon,
                                                   double r) {
  if (absl::Status s = CheckArgs(ell, r); !s.ok()) return s;
  absl::StatusOr<double> eta = FlipProbability(epsilon);
  if (!eta.ok()) return eta.status();
  const double cut = std::floor(r * r);
  if (*eta == 0 || cut >= static_cast<double>(ell)) return 1.0;
  const double n = static_cast<double>(ell);
  const double log_p = std::log(*eta);
  const double log_q = std::log1p(-*eta);
  double total = 0;
  for (int x = 0; x <= static_cast<int>(cut); ++x) {
    const double lc = std::lgamma(n + 1) - std::lgamma(x + 1.0) -
                      std::lgamma(n - x + 1);
    total += std::exp(lc + x * log_p + (n - x) * log_q);
  }
  return std::clamp(total, 0.0, 1.0);
}

absl::StatusOr<double> MonteCarloSameCluster(size_t ell, double epsilon,
                                             double r, int trials,
                                             uint64_t seed) {
  if (absl::Status s = CheckArgs(ell, r); !s.ok()) return s;
  if (trials < 1) return absl::InvalidArgumentError("trials must be >= 1");
  absl::StatusOr<PrivacyParams> privacy =
      PrivacyParams::Create(epsilon, DeriveSeed(seed, 1));
  if (!privacy.ok()) return privacy.status();
  Rng rng(DeriveSeed(seed, 0));
  BloomFilter original(ell);
  for (size_t b = 0; b < ell; ++b) {
    if (Bernoulli(rng, 0.5)) original.Set(b);
  }
  const double r2 = r * r;
  int hits = 0;
  for (int t = 0; t < trials; ++t) {
    const BloomFilter noisy =
        Perturb(original, *privacy, static_cast<uint64_t>(t));
    if (static_cast<double>(HammingDistance(original, noisy)) <= r2) ++hits;
  }
  return static_cast<double>(hits) / trials;
}

absl::StatusOr<std::vector<TheoryPoint>> EmitCurves(const CurveSpec& spec) {
  if (spec.epsilons.empty() || spec.rs.empty()) {
    return absl::InvalidArgumentError("epsilon and r grids must be nonempty");
  }
  std::vector<TheoryPoint> out;
  out.reserve(spec.epsilons.size() * spec.rs.size());
  uint64_t cell = 0;
  for (double eps : spec.epsilons) {
    absl::StatusOr<double> eta = FlipProbability(eps);
    if (!eta.ok()) return eta.status();
    for (double r : spec.rs) {
      TheoryPoint pt;
      pt.epsilon = eps;
      pt.r = r;
      pt.ell = spec.ell;
      pt.r_frac = r / static_cast<double>(spec.ell);
      pt.mu = static_cast<double>(spec.ell) * *eta;
      pt.sigma = std::sqrt(static_cast<double>(spec.ell) * *eta * (1 - *eta));
      absl::StatusOr<double> p = SameClusterProbability(spec.ell, eps, r);
      if (!p.ok()) return p.status();
      pt.p_closed = *p;
      if (spec.mc_trials > 0) {
        absl::StatusOr<double> mc = MonteCarloSameCluster(
            spec.ell, eps, r, spec.mc_trials, DeriveSeed(spec.seed, cell));
        if (!mc.ok()) return mc.status();
        pt.p_mc = *mc;
      }
      ++cell;
      out.push_back(pt);
    }
  }
  return out;
}

}  // namespace ppcard
