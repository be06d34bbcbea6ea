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

#include "ppcard/ldp.h"

#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "ppcard/random.h"

namespace ppcard {

absl::StatusOr<double> FlipProbability(double epsilon) {
  if (std::isnan(epsilon) || epsilon <= 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be > 0, got ", epsilon));
  }
  // 1/(1+e^eps) written to stay accurate for large eps.
  const double t = std::exp(-epsilon);
  return t / (1.0 + t);
}

absl::StatusOr<PrivacyParams> PrivacyParams::Create(double epsilon,
                                                    uint64_t seed) {
  if (absl::StatusOr<double> eta = FlipProbability(epsilon); !eta.ok()) {
    return eta.status();
  }
  return PrivacyParams(epsilon, seed);
}

double PrivacyParams::eta() const { return *FlipProbability(epsilon_); }

double BitTransitionProbability(double epsilon, bool in, bool out) {
  const double eta = *FlipProbability(epsilon);
  return in == out ? 1.0 - eta : eta;
}

BloomFilter Perturb(const BloomFilter& bf, const PrivacyParams& privacy,
                    uint64_t record_index) {
  Rng rng(DeriveSeed(privacy.seed(), record_index));
  const double eta = privacy.eta();
  BloomFilter out = bf;
  for (size_t i = 0; i < out.size(); ++i) {
    if (Bernoulli(rng, eta)) out.Flip(i);
  }
  return out;
}

absl::StatusOr<EncodedDataset> PerturbDataset(
    std::span<const BloomFilter> filters, const PrivacyParams& privacy,
    std::string provider_id) {
  if (filters.empty()) {
    return absl::InvalidArgumentError("cannot perturb an empty dataset");
  }
  EncodedDataset out;
  out.provider_id = std::move(provider_id);
  out.ell = filters.front().size();
  out.epsilon = privacy.epsilon();
  out.filters.reserve(filters.size());
  for (size_t i = 0; i < filters.size(); ++i) {
    if (filters[i].size() != out.ell) {
      return absl::InvalidArgumentError(
          absl::StrCat("filter ", i, " has length ", filters[i].size(),
                       ", expected ", out.ell));
    }
    out.filters.push_back(Perturb(filters[i], privacy, i));
  }
  return out;
}

}  // namespace ppcard
