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

#include "ppcard/references.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "ppcard/random.h"

namespace ppcard {

std::string_view ReferenceMethodName(ReferenceMethod method) {
  return method == ReferenceMethod::kRandom ? "A" : "B";
}

absl::StatusOr<ReferenceMethod> ParseReferenceMethod(std::string_view name) {
  if (name == "A" || name == "a") return ReferenceMethod::kRandom;
  if (name == "B" || name == "b") return ReferenceMethod::kSample;
  return absl::InvalidArgumentError(
      absl::StrCat("reference method must be A or B, got '", std::string(name), "'"));
}

absl::Status ReferenceConfig::Validate() const {
  if (!(pick_ratio > 0 && pick_ratio <= 1)) {
    return absl::InvalidArgumentError("pick_ratio must be in (0, 1]");
  }
  if (!(dummy_ratio > 0)) {
    return absl::InvalidArgumentError("dummy_ratio must be > 0");
  }
  if (!(p_flip >= 0 && p_flip <= 0.5)) {
    return absl::InvalidArgumentError("p_flip must be in [0, 0.5]");
  }
  return absl::OkStatus();
}

std::pair<int, int> ReferenceCounts(size_t num_inputs,
                                    const ReferenceConfig& config) {
  const double n = static_cast<double>(num_inputs);
  const int n_ref = std::max(1, static_cast<int>(std::lround(config.pick_ratio * n)));
  const int n_dum =
      std::max(n_ref, static_cast<int>(std::lround(config.dummy_ratio * n)));
  return {n_ref, n_dum};
}

absl::StatusOr<ReferenceSet> MakeReferences(
    std::span<const EncodedDataset> inputs, const ReferenceConfig& config) {
  if (absl::Status s = config.Validate(); !s.ok()) return s;
  std::vector<SourceIndex> pool;
  size_t ell = 0;
  for (size_t d = 0; d < inputs.size(); ++d) {
    for (size_t r = 0; r < inputs[d].filters.size(); ++r) {
      const size_t len = inputs[d].filters[r].size();
      if (pool.empty()) ell = len;
      if (len != ell) {
        return absl::InvalidArgumentError(absl::StrCat(
            "dataset ", d, " record ", r, " has length ", len, ", expected ", ell));
      }
      pool.push_back({d, r});
    }
  }
  if (pool.empty()) {
    return absl::InvalidArgumentError("no input filters to draw references from");
  }
  const auto [n_ref, n_dum] = ReferenceCounts(pool.size(), config);
  if (config.method == ReferenceMethod::kSample &&
      static_cast<size_t>(n_ref) > pool.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "method B needs ", n_ref, " references but only ", pool.size(),
        " inputs exist"));
  }

  Rng rng(DeriveSeed(config.seed, 0x726566));
  ReferenceSet out;
  out.references.reserve(n_ref);
  if (config.method == ReferenceMethod::kRandom) {
    for (int i = 0; i < n_ref; ++i) {
      BloomFilter bf(ell);
      for (size_t b = 0; b < ell; ++b) {
        if (Bernoulli(rng, 0.5)) bf.Set(b);
      }
      out.references.push_back({i, std::move(bf), std::nullopt});
    }
  } else {
    // Partial Fisher-Yates: the first n_ref slots become a uniform sample
    // without replacement.
    for (int i = 0; i < n_ref; ++i) {
      const size_t j = i + UniformIndex(rng, pool.size() - i);
      std::swap(pool[i], pool[j]);
      const SourceIndex src = pool[i];
      out.references.push_back(
          {i, inputs[src.dataset].filters[src.record], src});
    }
  }

  out.dummies_per_reference.assign(n_ref, n_dum / n_ref);
  for (int i = 0; i < n_dum % n_ref; ++i) ++out.dummies_per_reference[i];

  Rng flip_rng(DeriveSeed(config.seed, 0x64756d));
  out.dummies.reserve(n_dum);
  for (const Reference& ref : out.references) {
    for (int j = 0; j < out.dummies_per_reference[ref.id]; ++j) {
      BloomFilter dummy = ref.filter;
      for (size_t b = 0; b < ell; ++b) {
        if (Bernoulli(flip_rng, config.p_flip)) dummy.Flip(b);
      }
      out.dummies.push_back({ref.id, std::move(dummy)});
    }
  }
  return out;
}

absl::StatusOr<Pool> BuildPool(std::span<const EncodedDataset> inputs,
                               const ReferenceSet& references,
                               bool exclude_sampled_originals) {
  std::set<std::pair<size_t, size_t>> excluded;
  if (exclude_sampled_originals) {
    for (const Reference& ref : references.references) {
      if (ref.source) excluded.insert({ref.source->dataset, ref.source->record});
    }
  }
  Pool pool;
  pool.num_references = static_cast<int>(references.references.size());
  for (const Reference& ref : references.references) {
    pool.filters.push_back(ref.filter);
    pool.points.push_back({PointRole::kReference, ref.id});
  }
  for (const Dummy& dummy : references.dummies) {
    if (dummy.reference_id < 0 || dummy.reference_id >= pool.num_references) {
      return absl::InvalidArgumentError(
          absl::StrCat("dummy refers to unknown reference ", dummy.reference_id));
    }
    pool.filters.push_back(dummy.filter);
    pool.points.push_back({PointRole::kDummy, dummy.reference_id});
  }
  for (size_t d = 0; d < inputs.size(); ++d) {
    for (size_t r = 0; r < inputs[d].filters.size(); ++r) {
      if (excluded.contains({d, r})) continue;
      pool.filters.push_back(inputs[d].filters[r]);
      pool.points.push_back({PointRole::kInput, -1});
      ++pool.num_inputs;
    }
  }
  if (!pool.filters.empty()) {
    const size_t ell = pool.filters.front().size();
    for (const BloomFilter& bf : pool.filters) {
      if (bf.size() != ell) {
        return absl::InvalidArgumentError("pooled filters differ in length");
      }
    }
  }
  return pool;
}

}  // namespace ppcard
