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


// Experiment configuration shared by the pipeline, the grid runner and the
// command line tool, with its JSON form.

#ifndef PPCARD_CONFIG_H_
#define PPCARD_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "ppcard/datagen.h"
#include "ppcard/encoding.h"
#include "ppcard/kmeans.h"
#include "ppcard/metrics.h"
#include "ppcard/references.h"

namespace ppcard {

struct GenerateSpec {
  int entities = 171;
  DuplicateConfig duplicates;
  // The seed inside is replaced by one derived from the master seed.
  CorruptionConfig corruption;
  int providers = 2;
};

// Either generated data or one record CSV per provider plus a schema file.
struct DatasetSpec {
  GenerateSpec generate;
  std::vector<std::filesystem::path> record_files;
  std::optional<std::filesystem::path> schema_file;
  bool ingest() const { return !record_files.empty(); }
};

// Inclusive start..stop in `step` increments.
struct ValueGrid {
  double start = 0.10;
  double stop = 0.30;
  double step = 0.01;
  // Values are start + i * step, rounded to 12 decimals so that 0.1 + 2 * 0.01
  // prints as 0.12.
  std::vector<double> Values() const;
};

struct TheorySpec {
  size_t ell = 200;
  std::vector<double> epsilons = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  // Thresholds as fractions of ell; converted with r = r_frac * ell.
  std::vector<double> r_fracs = {0.005, 0.010, 0.015, 0.020, 0.025, 0.030,
                                 0.040};
  // Absolute thresholds, used instead of r_fracs when nonempty.
  std::vector<double> rs;
  int mc_trials = 0;
};

struct ExperimentConfig {
  DatasetSpec dataset;
  EncodingParams encoding;

  // Single-run settings (estimate, cluster).
  double epsilon = 3.0;
  ReferenceMethod method = ReferenceMethod::kSample;
  double p_flip = 0.10;

  // Grid settings.
  std::vector<double> epsilons = {1, 2, 3, 4, 5, 10};
  std::vector<ReferenceMethod> methods = {ReferenceMethod::kRandom,
                                          ReferenceMethod::kSample};
  ValueGrid p_flip_grid;
  int repetitions = 1;
  int workers = 1;

  double pick_ratio = 0.1;
  double dummy_ratio = 0.1;
  bool exclude_sampled_originals = false;

  // Explicit sweep range; when absent the range is [2, min(n, 2 * upper)]
  // with upper = expected_upper, or [2, n] without one.
  std::optional<KRange> k_range;
  std::optional<int> expected_upper;
  // Sweep k = 1 .. number of input filters.
  bool full_sweep = false;
  KMeansOptions kmeans;
  bool baselines = true;

  TheorySpec theory;

  uint64_t seed = 1;
  std::filesystem::path out_dir = "ppcard-out";

  // InvalidArgument on the first violated constraint.
  absl::Status Validate() const;
  // The sweep range for a pool of `pool_size` points and `num_inputs` inputs.
  KRange ResolveKRange(size_t pool_size, size_t num_inputs) const;
  ReferenceConfig References(ReferenceMethod m, double flip,
                             uint64_t seed) const;
};

// Starts from `base` and applies the keys present in `text`. Unknown keys
// are rejected so that typos do not silently fall back to defaults.
absl::StatusOr<ExperimentConfig> ParseConfigJson(std::string_view text,
                                                 ExperimentConfig base = {});
absl::StatusOr<ExperimentConfig> ReadConfigFile(
    const std::filesystem::path& path, ExperimentConfig base = {});
// Every field, in the same shape ParseConfigJson reads.
std::string ConfigToJson(const ExperimentConfig& config, int indent = 2);

}  // namespace ppcard

#endif  // PPCARD_CONFIG_H_
