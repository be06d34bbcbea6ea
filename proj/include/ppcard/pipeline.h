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


// End-to-end runs. The pipeline keeps the provider and linkage roles apart:
// providers encode and perturb their own records and write exchange files;
// the linkage stage reads nothing but those exchange files. Ground truth is
// read from separate sidecars only to score the result.

#ifndef PPCARD_PIPELINE_H_
#define PPCARD_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "ppcard/cardinality.h"
#include "ppcard/config.h"
#include "ppcard/datagen.h"
#include "ppcard/encoding.h"
#include "ppcard/ldp.h"

namespace ppcard {

// Stream indices under the master seed. Every random choice of a run is
// drawn from DeriveSeed(master, one of these) or a further derivation.
enum SeedStream : uint64_t {
  kEntitiesStream = 1,
  kCorruptionStream = 2,
  kSplitStream = 3,
  kPerturbStream = 4,
  kReferenceStream = 5,
  kSweepStream = 6,
  kGridStream = 7,
};

// Plaintext providers plus the schema their records follow.
struct ProviderData {
  RecordSchema schema = PersonSchema();
  std::vector<Provider> providers;
};

// Generates the configured synthetic bundle.
absl::StatusOr<ProviderData> GenerateProviders(const GenerateSpec& spec,
                                               uint64_t seed);
// Generated or ingested providers, according to config.dataset. Ingested
// providers are named after their file stems.
absl::StatusOr<ProviderData> LoadProviders(const ExperimentConfig& config);

// Unperturbed filters of every provider, in provider order.
absl::StatusOr<std::vector<std::vector<BloomFilter>>> EncodeProviders(
    const ProviderData& data, const EncodingParams& params);

// Perturbs each provider's filters; provider p uses
// DeriveSeed(seed, p). Ground truth is attached when every record has an id.
absl::StatusOr<std::vector<EncodedDataset>> PerturbProviders(
    const ProviderData& data, std::span<const std::vector<BloomFilter>> filters,
    double epsilon, uint64_t seed);

// Number of distinct ids over the ground-truth columns; nullopt when any
// dataset lacks one.
std::optional<int> TrueCardinality(std::span<const EncodedDataset> datasets);

// Checks the sweep's invariants: per-reference purities in [0, 1] summing to
// the total, and k_star at the first maximum. Internal error otherwise.
absl::Status CheckSweep(const PuritySweep& sweep);

// The linkage stage alone: estimate from the datasets with the config's
// single-run method and p_flip.
absl::StatusOr<CardinalityReport> RunLinkage(
    std::span<const EncodedDataset> datasets, const ExperimentConfig& config,
    std::optional<int> k_true);

// JSON report: k_star, k_silhouette, k_ch, error fields when ground truth is
// known, run details and an echo of the config.
std::string ReportJson(const CardinalityReport& report,
                       const ExperimentConfig& config, double epsilon);

struct PipelineOutput {
  CardinalityReport report;
  std::filesystem::path report_file;
  std::filesystem::path sweep_file;
  std::filesystem::path manifest_file;
  // The only files the linkage stage opened.
  std::vector<std::filesystem::path> linkage_inputs;
  std::vector<std::filesystem::path> truth_files;
};

// Providers -> exchange files (+ truth sidecars) -> linkage on the exchange
// files -> report.json, sweep.csv and manifest.json under config.out_dir.
absl::StatusOr<PipelineOutput> RunPipeline(const ExperimentConfig& config);

struct GridRow {
  ReferenceMethod method = ReferenceMethod::kRandom;
  double epsilon = 0;
  double p_flip = 0;
  int rep = 0;
  std::optional<CardinalityReport> report;
  // Set when the cell failed; the grid carries on.
  std::string failure;
};

// Seed of one grid cell, a function of the cell's keys only.
uint64_t GridCellSeed(uint64_t master, ReferenceMethod method, double epsilon,
                      double p_flip, int rep);

// Every (method, epsilon, p_flip, rep) cell, in that nesting order. Each
// cell perturbs the shared filters with its own seed and runs a full
// estimate. Cells run on config.workers threads; the output does not depend
// on the worker count.
absl::StatusOr<std::vector<GridRow>> RunGrid(const ExperimentConfig& config,
                                             const ProviderData& data);

// method,epsilon,p_flip,rep,k_star,error,error_rate,k_silhouette,
// silhouette_error_rate. Failed cells leave the result columns empty.
std::string GridCsv(std::span<const GridRow> rows);

}  // namespace ppcard

#endif  // PPCARD_PIPELINE_H_
