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


#include "ppcard/pipeline.h"

#include <atomic>
#include <bit>
#include <cmath>
#include <set>
#include <thread>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "ppcard/io.h"
#include "ppcard/random.h"

namespace ppcard {
namespace {

using Json = nlohmann::ordered_json;

Json OptionalJson(const std::optional<int>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json OptionalJson(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

std::string Cell(const std::optional<int>& v) {
  return v ? absl::StrCat(*v) : std::string();
}

std::string Cell(const std::optional<double>& v) {
  return v ? FormatDouble(*v) : std::string();
}

absl::StatusOr<CardinalityReport> Estimate(
    std::span<const EncodedDataset> datasets, const ExperimentConfig& config,
    ReferenceMethod method, double p_flip, uint64_t seed,
    std::optional<int> k_true) {
  size_t num_inputs = 0;
  for (const EncodedDataset& d : datasets) num_inputs += d.filters.size();
  const ReferenceConfig rc =
      config.References(method, p_flip, DeriveSeed(seed, kReferenceStream));
  const auto [n_ref, n_dum] = ReferenceCounts(num_inputs, rc);
  size_t pool_size = num_inputs + n_ref + n_dum;
  if (rc.exclude_sampled_originals && method == ReferenceMethod::kSample) {
    pool_size -= std::min<size_t>(pool_size, n_ref);
  }
  SweepSettings settings;
  settings.kmeans = config.kmeans;
  settings.seed = DeriveSeed(seed, kSweepStream);
  settings.compute_baselines = config.baselines;
  absl::StatusOr<CardinalityReport> report = EstimateCardinality(
      datasets, rc, config.ResolveKRange(pool_size, num_inputs), settings,
      k_true);
  if (!report.ok()) return report.status();
  if (absl::Status s = CheckSweep(report->sweep); !s.ok()) return s;
  return report;
}

}  // namespace

absl::StatusOr<ProviderData> GenerateProviders(const GenerateSpec& spec,
                                               uint64_t seed) {
  const std::vector<PlainRecord> entities =
      GenerateEntities(spec.entities, DeriveSeed(seed, kEntitiesStream));
  CorruptionConfig corruption = spec.corruption;
  corruption.seed = DeriveSeed(seed, kCorruptionStream);
  absl::StatusOr<std::vector<PlainRecord>> records =
      DuplicateAndCorrupt(entities, spec.duplicates, corruption);
  if (!records.ok()) return records.status();
  absl::StatusOr<DatasetBundle> bundle = SplitProviders(
      *std::move(records), spec.providers, DeriveSeed(seed, kSplitStream));
  if (!bundle.ok()) return bundle.status();
  ProviderData data;
  data.providers = std::move(bundle->providers);
  return data;
}

absl::StatusOr<ProviderData> LoadProviders(const ExperimentConfig& config) {
  if (!config.dataset.ingest()) {
    return GenerateProviders(config.dataset.generate, config.seed);
  }
  absl::StatusOr<RecordSchema> schema =
      ReadSchemaFile(*config.dataset.schema_file);
  if (!schema.ok()) return schema.status();
  ProviderData data;
  data.schema = *schema;
  std::set<std::string> ids;
  for (const std::filesystem::path& file : config.dataset.record_files) {
    absl::StatusOr<std::vector<PlainRecord>> records =
        ReadRecordsCsv(file, data.schema);
    if (!records.ok()) return records.status();
    Provider p{file.stem().string(), *std::move(records)};
    if (!ids.insert(p.id).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("two record files share the provider name '", p.id, "'"));
    }
    data.providers.push_back(std::move(p));
  }
  return data;
}

absl::StatusOr<std::vector<std::vector<BloomFilter>>> EncodeProviders(
    const ProviderData& data, const EncodingParams& params) {
  std::vector<std::vector<BloomFilter>> out;
  for (const Provider& p : data.providers) {
    std::vector<BloomFilter> filters;
    filters.reserve(p.records.size());
    for (size_t i = 0; i < p.records.size(); ++i) {
      absl::StatusOr<BloomFilter> bf =
          EncodeRecord(p.records[i], data.schema, params);
      if (!bf.ok()) {
        return absl::DataLossError(absl::StrCat(
            "provider ", p.id, " record ", i + 1, ": ", bf.status().message()));
      }
      filters.push_back(*std::move(bf));
    }
    out.push_back(std::move(filters));
  }
  return out;
}

absl::StatusOr<std::vector<EncodedDataset>> PerturbProviders(
    const ProviderData& data, std::span<const std::vector<BloomFilter>> filters,
    double epsilon, uint64_t seed) {
  if (filters.size() != data.providers.size()) {
    return absl::InternalError("filter lists do not match the providers");
  }
  std::vector<EncodedDataset> out;
  for (size_t p = 0; p < filters.size(); ++p) {
    const Provider& provider = data.providers[p];
    absl::StatusOr<PrivacyParams> privacy =
        PrivacyParams::Create(epsilon, DeriveSeed(seed, p));
    if (!privacy.ok()) return privacy.status();
    absl::StatusOr<EncodedDataset> ds =
        PerturbDataset(filters[p], *privacy, provider.id);
    if (!ds.ok()) {
      return absl::DataLossError(
          absl::StrCat("provider ", provider.id, ": ", ds.status().message()));
    }
    std::vector<std::string> truth;
    for (const PlainRecord& r : provider.records) {
      if (!r.entity_id || r.entity_id->empty()) break;
      truth.push_back(*r.entity_id);
    }
    if (truth.size() == provider.records.size()) ds->ground_truth = std::move(truth);
    out.push_back(*std::move(ds));
  }
  return out;
}

std::optional<int> TrueCardinality(std::span<const EncodedDataset> datasets) {
  std::set<std::string> ids;
  for (const EncodedDataset& d : datasets) {
    if (!d.ground_truth) return std::nullopt;
    ids.insert(d.ground_truth->begin(), d.ground_truth->end());
  }
  return static_cast<int>(ids.size());
}

absl::Status CheckSweep(const PuritySweep& sweep) {
  if (sweep.entries.empty()) return absl::InternalError("empty sweep");
  size_t best = 0;
  for (size_t i = 0; i < sweep.entries.size(); ++i) {
    const SweepEntry& e = sweep.entries[i];
    double sum = 0;
    for (double p : e.per_reference) {
      if (!(p >= 0 && p <= 1)) {
        return absl::InternalError(
            absl::StrCat("k=", e.k, ": purity ", p, " outside [0, 1]"));
      }
      sum += p;
    }
    if (std::fabs(sum - e.purity) > 1e-9 * std::max(1.0, sum)) {
      return absl::InternalError(
          absl::StrCat("k=", e.k, ": per-reference purities do not sum to total"));
    }
    if (e.purity > sweep.entries[best].purity) best = i;
  }
  if (sweep.entries[best].k != sweep.k_star) {
    return absl::InternalError(absl::StrCat("k_star ", sweep.k_star,
                                            " is not the first argmax ",
                                            sweep.entries[best].k));
  }
  return absl::OkStatus();
}

absl::StatusOr<CardinalityReport> RunLinkage(
    std::span<const EncodedDataset> datasets, const ExperimentConfig& config,
    std::optional<int> k_true) {
  return Estimate(datasets, config, config.method, config.p_flip, config.seed,
                  k_true);
}

std::string ReportJson(const CardinalityReport& r,
                       const ExperimentConfig& config, double epsilon) {
  Json j = {
      {"k_star", r.k_star},
      {"k_silhouette", OptionalJson(r.k_silhouette)},
      {"k_ch", OptionalJson(r.k_ch)},
      {"method", ReferenceMethodName(r.method)},
      {"epsilon", epsilon},
      {"p_flip", r.p_flip},
      {"num_inputs", r.num_inputs},
      {"num_references", r.num_references},
      {"num_dummies", r.num_dummies},
      {"k_range",
       {{"first", r.sweep.entries.front().k}, {"last", r.sweep.entries.back().k}}},
  };
  if (r.k_true) {
    j["k_true"] = *r.k_true;
    j["error"] = OptionalJson(r.error);
    j["error_rate"] = OptionalJson(r.error_rate);
    j["silhouette_error_rate"] = OptionalJson(r.silhouette_error_rate);
  }
  j["config"] = Json::parse(ConfigToJson(config, -1));
  return j.dump(2) + "\n";
}

absl::StatusOr<PipelineOutput> RunPipeline(const ExperimentConfig& config) {
  if (absl::Status s = config.Validate(); !s.ok()) return s;
  absl::StatusOr<ProviderData> data = LoadProviders(config);
  if (!data.ok()) return data.status();
  absl::StatusOr<std::vector<std::vector<BloomFilter>>> filters =
      EncodeProviders(*data, config.encoding);
  if (!filters.ok()) return filters.status();
  absl::StatusOr<std::vector<EncodedDataset>> released = PerturbProviders(
      *data, *filters, config.epsilon, DeriveSeed(config.seed, kPerturbStream));
  if (!released.ok()) return released.status();

  PipelineOutput out;
  const std::filesystem::path& dir = config.out_dir;
  for (EncodedDataset& ds : *released) {
    const std::filesystem::path exchange =
        dir / "exchange" / (ds.provider_id + ".bf");
    if (absl::Status s = WriteFile(exchange, ExchangeFileText(ds)); !s.ok()) {
      return s;
    }
    out.linkage_inputs.push_back(exchange);
    if (ds.ground_truth) {
      const std::filesystem::path truth =
          dir / "truth" / (ds.provider_id + ".truth");
      if (absl::Status s =
              WriteFile(truth, TruthFileText(ds.provider_id, *ds.ground_truth));
          !s.ok()) {
        return s;
      }
      out.truth_files.push_back(truth);
    }
  }
  released->clear();

  // Linkage unit: only the exchange files from here on.
  std::vector<EncodedDataset> pooled;
  for (const std::filesystem::path& f : out.linkage_inputs) {
    absl::StatusOr<EncodedDataset> ds = ReadExchangeFile(f);
    if (!ds.ok()) return ds.status();
    pooled.push_back(*std::move(ds));
  }

  // Evaluation: the distinct-id count from the sidecars, nothing else.
  std::optional<int> k_true;
  if (!out.truth_files.empty() &&
      out.truth_files.size() == out.linkage_inputs.size()) {
    std::set<std::string> ids;
    for (size_t i = 0; i < out.truth_files.size(); ++i) {
      absl::StatusOr<std::string> text = ReadFile(out.truth_files[i]);
      if (!text.ok()) return text.status();
      absl::StatusOr<std::vector<std::string>> truth =
          ParseTruthFile(*text, pooled[i].provider_id);
      if (!truth.ok()) return truth.status();
      if (truth->size() != pooled[i].filters.size()) {
        return absl::DataLossError("ground truth and exchange file sizes differ");
      }
      ids.insert(truth->begin(), truth->end());
    }
    k_true = static_cast<int>(ids.size());
  }

  absl::StatusOr<CardinalityReport> report = RunLinkage(pooled, config, k_true);
  if (!report.ok()) return report.status();
  out.report = *std::move(report);

  out.report_file = dir / "report.json";
  out.sweep_file = dir / "sweep.csv";
  out.manifest_file = dir / "manifest.json";
  if (absl::Status s = WriteFile(out.report_file,
                                 ReportJson(out.report, config, config.epsilon));
      !s.ok()) {
    return s;
  }
  if (absl::Status s = WriteFile(out.sweep_file, SweepCsv(out.report.sweep));
      !s.ok()) {
    return s;
  }
  Json inputs = Json::array();
  for (const auto& f : out.linkage_inputs) {
    inputs.push_back(std::filesystem::relative(f, dir).generic_string());
  }
  Json truths = Json::array();
  for (const auto& f : out.truth_files) {
    truths.push_back(std::filesystem::relative(f, dir).generic_string());
  }
  Json manifest = {
      {"stage", "estimate"},
      {"linkage_inputs", inputs},
      {"truth_sidecars", truths},
      {"report", "report.json"},
      {"sweep", "sweep.csv"},
      {"config", Json::parse(ConfigToJson(config, -1))},
  };
  if (absl::Status s = WriteFile(out.manifest_file, manifest.dump(2) + "\n");
      !s.ok()) {
    return s;
  }
  return out;
}

uint64_t GridCellSeed(uint64_t master, ReferenceMethod method, double epsilon,
                      double p_flip, int rep) {
  uint64_t s = DeriveSeed(master, kGridStream);
  s = DeriveSeed(s, static_cast<uint64_t>(method));
  s = DeriveSeed(s, std::bit_cast<uint64_t>(epsilon));
  s = DeriveSeed(s, static_cast<uint64_t>(std::llround(p_flip * 1e9)));
  return DeriveSeed(s, static_cast<uint64_t>(rep));
}

absl::StatusOr<std::vector<GridRow>> RunGrid(const ExperimentConfig& config,
                                             const ProviderData& data) {
  if (absl::Status s = config.Validate(); !s.ok()) return s;
  absl::StatusOr<std::vector<std::vector<BloomFilter>>> filters =
      EncodeProviders(data, config.encoding);
  if (!filters.ok()) return filters.status();

  std::vector<GridRow> rows;
  for (ReferenceMethod m : config.methods) {
    for (double eps : config.epsilons) {
      for (double p : config.p_flip_grid.Values()) {
        for (int rep = 0; rep < config.repetitions; ++rep) {
          rows.push_back({m, eps, p, rep, std::nullopt, {}});
        }
      }
    }
  }

  auto run_cell = [&](GridRow& row) {
    const uint64_t seed =
        GridCellSeed(config.seed, row.method, row.epsilon, row.p_flip, row.rep);
    absl::StatusOr<std::vector<EncodedDataset>> released = PerturbProviders(
        data, *filters, row.epsilon, DeriveSeed(seed, kPerturbStream));
    if (!released.ok()) {
      row.failure = std::string(released.status().message());
      return;
    }
    absl::StatusOr<CardinalityReport> report =
        Estimate(*released, config, row.method, row.p_flip, seed,
                 TrueCardinality(*released));
    if (!report.ok()) {
      row.failure = std::string(report.status().message());
      return;
    }
    report->sweep.entries.clear();
    row.report = *std::move(report);
  };

  const size_t workers =
      std::min<size_t>(static_cast<size_t>(config.workers), rows.size());
  if (workers <= 1) {
    for (GridRow& row : rows) run_cell(row);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (size_t i = next++; i < rows.size(); i = next++) run_cell(rows[i]);
      });
    }
    for (std::thread& t : pool) t.join();
  }
  return rows;
}

std::string GridCsv(std::span<const GridRow> rows) {
  std::string out =
      "method,epsilon,p_flip,rep,k_star,error,error_rate,k_silhouette,"
      "silhouette_error_rate\n";
  for (const GridRow& row : rows) {
    absl::StrAppend(&out, std::string(ReferenceMethodName(row.method)), ",",
                    FormatDouble(row.epsilon), ",", FormatDouble(row.p_flip),
                    ",", row.rep, ",");
    if (row.report) {
      const CardinalityReport& r = *row.report;
      absl::StrAppend(&out, r.k_star, ",", Cell(r.error), ",",
                      Cell(r.error_rate), ",", Cell(r.k_silhouette), ",",
                      Cell(r.silhouette_error_rate));
    } else {
      absl::StrAppend(&out, ",,,,");
    }
    absl::StrAppend(&out, "\n");
  }
  return out;
}

}  // namespace ppcard
