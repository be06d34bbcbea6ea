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


#include "tools/cli.h"

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "ppcard/config.h"
#include "ppcard/io.h"
#include "ppcard/ldp.h"
#include "ppcard/pipeline.h"
#include "ppcard/random.h"
#include "ppcard/theory.h"

namespace ppcard::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct GlobalFlags {
  std::string config_file;
  uint64_t seed = 0;
  std::string out_dir;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* out_opt = nullptr;
};

struct RangeFlags {
  int k_min = 0;
  int k_max = 0;
  int k_stride = 1;
  bool full_sweep = false;
  CLI::Option* min_opt = nullptr;
  CLI::Option* max_opt = nullptr;
  CLI::Option* stride_opt = nullptr;
};

struct RunFlags {
  double epsilon = 0;
  std::string method;
  double p_flip = 0;
  int n_init = 1;
  bool no_baselines = false;
  CLI::Option* eps_opt = nullptr;
  CLI::Option* method_opt = nullptr;
  CLI::Option* pflip_opt = nullptr;
  CLI::Option* ninit_opt = nullptr;
};

void AddRangeFlags(CLI::App* app, RangeFlags& f) {
  f.min_opt = app->add_option("--k-min", f.k_min, "Smallest k of the sweep");
  f.max_opt = app->add_option("--k-max", f.k_max, "Largest k of the sweep");
  f.stride_opt = app->add_option("--k-stride", f.k_stride, "Step between k values");
  app->add_flag("--full-sweep", f.full_sweep,
                "Sweep k = 1 .. number of input filters");
}

void AddRunFlags(CLI::App* app, RunFlags& f, bool with_epsilon) {
  if (with_epsilon) {
    f.eps_opt = app->add_option("--epsilon", f.epsilon, "Privacy budget");
  }
  f.method_opt = app->add_option("--method", f.method, "Reference method, A or B");
  f.pflip_opt = app->add_option("--p-flip", f.p_flip, "Dummy flip probability");
  f.ninit_opt = app->add_option("--n-init", f.n_init, "k-means restarts per k");
  app->add_flag("--no-baselines", f.no_baselines,
                "Skip silhouette and Calinski-Harabasz");
}

absl::Status ApplyRange(const RangeFlags& f, ExperimentConfig& c) {
  if (f.full_sweep) c.full_sweep = true;
  if (f.min_opt->count() || f.max_opt->count() || f.stride_opt->count()) {
    KRange r = c.k_range.value_or(KRange{2, 2, 1});
    if (f.min_opt->count()) r.first = f.k_min;
    if (f.max_opt->count()) r.last = f.k_max;
    if (f.stride_opt->count()) r.stride = f.k_stride;
    if (!c.k_range && !f.max_opt->count()) {
      return absl::InvalidArgumentError("--k-max is required without a k_range");
    }
    c.k_range = r;
  }
  return absl::OkStatus();
}

absl::Status ApplyRun(const RunFlags& f, ExperimentConfig& c) {
  if (f.eps_opt && f.eps_opt->count()) c.epsilon = f.epsilon;
  if (f.method_opt->count()) {
    absl::StatusOr<ReferenceMethod> m = ParseReferenceMethod(f.method);
    if (!m.ok()) return m.status();
    c.method = *m;
  }
  if (f.pflip_opt->count()) c.p_flip = f.p_flip;
  if (f.ninit_opt->count()) c.kmeans.n_init = f.n_init;
  if (f.no_baselines) c.baselines = false;
  return absl::OkStatus();
}

absl::StatusOr<ExperimentConfig> LoadConfig(const GlobalFlags& g) {
  ExperimentConfig c;
  if (!g.config_file.empty()) {
    absl::StatusOr<ExperimentConfig> loaded = ReadConfigFile(g.config_file);
    if (!loaded.ok()) return loaded.status();
    c = *std::move(loaded);
  }
  if (g.seed_opt->count()) c.seed = g.seed;
  if (g.out_opt->count()) c.out_dir = g.out_dir;
  return c;
}

absl::Status Write(const fs::path& path, std::string_view content) {
  absl::Status s = WriteFile(path, content);
  if (s.ok()) std::cout << "wrote " << path.string() << "\n";
  return s;
}

// datagen -------------------------------------------------------------------

struct DatagenFlags {
  int entities = 0;
  int providers = 0;
  double corruption = 0;
  int dup_min = 0;
  int dup_max = 0;
  CLI::Option* entities_opt = nullptr;
  CLI::Option* providers_opt = nullptr;
  CLI::Option* corruption_opt = nullptr;
  CLI::Option* dup_min_opt = nullptr;
  CLI::Option* dup_max_opt = nullptr;
};

void ApplyDatagen(const DatagenFlags& f, ExperimentConfig& c) {
  GenerateSpec& g = c.dataset.generate;
  if (f.entities_opt->count()) g.entities = f.entities;
  if (f.providers_opt->count()) g.providers = f.providers;
  if (f.corruption_opt->count()) g.corruption.record_corruption_fraction = f.corruption;
  if (f.dup_min_opt->count()) g.duplicates.min_duplicates = f.dup_min;
  if (f.dup_max_opt->count()) g.duplicates.max_duplicates = f.dup_max;
}

absl::Status RunDatagen(const ExperimentConfig& c) {
  if (c.dataset.ingest()) {
    return absl::InvalidArgumentError("datagen does not take record files");
  }
  if (absl::Status s = c.Validate(); !s.ok()) return s;
  absl::StatusOr<ProviderData> data = GenerateProviders(c.dataset.generate, c.seed);
  if (!data.ok()) return data.status();
  std::set<std::string> ids;
  Json files = Json::array();
  for (const Provider& p : data->providers) {
    const fs::path file = c.out_dir / (p.id + ".csv");
    if (absl::Status s = Write(file, RecordsToCsv(p.records, data->schema, true));
        !s.ok()) {
      return s;
    }
    for (const PlainRecord& r : p.records) ids.insert(*r.entity_id);
    files.push_back({{"provider", p.id},
                     {"file", p.id + ".csv"},
                     {"records", p.records.size()}});
  }
  if (absl::Status s = Write(c.out_dir / "schema.json", SchemaToJson(data->schema));
      !s.ok()) {
    return s;
  }
  const GenerateSpec& g = c.dataset.generate;
  Json manifest = {
      {"stage", "datagen"},
      {"seed", c.seed},
      {"k_true", ids.size()},
      {"entities", g.entities},
      {"duplicates_per_entity",
       {{"min", g.duplicates.min_duplicates}, {"max", g.duplicates.max_duplicates}}},
      {"corruption_fraction", g.corruption.record_corruption_fraction},
      {"edits_per_record",
       {{"min", g.corruption.min_edits}, {"max", g.corruption.max_edits}}},
      {"providers", files},
      {"schema", "schema.json"},
  };
  return Write(c.out_dir / "manifest.json", manifest.dump(2) + "\n");
}

// encode --------------------------------------------------------------------

struct EncodeFlags {
  std::string input;
  std::string schema;
  std::string provider;
  std::string output;
  std::string truth;
  uint64_t record_offset = 0;
};

absl::Status RunEncode(const ExperimentConfig& c, const EncodeFlags& f) {
  if (absl::Status s = c.Validate(); !s.ok()) return s;
  absl::StatusOr<RecordSchema> schema = ReadSchemaFile(f.schema);
  if (!schema.ok()) return schema.status();
  absl::StatusOr<std::vector<PlainRecord>> records = ReadRecordsCsv(f.input, *schema);
  if (!records.ok()) return records.status();
  ProviderData data;
  data.schema = *schema;
  const std::string id =
      f.provider.empty() ? fs::path(f.input).stem().string() : f.provider;
  data.providers.push_back({id, *std::move(records)});
  absl::StatusOr<std::vector<std::vector<BloomFilter>>> filters =
      EncodeProviders(data, c.encoding);
  if (!filters.ok()) return filters.status();
  // The provider's stream is keyed by its name, so each provider can encode
  // on its own machine with the shared master seed.
  uint64_t name_key = 0;
  for (unsigned char ch : id) name_key = Mix64(name_key ^ ch);
  absl::StatusOr<std::vector<EncodedDataset>> released = PerturbProviders(
      data, *filters, c.epsilon,
      DeriveSeed(DeriveSeed(c.seed, kPerturbStream), name_key));
  if (!released.ok()) return released.status();
  const EncodedDataset& ds = released->front();
  const fs::path out = f.output.empty() ? c.out_dir / (id + ".bf") : fs::path(f.output);
  if (absl::Status s = Write(out, ExchangeFileText(ds)); !s.ok()) return s;
  if (ds.ground_truth) {
    const fs::path truth =
        f.truth.empty() ? fs::path(out).replace_extension(".truth") : fs::path(f.truth);
    return Write(truth, TruthFileText(id, *ds.ground_truth));
  }
  return absl::OkStatus();
}

// cluster -------------------------------------------------------------------

struct ClusterFlags {
  std::vector<std::string> inputs;
  std::vector<std::string> truths;
};

absl::Status RunCluster(const ExperimentConfig& c, const ClusterFlags& f) {
  if (absl::Status s = c.Validate(); !s.ok()) return s;
  std::vector<EncodedDataset> pooled;
  for (const std::string& in : f.inputs) {
    absl::StatusOr<EncodedDataset> ds = ReadExchangeFile(in);
    if (!ds.ok()) return ds.status();
    pooled.push_back(*std::move(ds));
  }
  double epsilon = pooled.front().epsilon;
  for (const EncodedDataset& d : pooled) {
    if (d.epsilon != epsilon) epsilon = std::numeric_limits<double>::quiet_NaN();
  }
  std::optional<int> k_true;
  if (!f.truths.empty()) {
    if (f.truths.size() != f.inputs.size()) {
      return absl::InvalidArgumentError(
          "give one --truth file per --input file, in the same order");
    }
    std::set<std::string> ids;
    for (size_t i = 0; i < f.truths.size(); ++i) {
      absl::StatusOr<std::string> text = ReadFile(f.truths[i]);
      if (!text.ok()) return text.status();
      absl::StatusOr<std::vector<std::string>> t =
          ParseTruthFile(*text, pooled[i].provider_id);
      if (!t.ok()) return t.status();
      if (t->size() != pooled[i].filters.size()) {
        return absl::DataLossError(absl::StrCat(
            f.truths[i], " has ", t->size(), " ids for ",
            pooled[i].filters.size(), " filters"));
      }
      ids.insert(t->begin(), t->end());
    }
    k_true = static_cast<int>(ids.size());
  }
  absl::StatusOr<CardinalityReport> report = RunLinkage(pooled, c, k_true);
  if (!report.ok()) return report.status();
  if (absl::Status s = Write(c.out_dir / "sweep.csv", SweepCsv(report->sweep)); !s.ok()) {
    return s;
  }
  if (absl::Status s =
          Write(c.out_dir / "report.json", ReportJson(*report, c, epsilon));
      !s.ok()) {
    return s;
  }
  std::cout << "k_star=" << report->k_star;
  if (report->error) std::cout << " error=" << *report->error;
  std::cout << "\n";
  return absl::OkStatus();
}

// estimate ------------------------------------------------------------------

struct EstimateFlags {
  std::vector<std::string> records;
  std::string schema;
};

absl::Status RunEstimate(ExperimentConfig c, const EstimateFlags& f) {
  if (!f.records.empty()) c.dataset.record_files.assign(f.records.begin(), f.records.end());
  if (!f.schema.empty()) c.dataset.schema_file = f.schema;
  absl::StatusOr<PipelineOutput> out = RunPipeline(c);
  if (!out.ok()) return out.status();
  std::cout << "wrote " << out->report_file.string() << "\n"
            << "wrote " << out->sweep_file.string() << "\n"
            << "k_star=" << out->report.k_star;
  if (out->report.error) std::cout << " error=" << *out->report.error;
  std::cout << "\n";
  return absl::OkStatus();
}

// grid ----------------------------------------------------------------------

struct GridFlags {
  int workers = 1;
  int reps = 1;
  std::vector<double> epsilons;
  std::vector<std::string> methods;
  double corruption = 0;
  CLI::Option* workers_opt = nullptr;
  CLI::Option* reps_opt = nullptr;
  CLI::Option* corruption_opt = nullptr;
};

absl::Status RunGridCommand(ExperimentConfig c, const GridFlags& f) {
  if (f.workers_opt->count()) c.workers = f.workers;
  if (f.reps_opt->count()) c.repetitions = f.reps;
  if (!f.epsilons.empty()) c.epsilons = f.epsilons;
  if (!f.methods.empty()) {
    c.methods.clear();
    for (const std::string& m : f.methods) {
      absl::StatusOr<ReferenceMethod> parsed = ParseReferenceMethod(m);
      if (!parsed.ok()) return parsed.status();
      c.methods.push_back(*parsed);
    }
  }
  if (f.corruption_opt->count()) {
    c.dataset.generate.corruption.record_corruption_fraction = f.corruption;
  }
  if (absl::Status s = c.Validate(); !s.ok()) return s;
  absl::StatusOr<ProviderData> data = LoadProviders(c);
  if (!data.ok()) return data.status();
  absl::StatusOr<std::vector<GridRow>> rows = RunGrid(c, *data);
  if (!rows.ok()) return rows.status();
  if (absl::Status s = Write(c.out_dir / "grid.csv", GridCsv(*rows)); !s.ok()) {
    return s;
  }
  Json failures = Json::array();
  for (const GridRow& r : *rows) {
    if (!r.failure.empty()) {
      failures.push_back({{"method", ReferenceMethodName(r.method)},
                          {"epsilon", r.epsilon},
                          {"p_flip", r.p_flip},
                          {"rep", r.rep},
                          {"error", r.failure}});
    }
  }
  Json manifest = {
      {"stage", "grid"},
      {"cells", rows->size()},
      {"failed_cells", failures},
      {"grid", "grid.csv"},
      {"config", Json::parse(ConfigToJson(c, -1))},
  };
  if (absl::Status s = Write(c.out_dir / "manifest.json", manifest.dump(2) + "\n");
      !s.ok()) {
    return s;
  }
  if (!failures.empty()) {
    std::cerr << failures.size() << " of " << rows->size() << " cells failed\n";
  }
  return absl::OkStatus();
}

// theory-curves -------------------------------------------------------------

struct TheoryFlags {
  int mc_trials = 0;
  size_t ell = 0;
  std::vector<double> rs;
  std::vector<double> r_fracs;
  CLI::Option* mc_opt = nullptr;
  CLI::Option* ell_opt = nullptr;
};

absl::Status RunTheory(ExperimentConfig c, const TheoryFlags& f) {
  if (f.mc_opt->count()) c.theory.mc_trials = f.mc_trials;
  if (f.ell_opt->count()) c.theory.ell = f.ell;
  if (!f.rs.empty()) c.theory.rs = f.rs;
  if (!f.r_fracs.empty()) {
    c.theory.r_fracs = f.r_fracs;
    if (f.rs.empty()) c.theory.rs.clear();
  }
  if (absl::Status s = c.Validate(); !s.ok()) return s;
  CurveSpec spec;
  spec.ell = c.theory.ell;
  spec.epsilons = c.theory.epsilons;
  if (!c.theory.rs.empty()) {
    spec.rs = c.theory.rs;
  } else {
    for (double frac : c.theory.r_fracs) {
      spec.rs.push_back(frac * static_cast<double>(c.theory.ell));
    }
  }
  spec.mc_trials = c.theory.mc_trials;
  spec.seed = c.seed;
  absl::StatusOr<std::vector<TheoryPoint>> points = EmitCurves(spec);
  if (!points.ok()) return points.status();
  return Write(c.out_dir / "theory.csv", TheoryCsv(*points));
}

}  // namespace

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kNotFound:
      return kExitConfig;
    case absl::StatusCode::kDataLoss:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kOutOfRange:
    case absl::StatusCode::kPermissionDenied:
      return kExitData;
    default:
      return kExitInvariant;
  }
}

int Run(const std::vector<std::string>& args) {
  CLI::App app{"Privacy-preserving cardinality estimation over Bloom filters",
               "ppcard"};
  app.require_subcommand(1);
  GlobalFlags g;
  app.add_option("--config", g.config_file, "JSON config file");
  g.seed_opt = app.add_option("--seed", g.seed, "Master seed");
  g.out_opt = app.add_option("--out-dir", g.out_dir, "Output directory");

  CLI::App* datagen = app.add_subcommand("datagen", "Generate synthetic provider CSVs");
  DatagenFlags dg;
  dg.entities_opt = datagen->add_option("--entities", dg.entities, "Distinct entities");
  dg.providers_opt = datagen->add_option("--providers", dg.providers, "Data providers");
  dg.corruption_opt =
      datagen->add_option("--corruption", dg.corruption, "Fraction of corrupted duplicates");
  dg.dup_min_opt = datagen->add_option("--dup-min", dg.dup_min, "Fewest duplicates per entity");
  dg.dup_max_opt = datagen->add_option("--dup-max", dg.dup_max, "Most duplicates per entity");

  CLI::App* encode = app.add_subcommand("encode", "Encode and perturb one provider's records");
  EncodeFlags ef;
  RunFlags encode_run;
  encode->add_option("--input", ef.input, "Record CSV")->required();
  encode->add_option("--schema", ef.schema, "Schema JSON")->required();
  encode->add_option("--provider", ef.provider, "Provider id (default: file stem)");
  encode->add_option("--output", ef.output, "Exchange file (default: <out-dir>/<provider>.bf)");
  encode->add_option("--truth", ef.truth, "Ground-truth sidecar path");
  encode_run.eps_opt = encode->add_option("--epsilon", encode_run.epsilon, "Privacy budget");

  CLI::App* cluster = app.add_subcommand("cluster", "Estimate from exchange files");
  ClusterFlags cf;
  RunFlags cluster_run;
  RangeFlags cluster_range;
  cluster->add_option("--input", cf.inputs, "Exchange files")->required();
  cluster->add_option("--truth", cf.truths, "Ground-truth sidecars, one per input");
  AddRunFlags(cluster, cluster_run, false);
  AddRangeFlags(cluster, cluster_range);

  CLI::App* estimate = app.add_subcommand("estimate", "Run the full provider-to-report pipeline");
  EstimateFlags est;
  RunFlags estimate_run;
  RangeFlags estimate_range;
  estimate->add_option("--records", est.records, "Provider record CSVs (default: generate)");
  estimate->add_option("--schema", est.schema, "Schema JSON for --records");
  AddRunFlags(estimate, estimate_run, true);
  AddRangeFlags(estimate, estimate_range);

  CLI::App* grid = app.add_subcommand("grid", "Run the method x epsilon x p_flip grid");
  GridFlags gf;
  RangeFlags grid_range;
  RunFlags grid_run;
  gf.workers_opt = grid->add_option("--workers", gf.workers, "Worker threads");
  gf.reps_opt = grid->add_option("--reps", gf.reps, "Repetitions per cell");
  grid->add_option("--epsilons", gf.epsilons, "Privacy budgets");
  grid->add_option("--methods", gf.methods, "Reference methods");
  gf.corruption_opt =
      grid->add_option("--corruption", gf.corruption, "Fraction of corrupted duplicates");
  grid_run.method_opt = nullptr;
  grid_run.ninit_opt = grid->add_option("--n-init", grid_run.n_init, "k-means restarts per k");
  grid->add_flag("--no-baselines", grid_run.no_baselines, "Skip silhouette");
  AddRangeFlags(grid, grid_range);

  CLI::App* theory = app.add_subcommand("theory-curves", "Emit same-cluster probability curves");
  TheoryFlags tf;
  tf.mc_opt = theory->add_option("--mc-trials", tf.mc_trials, "Monte-Carlo trials per point");
  tf.ell_opt = theory->add_option("--ell", tf.ell, "Filter length");
  theory->add_option("--r", tf.rs, "Thresholds in distance units");
  theory->add_option("--r-frac", tf.r_fracs, "Thresholds as fractions of ell");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  absl::Status status = [&]() -> absl::Status {
    absl::StatusOr<ExperimentConfig> config = LoadConfig(g);
    if (!config.ok()) return config.status();
    ExperimentConfig& c = *config;
    if (datagen->parsed()) {
      ApplyDatagen(dg, c);
      return RunDatagen(c);
    }
    if (encode->parsed()) {
      if (encode_run.eps_opt->count()) c.epsilon = encode_run.epsilon;
      return RunEncode(c, ef);
    }
    if (cluster->parsed()) {
      if (absl::Status s = ApplyRun(cluster_run, c); !s.ok()) return s;
      if (absl::Status s = ApplyRange(cluster_range, c); !s.ok()) return s;
      return RunCluster(c, cf);
    }
    if (estimate->parsed()) {
      if (absl::Status s = ApplyRun(estimate_run, c); !s.ok()) return s;
      if (absl::Status s = ApplyRange(estimate_range, c); !s.ok()) return s;
      return RunEstimate(c, est);
    }
    if (grid->parsed()) {
      if (grid_run.ninit_opt->count()) c.kmeans.n_init = grid_run.n_init;
      if (grid_run.no_baselines) c.baselines = false;
      if (absl::Status s = ApplyRange(grid_range, c); !s.ok()) return s;
      return RunGridCommand(c, gf);
    }
    return RunTheory(c, tf);
  }();
  if (!status.ok()) {
    std::cerr << "ppcard: " << status.message() << "\n";
  }
  return ExitCodeFor(status);
}

}  // namespace ppcard::cli
