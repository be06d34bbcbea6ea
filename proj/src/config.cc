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


#include "ppcard/config.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "ppcard/io.h"
#include "ppcard/ldp.h"

namespace ppcard {
namespace {

using Json = nlohmann::ordered_json;

absl::Status CheckKeys(const Json& obj, std::string_view where,
                       std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) {
    return absl::InvalidArgumentError(
        absl::StrCat("'", std::string(where), "' must be an object"));
  }
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "unknown key '", key, "' in ", std::string(where)));
    }
  }
  return absl::OkStatus();
}

// Copies obj[key] into `out` when present; type mismatches are errors.
template <typename T>
absl::Status Get(const Json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return absl::OkStatus();
  try {
    out = obj.at(key).get<T>();
  } catch (const Json::exception&) {
    return absl::InvalidArgumentError(
        absl::StrCat("'", key, "' has the wrong type"));
  }
  return absl::OkStatus();
}

absl::Status GetMethod(const Json& obj, const char* key, ReferenceMethod& out) {
  std::string name;
  if (!obj.contains(key)) return absl::OkStatus();
  if (absl::Status s = Get(obj, key, name); !s.ok()) return s;
  absl::StatusOr<ReferenceMethod> m = ParseReferenceMethod(name);
  if (!m.ok()) return m.status();
  out = *m;
  return absl::OkStatus();
}

#define PPCARD_RETURN_IF_ERROR(expr)       \
  do {                                     \
    if (absl::Status _s = (expr); !_s.ok()) \
      return _s;                           \
  } while (0)

absl::Status ApplyDataset(const Json& j, DatasetSpec& d) {
  PPCARD_RETURN_IF_ERROR(CheckKeys(j, "dataset",
                                   {"entities", "duplicates", "providers",
                                    "corruption", "records", "schema"}));
  GenerateSpec& g = d.generate;
  PPCARD_RETURN_IF_ERROR(Get(j, "entities", g.entities));
  PPCARD_RETURN_IF_ERROR(Get(j, "providers", g.providers));
  if (j.contains("duplicates")) {
    const Json& dup = j["duplicates"];
    PPCARD_RETURN_IF_ERROR(CheckKeys(dup, "dataset.duplicates", {"min", "max"}));
    PPCARD_RETURN_IF_ERROR(Get(dup, "min", g.duplicates.min_duplicates));
    PPCARD_RETURN_IF_ERROR(Get(dup, "max", g.duplicates.max_duplicates));
  }
  if (j.contains("corruption")) {
    const Json& c = j["corruption"];
    PPCARD_RETURN_IF_ERROR(CheckKeys(
        c, "dataset.corruption", {"fraction", "min_edits", "max_edits", "edit_ops"}));
    PPCARD_RETURN_IF_ERROR(Get(c, "fraction", g.corruption.record_corruption_fraction));
    PPCARD_RETURN_IF_ERROR(Get(c, "min_edits", g.corruption.min_edits));
    PPCARD_RETURN_IF_ERROR(Get(c, "max_edits", g.corruption.max_edits));
    if (c.contains("edit_ops")) {
      std::vector<std::string> names;
      PPCARD_RETURN_IF_ERROR(Get(c, "edit_ops", names));
      g.corruption.edit_ops.clear();
      for (const std::string& n : names) {
        absl::StatusOr<EditOp> op = ParseEditOp(n);
        if (!op.ok()) return op.status();
        g.corruption.edit_ops.push_back(*op);
      }
    }
  }
  if (j.contains("records")) {
    std::vector<std::string> files;
    PPCARD_RETURN_IF_ERROR(Get(j, "records", files));
    d.record_files.assign(files.begin(), files.end());
  }
  if (j.contains("schema")) {
    std::string schema;
    PPCARD_RETURN_IF_ERROR(Get(j, "schema", schema));
    d.schema_file = schema;
  }
  return absl::OkStatus();
}

absl::Status ApplyEncoding(const Json& j, EncodingParams& e) {
  PPCARD_RETURN_IF_ERROR(CheckKeys(j, "encoding",
                                   {"q", "ell", "num_hashes", "hash_seed",
                                    "numeric_interval", "numeric_step"}));
  PPCARD_RETURN_IF_ERROR(Get(j, "q", e.q));
  PPCARD_RETURN_IF_ERROR(Get(j, "ell", e.ell));
  PPCARD_RETURN_IF_ERROR(Get(j, "num_hashes", e.num_hashes));
  PPCARD_RETURN_IF_ERROR(Get(j, "hash_seed", e.hash_seed));
  PPCARD_RETURN_IF_ERROR(Get(j, "numeric_interval", e.numeric_interval));
  PPCARD_RETURN_IF_ERROR(Get(j, "numeric_step", e.numeric_step));
  return absl::OkStatus();
}

absl::Status ApplyConfig(const Json& j, ExperimentConfig& c) {
  PPCARD_RETURN_IF_ERROR(CheckKeys(
      j, "config",
      {"dataset", "encoding", "epsilon", "method", "p_flip", "epsilons",
       "methods", "p_flip_grid", "repetitions", "workers", "references",
       "k_range", "expected_upper", "full_sweep", "kmeans", "baselines",
       "theory", "seed", "out_dir"}));
  if (j.contains("dataset")) PPCARD_RETURN_IF_ERROR(ApplyDataset(j["dataset"], c.dataset));
  if (j.contains("encoding")) PPCARD_RETURN_IF_ERROR(ApplyEncoding(j["encoding"], c.encoding));
  PPCARD_RETURN_IF_ERROR(Get(j, "epsilon", c.epsilon));
  PPCARD_RETURN_IF_ERROR(GetMethod(j, "method", c.method));
  PPCARD_RETURN_IF_ERROR(Get(j, "p_flip", c.p_flip));
  PPCARD_RETURN_IF_ERROR(Get(j, "epsilons", c.epsilons));
  if (j.contains("methods")) {
    std::vector<std::string> names;
    PPCARD_RETURN_IF_ERROR(Get(j, "methods", names));
    c.methods.clear();
    for (const std::string& n : names) {
      absl::StatusOr<ReferenceMethod> m = ParseReferenceMethod(n);
      if (!m.ok()) return m.status();
      c.methods.push_back(*m);
    }
  }
  if (j.contains("p_flip_grid")) {
    const Json& g = j["p_flip_grid"];
    PPCARD_RETURN_IF_ERROR(CheckKeys(g, "p_flip_grid", {"start", "stop", "step"}));
    PPCARD_RETURN_IF_ERROR(Get(g, "start", c.p_flip_grid.start));
    PPCARD_RETURN_IF_ERROR(Get(g, "stop", c.p_flip_grid.stop));
    PPCARD_RETURN_IF_ERROR(Get(g, "step", c.p_flip_grid.step));
  }
  PPCARD_RETURN_IF_ERROR(Get(j, "repetitions", c.repetitions));
  PPCARD_RETURN_IF_ERROR(Get(j, "workers", c.workers));
  if (j.contains("references")) {
    const Json& r = j["references"];
    PPCARD_RETURN_IF_ERROR(CheckKeys(
        r, "references", {"pick_ratio", "dummy_ratio", "exclude_sampled_originals"}));
    PPCARD_RETURN_IF_ERROR(Get(r, "pick_ratio", c.pick_ratio));
    PPCARD_RETURN_IF_ERROR(Get(r, "dummy_ratio", c.dummy_ratio));
    PPCARD_RETURN_IF_ERROR(
        Get(r, "exclude_sampled_originals", c.exclude_sampled_originals));
  }
  if (j.contains("k_range")) {
    const Json& k = j["k_range"];
    if (k.is_null()) {
      c.k_range.reset();
    } else {
      PPCARD_RETURN_IF_ERROR(CheckKeys(k, "k_range", {"first", "last", "stride"}));
      KRange range = c.k_range.value_or(KRange{2, 2, 1});
      PPCARD_RETURN_IF_ERROR(Get(k, "first", range.first));
      PPCARD_RETURN_IF_ERROR(Get(k, "last", range.last));
      PPCARD_RETURN_IF_ERROR(Get(k, "stride", range.stride));
      c.k_range = range;
    }
  }
  if (j.contains("expected_upper")) {
    if (j["expected_upper"].is_null()) {
      c.expected_upper.reset();
    } else {
      int upper = 0;
      PPCARD_RETURN_IF_ERROR(Get(j, "expected_upper", upper));
      c.expected_upper = upper;
    }
  }
  PPCARD_RETURN_IF_ERROR(Get(j, "full_sweep", c.full_sweep));
  if (j.contains("kmeans")) {
    const Json& k = j["kmeans"];
    PPCARD_RETURN_IF_ERROR(CheckKeys(k, "kmeans", {"max_iter", "tol", "n_init"}));
    PPCARD_RETURN_IF_ERROR(Get(k, "max_iter", c.kmeans.max_iter));
    PPCARD_RETURN_IF_ERROR(Get(k, "tol", c.kmeans.tol));
    PPCARD_RETURN_IF_ERROR(Get(k, "n_init", c.kmeans.n_init));
  }
  PPCARD_RETURN_IF_ERROR(Get(j, "baselines", c.baselines));
  if (j.contains("theory")) {
    const Json& t = j["theory"];
    PPCARD_RETURN_IF_ERROR(
        CheckKeys(t, "theory", {"ell", "epsilons", "r_frac", "r", "mc_trials"}));
    PPCARD_RETURN_IF_ERROR(Get(t, "ell", c.theory.ell));
    PPCARD_RETURN_IF_ERROR(Get(t, "epsilons", c.theory.epsilons));
    PPCARD_RETURN_IF_ERROR(Get(t, "r_frac", c.theory.r_fracs));
    PPCARD_RETURN_IF_ERROR(Get(t, "r", c.theory.rs));
    PPCARD_RETURN_IF_ERROR(Get(t, "mc_trials", c.theory.mc_trials));
  }
  PPCARD_RETURN_IF_ERROR(Get(j, "seed", c.seed));
  if (j.contains("out_dir")) {
    std::string dir;
    PPCARD_RETURN_IF_ERROR(Get(j, "out_dir", dir));
    c.out_dir = dir;
  }
  return absl::OkStatus();
}

absl::Status CheckEpsilon(double eps) {
  absl::StatusOr<double> eta = FlipProbability(eps);
  return eta.ok() ? absl::OkStatus() : eta.status();
}

absl::Status CheckPFlip(double p) {
  if (!(p >= 0 && p <= 0.5)) {
    return absl::InvalidArgumentError(
        absl::StrCat("p_flip ", p, " outside [0, 0.5]"));
  }
  return absl::OkStatus();
}

}  // namespace

std::vector<double> ValueGrid::Values() const {
  std::vector<double> out;
  if (!(step > 0) || !(stop >= start)) return out;
  const auto count =
      static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  out.reserve(count);
  for (long i = 0; i < count; ++i) {
    const double v = start + static_cast<double>(i) * step;
    out.push_back(std::round(v * 1e12) / 1e12);
  }
  return out;
}

absl::Status ExperimentConfig::Validate() const {
  const GenerateSpec& g = dataset.generate;
  if (dataset.ingest()) {
    if (!dataset.schema_file) {
      return absl::InvalidArgumentError("record files need a schema file");
    }
  } else {
    if (g.entities < 1) return absl::InvalidArgumentError("entities must be >= 1");
    if (g.providers < 1) return absl::InvalidArgumentError("providers must be >= 1");
    if (g.duplicates.min_duplicates < 0 ||
        g.duplicates.max_duplicates < g.duplicates.min_duplicates) {
      return absl::InvalidArgumentError("need 0 <= duplicates.min <= duplicates.max");
    }
    PPCARD_RETURN_IF_ERROR(g.corruption.Validate());
  }
  PPCARD_RETURN_IF_ERROR(encoding.Validate());
  PPCARD_RETURN_IF_ERROR(CheckEpsilon(epsilon));
  PPCARD_RETURN_IF_ERROR(CheckPFlip(p_flip));
  if (epsilons.empty()) return absl::InvalidArgumentError("epsilons is empty");
  for (double e : epsilons) PPCARD_RETURN_IF_ERROR(CheckEpsilon(e));
  if (methods.empty()) return absl::InvalidArgumentError("methods is empty");
  if (!(p_flip_grid.step > 0)) {
    return absl::InvalidArgumentError("p_flip_grid.step must be > 0");
  }
  if (!(p_flip_grid.stop >= p_flip_grid.start)) {
    return absl::InvalidArgumentError("p_flip_grid.stop must be >= start");
  }
  for (double p : p_flip_grid.Values()) PPCARD_RETURN_IF_ERROR(CheckPFlip(p));
  if (repetitions < 1) return absl::InvalidArgumentError("repetitions must be >= 1");
  if (workers < 1) return absl::InvalidArgumentError("workers must be >= 1");
  ReferenceConfig probe = References(method, p_flip, 0);
  PPCARD_RETURN_IF_ERROR(probe.Validate());
  if (k_range) {
    if (k_range->first < 1 || k_range->last < k_range->first ||
        k_range->stride < 1) {
      return absl::InvalidArgumentError(
          "k_range needs 1 <= first <= last and stride >= 1");
    }
  }
  if (expected_upper && *expected_upper < 1) {
    return absl::InvalidArgumentError("expected_upper must be >= 1");
  }
  if (kmeans.max_iter < 1 || kmeans.n_init < 1 || !(kmeans.tol >= 0)) {
    return absl::InvalidArgumentError(
        "kmeans needs max_iter >= 1, n_init >= 1, tol >= 0");
  }
  if (theory.ell < 1) return absl::InvalidArgumentError("theory.ell must be >= 1");
  if (theory.epsilons.empty()) {
    return absl::InvalidArgumentError("theory.epsilons is empty");
  }
  for (double e : theory.epsilons) PPCARD_RETURN_IF_ERROR(CheckEpsilon(e));
  if (theory.rs.empty() && theory.r_fracs.empty()) {
    return absl::InvalidArgumentError("theory needs r or r_frac values");
  }
  for (double r : theory.rs) {
    if (!(r >= 0)) return absl::InvalidArgumentError("theory r must be >= 0");
  }
  for (double r : theory.r_fracs) {
    if (!(r >= 0)) return absl::InvalidArgumentError("theory r_frac must be >= 0");
  }
  if (theory.mc_trials < 0) {
    return absl::InvalidArgumentError("theory.mc_trials must be >= 0");
  }
  return absl::OkStatus();
}

KRange ExperimentConfig::ResolveKRange(size_t pool_size,
                                       size_t num_inputs) const {
  if (full_sweep) return FullKRange(num_inputs);
  if (k_range) return *k_range;
  return DefaultKRange(pool_size, expected_upper);
}

ReferenceConfig ExperimentConfig::References(ReferenceMethod m, double flip,
                                             uint64_t ref_seed) const {
  ReferenceConfig rc;
  rc.method = m;
  rc.pick_ratio = pick_ratio;
  rc.dummy_ratio = dummy_ratio;
  rc.p_flip = flip;
  rc.seed = ref_seed;
  rc.exclude_sampled_originals = exclude_sampled_originals;
  return rc;
}

absl::StatusOr<ExperimentConfig> ParseConfigJson(std::string_view text,
                                                 ExperimentConfig base) {
  Json j = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return absl::InvalidArgumentError("config is not valid JSON");
  PPCARD_RETURN_IF_ERROR(ApplyConfig(j, base));
  return base;
}

absl::StatusOr<ExperimentConfig> ReadConfigFile(
    const std::filesystem::path& path, ExperimentConfig base) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return absl::InvalidArgumentError(text.status().message());
  absl::StatusOr<ExperimentConfig> config = ParseConfigJson(*text, std::move(base));
  if (!config.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path.string(), ": ", config.status().message()));
  }
  return config;
}

std::string ConfigToJson(const ExperimentConfig& c, int indent) {
  const GenerateSpec& g = c.dataset.generate;
  Json ops = Json::array();
  for (EditOp op : g.corruption.edit_ops) ops.push_back(EditOpName(op));
  Json dataset = {
      {"entities", g.entities},
      {"duplicates",
       {{"min", g.duplicates.min_duplicates}, {"max", g.duplicates.max_duplicates}}},
      {"providers", g.providers},
      {"corruption",
       {{"fraction", g.corruption.record_corruption_fraction},
        {"min_edits", g.corruption.min_edits},
        {"max_edits", g.corruption.max_edits},
        {"edit_ops", ops}}},
  };
  if (c.dataset.ingest()) {
    Json files = Json::array();
    for (const auto& f : c.dataset.record_files) files.push_back(f.string());
    dataset["records"] = files;
  }
  if (c.dataset.schema_file) dataset["schema"] = c.dataset.schema_file->string();

  Json methods = Json::array();
  for (ReferenceMethod m : c.methods) methods.push_back(ReferenceMethodName(m));
  Json j = {
      {"dataset", dataset},
      {"encoding",
       {{"q", c.encoding.q},
        {"ell", c.encoding.ell},
        {"num_hashes", c.encoding.num_hashes},
        {"hash_seed", c.encoding.hash_seed},
        {"numeric_interval", c.encoding.numeric_interval},
        {"numeric_step", c.encoding.numeric_step}}},
      {"epsilon", c.epsilon},
      {"method", ReferenceMethodName(c.method)},
      {"p_flip", c.p_flip},
      {"epsilons", c.epsilons},
      {"methods", methods},
      {"p_flip_grid",
       {{"start", c.p_flip_grid.start},
        {"stop", c.p_flip_grid.stop},
        {"step", c.p_flip_grid.step}}},
      {"repetitions", c.repetitions},
      {"workers", c.workers},
      {"references",
       {{"pick_ratio", c.pick_ratio},
        {"dummy_ratio", c.dummy_ratio},
        {"exclude_sampled_originals", c.exclude_sampled_originals}}},
      {"k_range", c.k_range ? Json{{"first", c.k_range->first},
                                   {"last", c.k_range->last},
                                   {"stride", c.k_range->stride}}
                            : Json(nullptr)},
      {"expected_upper", c.expected_upper ? Json(*c.expected_upper) : Json(nullptr)},
      {"full_sweep", c.full_sweep},
      {"kmeans",
       {{"max_iter", c.kmeans.max_iter},
        {"tol", c.kmeans.tol},
        {"n_init", c.kmeans.n_init}}},
      {"baselines", c.baselines},
      {"theory",
       {{"ell", c.theory.ell},
        {"epsilons", c.theory.epsilons},
        {"r_frac", c.theory.r_fracs},
        {"r", c.theory.rs},
        {"mc_trials", c.theory.mc_trials}}},
      {"seed", c.seed},
      {"out_dir", c.out_dir.string()},
  };
  return j.dump(indent);
}

}  // namespace ppcard
