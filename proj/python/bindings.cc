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


#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "pybind11/pybind11.h"
#include "pybind11/stl.h"
#include "pybind11/stl/filesystem.h"
#include "ppcard/bloom_filter.h"
#include "ppcard/cardinality.h"
#include "ppcard/config.h"
#include "ppcard/encoding.h"
#include "ppcard/ldp.h"
#include "ppcard/pipeline.h"
#include "ppcard/purity.h"
#include "ppcard/theory.h"

namespace py = pybind11;

namespace ppcard {
namespace {

void Throw(const absl::Status& s) {
  switch (s.code()) {
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kOutOfRange:
      throw py::value_error(std::string(s.message()));
    case absl::StatusCode::kNotFound:
      throw py::type_error(std::string(s.message()));
    default:
      throw std::runtime_error(std::string(s.message()));
  }
}

template <typename T>
T Unwrap(absl::StatusOr<T> v) {
  if (!v.ok()) Throw(v.status());
  return *std::move(v);
}

EncodingParams Params(int q, size_t ell, int num_hashes, uint64_t hash_seed) {
  EncodingParams p;
  p.q = q;
  p.ell = ell;
  p.num_hashes = num_hashes;
  p.hash_seed = hash_seed;
  if (absl::Status s = p.Validate(); !s.ok()) Throw(s);
  return p;
}

RecordSchema Schema(const std::optional<std::vector<std::pair<std::string, std::string>>>& attrs) {
  if (!attrs) return PersonSchema();
  std::vector<Attribute> list;
  for (const auto& [name, kind] : *attrs) {
    list.push_back({name, Unwrap(ParseAttributeKind(kind))});
  }
  return Unwrap(RecordSchema::Create(std::move(list)));
}

py::dict ReportDict(const CardinalityReport& r) {
  py::dict d;
  d["k_star"] = r.k_star;
  d["k_silhouette"] = r.k_silhouette;
  d["k_ch"] = r.k_ch;
  d["k_true"] = r.k_true;
  d["error"] = r.error;
  d["error_rate"] = r.error_rate;
  d["silhouette_error_rate"] = r.silhouette_error_rate;
  d["method"] = std::string(ReferenceMethodName(r.method));
  d["p_flip"] = r.p_flip;
  d["num_references"] = r.num_references;
  d["num_dummies"] = r.num_dummies;
  d["num_inputs"] = r.num_inputs;
  py::list sweep;
  for (const SweepEntry& e : r.sweep.entries) {
    py::dict row;
    row["k"] = e.k;
    row["purity"] = e.purity;
    row["silhouette"] = e.silhouette;
    row["ch"] = e.calinski_harabasz;
    row["inertia"] = e.inertia;
    sweep.append(row);
  }
  d["sweep"] = sweep;
  return d;
}

PYBIND11_MODULE(_core, m) {
  m.doc() = "Privacy-preserving cardinality estimation over Bloom filters";

  py::class_<BloomFilter>(m, "BloomFilter")
      .def(py::init<size_t>(), py::arg("length"))
      .def_static("from_positions",
                  [](size_t length, const std::vector<size_t>& positions) {
                    BloomFilter bf(length);
                    for (size_t p : positions) {
                      if (p >= length) throw py::index_error("position out of range");
                      bf.Set(p);
                    }
                    return bf;
                  },
                  py::arg("length"), py::arg("positions"))
      .def_static("from_hex",
                  [](const std::string& hex, size_t length) {
                    return Unwrap(BloomFilter::FromHex(hex, length));
                  },
                  py::arg("hex"), py::arg("length"))
      .def("to_hex", &BloomFilter::ToHex)
      .def("to_bits", &BloomFilter::ToBitString)
      .def("popcount", &BloomFilter::Popcount)
      .def("__len__", &BloomFilter::size)
      .def("__getitem__",
           [](const BloomFilter& bf, size_t i) {
             if (i >= bf.size()) throw py::index_error("bit out of range");
             return bf.Test(i);
           })
      .def("__eq__", [](const BloomFilter& a, const BloomFilter& b) { return a == b; })
      .def("__repr__", [](const BloomFilter& bf) {
        return "BloomFilter(" + std::to_string(bf.size()) + ", '" + bf.ToHex() + "')";
      });

  m.def("flip_probability", [](double eps) { return Unwrap(FlipProbability(eps)); },
        py::arg("epsilon"));

  m.def("qgrams", &ExtractQgrams, py::arg("value"), py::arg("q") = 2);

  m.def(
      "encode_record",
      [](const std::vector<std::string>& values,
         const std::optional<std::vector<std::pair<std::string, std::string>>>& schema, int q,
         size_t ell, int num_hashes, uint64_t hash_seed) {
        PlainRecord rec{values, std::nullopt};
        return Unwrap(EncodeRecord(rec, Schema(schema), Params(q, ell, num_hashes, hash_seed)));
      },
      py::arg("values"), py::arg("schema") = py::none(), py::arg("q") = 2,
      py::arg("ell") = 200, py::arg("num_hashes") = 20,
      py::arg("hash_seed") = EncodingParams{}.hash_seed,
      "Encodes one record. `schema` is a list of (name, kind) pairs and "
      "defaults to the five-attribute person schema.");

  m.def("dice", [](const BloomFilter& a, const BloomFilter& b) {
    return Unwrap(DiceSimilarity(a, b));
  });

  m.def("expected_fpr",
        [](size_t ell, int num_hashes, double n) {
          EncodingParams p;
          p.ell = ell;
          p.num_hashes = num_hashes;
          return ExpectedFpr(p, n);
        },
        py::arg("ell"), py::arg("num_hashes"), py::arg("n"));

  m.def(
      "perturb",
      [](const BloomFilter& bf, double eps, uint64_t seed, uint64_t record_index) {
        return Perturb(bf, Unwrap(PrivacyParams::Create(eps, seed)), record_index);
      },
      py::arg("filter"), py::arg("epsilon"), py::arg("seed"), py::arg("record_index") = 0);

  m.def("same_cluster_probability",
        [](size_t ell, double eps, double r) {
          return Unwrap(SameClusterProbability(ell, eps, r));
        },
        py::arg("ell"), py::arg("epsilon"), py::arg("r"));
  m.def("exact_same_cluster_probability",
        [](size_t ell, double eps, double r) {
          return Unwrap(ExactSameClusterProbability(ell, eps, r));
        },
        py::arg("ell"), py::arg("epsilon"), py::arg("r"));
  m.def("monte_carlo_same_cluster",
        [](size_t ell, double eps, double r, int trials, uint64_t seed) {
          return Unwrap(MonteCarloSameCluster(ell, eps, r, trials, seed));
        },
        py::arg("ell"), py::arg("epsilon"), py::arg("r"), py::arg("trials"),
        py::arg("seed") = 1);

  m.def(
      "purity",
      [](const std::vector<std::string>& roles, const std::vector<int>& reference_ids,
         const std::vector<int>& labels, int k) {
        if (roles.size() != reference_ids.size()) {
          throw py::value_error("roles and reference_ids differ in length");
        }
        std::vector<PoolPoint> pts;
        int refs = 0;
        for (size_t i = 0; i < roles.size(); ++i) {
          PointRole role;
          if (roles[i] == "input") {
            role = PointRole::kInput;
          } else if (roles[i] == "reference") {
            role = PointRole::kReference;
            ++refs;
          } else if (roles[i] == "dummy") {
            role = PointRole::kDummy;
          } else {
            throw py::value_error("role must be input, reference or dummy");
          }
          pts.push_back({role, reference_ids[i]});
        }
        const PurityScores s = Unwrap(Purity(pts, refs, labels, k));
        return std::make_pair(s.per_reference, s.total);
      },
      py::arg("roles"), py::arg("reference_ids"), py::arg("labels"), py::arg("k"),
      "Returns (per_reference, total).");

  m.def(
      "estimate_cardinality",
      [](const std::vector<std::vector<BloomFilter>>& providers, const std::string& method,
         double p_flip, int k_min, int k_max, uint64_t seed, std::optional<int> k_true,
         bool baselines, double pick_ratio, double dummy_ratio) {
        std::vector<EncodedDataset> inputs;
        for (size_t i = 0; i < providers.size(); ++i) {
          if (providers[i].empty()) throw py::value_error("empty provider");
          inputs.push_back({"provider-" + std::to_string(i + 1), providers[i][0].size(), 0,
                            providers[i], std::nullopt});
        }
        ReferenceConfig rc;
        rc.method = Unwrap(ParseReferenceMethod(method));
        rc.p_flip = p_flip;
        rc.pick_ratio = pick_ratio;
        rc.dummy_ratio = dummy_ratio;
        rc.seed = seed;
        SweepSettings settings;
        settings.seed = seed;
        settings.compute_baselines = baselines;
        CardinalityReport r;
        {
          py::gil_scoped_release release;
          r = Unwrap(EstimateCardinality(inputs, rc, KRange{k_min, k_max, 1}, settings, k_true));
        }
        return ReportDict(r);
      },
      py::arg("providers"), py::arg("method") = "B", py::arg("p_flip") = 0.1,
      py::arg("k_min"), py::arg("k_max"), py::arg("seed") = 1, py::arg("k_true") = py::none(),
      py::arg("baselines") = true, py::arg("pick_ratio") = 0.1, py::arg("dummy_ratio") = 0.1);

  m.def(
      "generate_providers",
      [](int entities, int providers, double corruption, uint64_t seed) {
        GenerateSpec spec;
        spec.entities = entities;
        spec.providers = providers;
        spec.corruption.record_corruption_fraction = corruption;
        const ProviderData data = Unwrap(GenerateProviders(spec, seed));
        py::dict out;
        for (const Provider& p : data.providers) {
          py::list rows;
          for (const PlainRecord& r : p.records) {
            rows.append(py::make_tuple(r.values, r.entity_id));
          }
          out[py::str(p.id)] = rows;
        }
        return out;
      },
      py::arg("entities") = 171, py::arg("providers") = 2, py::arg("corruption") = 0.0,
      py::arg("seed") = 1,
      "Returns {provider_id: [(values, entity_id), ...]} over the person schema.");

  m.def(
      "run_pipeline",
      [](const std::string& config_json) {
        const ExperimentConfig c = Unwrap(ParseConfigJson(config_json));
        if (absl::Status s = c.Validate(); !s.ok()) Throw(s);
        PipelineOutput out;
        {
          py::gil_scoped_release release;
          out = Unwrap(RunPipeline(c));
        }
        py::dict d = ReportDict(out.report);
        d["report_file"] = out.report_file;
        d["sweep_file"] = out.sweep_file;
        d["linkage_inputs"] = out.linkage_inputs;
        return d;
      },
      py::arg("config_json"),
      "Runs generate/ingest, encode, perturb and linkage with a JSON config.");
}

}  // namespace
}  // namespace ppcard
