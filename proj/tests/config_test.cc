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

#include "gtest/gtest.h"
#include "tests/test_util.h"

namespace ppcard {
namespace {

TEST(ConfigTest, DefaultsValidate) {
  ExperimentConfig c;
  PPCARD_EXPECT_OK(c.Validate());
  EXPECT_EQ(c.dataset.generate.entities, 171);
  EXPECT_EQ(c.encoding.ell, 200u);
  EXPECT_EQ(c.encoding.num_hashes, 20);
  EXPECT_EQ(c.p_flip_grid.Values().size(), 21u);
  EXPECT_EQ(c.p_flip_grid.Values()[2], 0.12);
  EXPECT_EQ(c.p_flip_grid.Values().back(), 0.30);
}

TEST(ConfigTest, ParsesKeys) {
  auto c = ParseConfigJson(R"({
    "dataset": {"entities": 40, "duplicates": {"min": 1, "max": 2},
                "providers": 3, "corruption": {"fraction": 0.2}},
    "epsilon": 4, "method": "A", "p_flip": 0.2,
    "epsilons": [1, 2], "methods": ["B"],
    "p_flip_grid": {"start": 0.1, "stop": 0.2, "step": 0.05},
    "k_range": {"first": 10, "last": 50, "stride": 5},
    "kmeans": {"n_init": 3}, "baselines": false,
    "seed": 99, "out_dir": "x/y"
  })");
  PPCARD_ASSERT_OK(c);
  EXPECT_EQ(c->dataset.generate.entities, 40);
  EXPECT_EQ(c->dataset.generate.duplicates.max_duplicates, 2);
  EXPECT_EQ(c->dataset.generate.providers, 3);
  EXPECT_EQ(c->dataset.generate.corruption.record_corruption_fraction, 0.2);
  EXPECT_EQ(c->epsilon, 4);
  EXPECT_EQ(c->method, ReferenceMethod::kRandom);
  EXPECT_EQ(c->methods, std::vector<ReferenceMethod>{ReferenceMethod::kSample});
  EXPECT_EQ(c->p_flip_grid.Values(), (std::vector<double>{0.1, 0.15, 0.2}));
  ASSERT_TRUE(c->k_range.has_value());
  EXPECT_EQ(c->k_range->stride, 5);
  EXPECT_EQ(c->kmeans.n_init, 3);
  EXPECT_FALSE(c->baselines);
  EXPECT_EQ(c->seed, 99u);
  EXPECT_EQ(c->out_dir, "x/y");
}

TEST(ConfigTest, RoundTrip) {
  ExperimentConfig c;
  c.epsilon = 2.5;
  c.k_range = KRange{3, 9, 2};
  c.seed = 17;
  auto back = ParseConfigJson(ConfigToJson(c));
  PPCARD_ASSERT_OK(back);
  EXPECT_EQ(ConfigToJson(*back), ConfigToJson(c));
}

TEST(ConfigTest, RejectsUnknownKeysAndBadTypes) {
  for (const char* text : {
           R"({"epsilno": 3})",
           R"({"dataset": {"entites": 3}})",
           R"({"epsilon": "three"})",
           R"({"method": "C"})",
           R"([1])",
           R"({)",
       }) {
    auto c = ParseConfigJson(text);
    EXPECT_EQ(c.status().code(), absl::StatusCode::kInvalidArgument) << text;
  }
}

// Values are range-checked by Validate() once flag overrides are applied.
TEST(ConfigTest, ValidateRejectsBadValues) {
  for (const char* text : {
           R"({"epsilon": -1})",
           R"({"epsilons": [1, 0]})",
           R"({"p_flip": 0.7})",
           R"({"k_range": {"first": 5, "last": 2}})",
           R"({"workers": 0})",
           R"({"kmeans": {"n_init": 0}})",
           R"({"dataset": {"corruption": {"fraction": 2}}})",
       }) {
    auto c = ParseConfigJson(text);
    PPCARD_ASSERT_OK(c);
    EXPECT_EQ(c->Validate().code(), absl::StatusCode::kInvalidArgument) << text;
  }
}

TEST(ConfigTest, ResolveKRange) {
  ExperimentConfig c;
  KRange r = c.ResolveKRange(400, 342);
  EXPECT_EQ(r.first, 2);
  EXPECT_EQ(r.last, 400);
  c.expected_upper = 171;
  EXPECT_EQ(c.ResolveKRange(400, 342).last, 342);
  c.full_sweep = true;
  EXPECT_EQ(c.ResolveKRange(400, 342).first, 1);
  c.k_range = KRange{120, 230, 1};
  c.full_sweep = false;
  EXPECT_EQ(c.ResolveKRange(400, 342).first, 120);
}

TEST(ConfigTest, MissingFile) {
  auto c = ReadConfigFile(testing::TempDir("config_test") / "nope.json");
  EXPECT_EQ(c.status().code(), absl::StatusCode::kInvalidArgument);
}

}  // namespace
}  // namespace ppcard
