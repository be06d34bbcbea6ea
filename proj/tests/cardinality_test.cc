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


#include "ppcard/cardinality.h"

#include <vector>

#include "gtest/gtest.h"
#include "ppcard/random.h"
#include "tests/test_util.h"

namespace ppcard {
namespace {

// `entities` disjoint 20-bit blocks in a 200-bit filter, each record
// repeated `copies` times, dealt across two providers.
std::vector<EncodedDataset> Planted(int entities, int copies) {
  std::vector<EncodedDataset> out = {{"p1", 200, 3.0, {}, std::vector<std::string>{}},
                                     {"p2", 200, 3.0, {}, std::vector<std::string>{}}};
  int i = 0;
  for (int e = 0; e < entities; ++e) {
    BloomFilter bf(200);
    for (int b = e * 20; b < (e + 1) * 20; ++b) bf.Set(b);
    for (int c = 0; c < copies; ++c, ++i) {
      out[i % 2].filters.push_back(bf);
      out[i % 2].ground_truth->push_back("e" + std::to_string(e));
    }
  }
  return out;
}

TEST(CardinalityTest, ArgmaxFirstTakesSmallestIndexOnTies) {
  EXPECT_EQ(ArgmaxFirst(std::vector<double>{1, 3, 2, 3}), 1u);
  EXPECT_EQ(ArgmaxFirst(std::vector<double>{5}), 0u);
  EXPECT_EQ(ArgmaxFirst(std::vector<double>{0, 0, 0}), 0u);
}

TEST(CardinalityTest, Ranges) {
  const KRange d = DefaultKRange(400, 171);
  EXPECT_EQ(d.first, 2);
  EXPECT_EQ(d.last, 342);
  EXPECT_EQ(DefaultKRange(100, 171).last, 100);
  EXPECT_EQ(DefaultKRange(50, std::nullopt).last, 50);
  EXPECT_EQ(FullKRange(30).first, 1);
  EXPECT_EQ(FullKRange(30).last, 30);
}

TEST(CardinalityTest, ErrorRate) {
  EXPECT_DOUBLE_EQ(ErrorRate(180, 171), 9.0 / 171);
  EXPECT_DOUBLE_EQ(ErrorRate(160, 171), 11.0 / 171);
  EXPECT_EQ(ErrorRate(5, 0), 0.0);
}

TEST(CardinalityTest, PlantedEntitiesGiveExactCount) {
  const auto in = Planted(10, 3);
  ReferenceConfig cfg;
  cfg.method = ReferenceMethod::kSample;
  cfg.pick_ratio = 1.0;
  cfg.dummy_ratio = 1.0;
  cfg.p_flip = 0.02;
  SweepSettings settings;
  auto rep = EstimateCardinality(in, cfg, KRange{2, 25, 1}, settings, 10);
  PPCARD_ASSERT_OK(rep);
  EXPECT_EQ(rep->k_star, 10);
  EXPECT_EQ(rep->error, 0);
  EXPECT_EQ(rep->num_references, 30);
  EXPECT_EQ(rep->num_dummies, 30);
  EXPECT_EQ(rep->num_inputs, 30u);
  ASSERT_EQ(rep->sweep.entries.size(), 24u);
  for (const SweepEntry& e : rep->sweep.entries) {
    double sum = 0;
    for (double p : e.per_reference) {
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
      sum += p;
    }
    EXPECT_NEAR(sum, e.purity, 1e-9);
    EXPECT_TRUE(e.silhouette.has_value());
    EXPECT_TRUE(e.calinski_harabasz.has_value());
  }
}

TEST(CardinalityTest, SingletonRange) {
  const auto in = Planted(4, 2);
  ReferenceConfig cfg;
  cfg.method = ReferenceMethod::kSample;
  SweepSettings settings;
  settings.compute_baselines = false;
  auto rep = EstimateCardinality(in, cfg, KRange{5, 5, 1}, settings);
  PPCARD_ASSERT_OK(rep);
  EXPECT_EQ(rep->k_star, 5);
  EXPECT_FALSE(rep->k_true.has_value());
  EXPECT_FALSE(rep->k_silhouette.has_value());
}

TEST(CardinalityTest, Deterministic) {
  const auto in = Planted(6, 2);
  ReferenceConfig cfg;
  SweepSettings settings;
  auto a = EstimateCardinality(in, cfg, KRange{2, 12, 1}, settings);
  auto b = EstimateCardinality(in, cfg, KRange{2, 12, 1}, settings);
  PPCARD_ASSERT_OK(a);
  PPCARD_ASSERT_OK(b);
  for (size_t i = 0; i < a->sweep.entries.size(); ++i) {
    EXPECT_EQ(a->sweep.entries[i].purity, b->sweep.entries[i].purity);
  }
}

TEST(CardinalityTest, RejectsRangeBeyondPool) {
  const auto in = Planted(2, 2);
  ReferenceConfig cfg;
  EXPECT_FALSE(EstimateCardinality(in, cfg, KRange{2, 100, 1}, {}).ok());
  EXPECT_FALSE(EstimateCardinality(in, cfg, KRange{0, 3, 1}, {}).ok());
}

}  // namespace
}  // namespace ppcard
