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


#include "ppcard/purity.h"

#include <vector>

#include "gtest/gtest.h"
#include "ppcard/random.h"
#include "tests/test_util.h"

namespace ppcard {
namespace {

// A pool with one reference (id 0) at index 0, its dummies next, then inputs.
std::vector<PoolPoint> OneReference(int dummies, int inputs) {
  std::vector<PoolPoint> pts = {{PointRole::kReference, 0}};
  for (int i = 0; i < dummies; ++i) pts.push_back({PointRole::kDummy, 0});
  for (int i = 0; i < inputs; ++i) pts.push_back({PointRole::kInput, -1});
  return pts;
}

TEST(PurityTest, PerfectCluster) {
  const auto pts = OneReference(5, 3);
  const std::vector<int> labels = {0, 0, 0, 0, 0, 0, 1, 1, 1};
  auto s = Purity(pts, 1, labels, 2);
  PPCARD_ASSERT_OK(s);
  EXPECT_DOUBLE_EQ(s->per_reference[0], 1.0);
  EXPECT_DOUBLE_EQ(s->total, 1.0);
}

TEST(PurityTest, ThreeOwnDummiesTwoForeign) {
  const auto pts = OneReference(5, 2);
  // ref, 3 dummies and 2 inputs in cluster 0; 2 dummies elsewhere.
  const std::vector<int> labels = {0, 0, 0, 0, 1, 1, 0, 0};
  auto s = Purity(pts, 1, labels, 2);
  PPCARD_ASSERT_OK(s);
  EXPECT_NEAR(s->per_reference[0], 3.0 / 7.0, 1e-12);
}

TEST(PurityTest, ReferenceAlone) {
  const auto pts = OneReference(5, 0);
  const std::vector<int> labels = {0, 1, 1, 1, 1, 1};
  auto s = Purity(pts, 1, labels, 2);
  PPCARD_ASSERT_OK(s);
  EXPECT_DOUBLE_EQ(s->per_reference[0], 0.0);
}

TEST(PurityTest, RejectsBadInput) {
  const auto pts = OneReference(1, 1);
  EXPECT_FALSE(Purity(pts, 1, std::vector<int>{0, 0}, 1).ok());
  EXPECT_FALSE(Purity(pts, 1, std::vector<int>{0, 0, 2}, 2).ok());
  EXPECT_FALSE(Purity(pts, 1, std::vector<int>{0, -1, 0}, 2).ok());
  std::vector<PoolPoint> no_dummy = {{PointRole::kReference, 0},
                                     {PointRole::kInput, -1}};
  EXPECT_FALSE(Purity(no_dummy, 1, std::vector<int>{0, 0}, 1).ok());
  std::vector<PoolPoint> missing = {{PointRole::kDummy, 0}};
  EXPECT_FALSE(Purity(missing, 1, std::vector<int>{0}, 1).ok());
}

struct Instance {
  std::vector<PoolPoint> points;
  int num_refs = 0;
  std::vector<int> labels;
  int k = 0;
};

Instance RandomInstance(Rng& rng) {
  Instance in;
  in.num_refs = 1 + static_cast<int>(UniformIndex(rng, 5));
  for (int r = 0; r < in.num_refs; ++r) {
    in.points.push_back({PointRole::kReference, r});
    const int d = 1 + static_cast<int>(UniformIndex(rng, 4));
    for (int j = 0; j < d; ++j) in.points.push_back({PointRole::kDummy, r});
  }
  while (in.points.size() < 50 && UniformIndex(rng, 4) != 0) {
    in.points.push_back({PointRole::kInput, -1});
  }
  Shuffle(in.points, rng);
  in.k = 1 + static_cast<int>(UniformIndex(rng, in.points.size()));
  for (size_t i = 0; i < in.points.size(); ++i) {
    in.labels.push_back(static_cast<int>(UniformIndex(rng, in.k)));
  }
  return in;
}

// Independent recount straight from the definition.
double BruteForce(const Instance& in, int ref) {
  int ref_label = -1, n_dum = 0;
  for (size_t i = 0; i < in.points.size(); ++i) {
    if (in.points[i].role == PointRole::kReference && in.points[i].reference_id == ref) {
      ref_label = in.labels[i];
    }
  }
  int n_c = 0, n_dum_c = 0;
  for (size_t i = 0; i < in.points.size(); ++i) {
    const bool own = in.points[i].role == PointRole::kDummy &&
                     in.points[i].reference_id == ref;
    n_dum += own;
    if (in.labels[i] == ref_label) {
      ++n_c;
      n_dum_c += own;
    }
  }
  return static_cast<double>(n_dum_c) / (n_dum + n_c - 1 - n_dum_c);
}

TEST(PurityTest, MatchesBruteForceOnRandomInstances) {
  Rng rng(2024);
  for (int t = 0; t < 500; ++t) {
    const Instance in = RandomInstance(rng);
    auto s = Purity(in.points, in.num_refs, in.labels, in.k);
    PPCARD_ASSERT_OK(s);
    double total = 0;
    for (int r = 0; r < in.num_refs; ++r) {
      const double expect = BruteForce(in, r);
      EXPECT_EQ(s->per_reference[r], expect);
      EXPECT_GE(s->per_reference[r], 0.0);
      EXPECT_LE(s->per_reference[r], 1.0);
      total += expect;
    }
    EXPECT_NEAR(s->total, total, 1e-12);
  }
}

// purity_i == 1 exactly when the cluster is the reference plus all its dummies.
TEST(PurityTest, OneIffExactCluster) {
  Rng rng(99);
  for (int t = 0; t < 500; ++t) {
    const Instance in = RandomInstance(rng);
    auto s = Purity(in.points, in.num_refs, in.labels, in.k);
    PPCARD_ASSERT_OK(s);
    for (int r = 0; r < in.num_refs; ++r) {
      int ref_label = -1;
      for (size_t i = 0; i < in.points.size(); ++i) {
        if (in.points[i].role == PointRole::kReference && in.points[i].reference_id == r) {
          ref_label = in.labels[i];
        }
      }
      bool exact = true;
      for (size_t i = 0; i < in.points.size(); ++i) {
        const bool member = (in.points[i].reference_id == r &&
                             in.points[i].role != PointRole::kInput);
        if (member != (in.labels[i] == ref_label)) exact = false;
      }
      EXPECT_EQ(s->per_reference[r] == 1.0, exact);
    }
  }
}

}  // namespace
}  // namespace ppcard
