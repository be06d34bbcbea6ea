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


#include "ppcard/kmeans.h"

#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "ppcard/random.h"
#include "tests/test_util.h"

namespace ppcard {
namespace {

// `groups` blocks of `per_group` points each; group g sets bits
// [g*width, (g+1)*width) and every point gets `noise` extra random bits.
std::vector<BloomFilter> Blocks(int groups, int per_group, size_t width,
                                int noise, uint64_t seed) {
  Rng rng(seed);
  const size_t ell = groups * width;
  std::vector<BloomFilter> out;
  for (int g = 0; g < groups; ++g) {
    for (int i = 0; i < per_group; ++i) {
      BloomFilter bf(ell);
      for (size_t b = g * width; b < (g + 1) * width; ++b) bf.Set(b);
      for (int n = 0; n < noise; ++n) bf.Flip(UniformIndex(rng, ell));
      out.push_back(bf);
    }
  }
  return out;
}

TEST(KMeansTest, RecoversSeparatedBlocks) {
  const auto pts = Blocks(5, 6, 20, 1, 1);
  auto res = KMeans(pts, 5, 7);
  PPCARD_ASSERT_OK(res);
  for (int g = 0; g < 5; ++g) {
    std::set<int> labels;
    for (int i = 0; i < 6; ++i) labels.insert(res->assignments[g * 6 + i]);
    EXPECT_EQ(labels.size(), 1u) << "group " << g;
  }
  std::set<int> all(res->assignments.begin(), res->assignments.end());
  EXPECT_EQ(all.size(), 5u);
}

TEST(KMeansTest, InertiaNonIncreasingAndNearestCentroidAtConvergence) {
  const auto pts = Blocks(8, 10, 10, 6, 3);
  auto ps = PointSet::Create(pts);
  PPCARD_ASSERT_OK(ps);
  for (int k : {3, 8, 15}) {
    auto res = KMeans(*ps, k, 11);
    PPCARD_ASSERT_OK(res);
    for (size_t i = 1; i < res->inertia_history.size(); ++i) {
      EXPECT_LE(res->inertia_history[i], res->inertia_history[i - 1] + 1e-9);
    }
    double total = 0;
    for (size_t p = 0; p < pts.size(); ++p) {
      std::vector<double> d(k, 0);
      for (int c = 0; c < k; ++c) {
        for (size_t b = 0; b < ps->dim(); ++b) {
          const double diff = (pts[p].Test(b) ? 1.0 : 0.0) - res->centroids(c, b);
          d[c] += diff * diff;
        }
      }
      const int a = res->assignments[p];
      for (int c = 0; c < k; ++c) EXPECT_LE(d[a], d[c] + 1e-6);
      total += d[a];
    }
    EXPECT_NEAR(total, res->inertia, 1e-6 * std::max(1.0, total));
  }
}

TEST(KMeansTest, KEqualsNGivesZeroInertia) {
  const auto pts = Blocks(3, 4, 8, 3, 5);
  auto res = KMeans(pts, static_cast<int>(pts.size()), 1);
  PPCARD_ASSERT_OK(res);
  std::set<int> labels(res->assignments.begin(), res->assignments.end());
  // Identical points may share a cluster, so only distinct ones count.
  std::set<std::string> distinct;
  for (const auto& p : pts) distinct.insert(p.ToHex());
  EXPECT_EQ(labels.size(), distinct.size());
  EXPECT_NEAR(res->inertia, 0, 1e-9);
}

TEST(KMeansTest, DeterministicForFixedSeed) {
  const auto pts = Blocks(6, 5, 10, 8, 9);
  auto a = KMeans(pts, 6, 123);
  auto b = KMeans(pts, 6, 123);
  PPCARD_ASSERT_OK(a);
  PPCARD_ASSERT_OK(b);
  EXPECT_EQ(a->assignments, b->assignments);
  EXPECT_EQ(a->inertia, b->inertia);
}

TEST(KMeansTest, RestartsNeverWorse) {
  const auto pts = Blocks(10, 4, 6, 10, 13);
  auto one = KMeans(pts, 10, 5, {300, 1e-4, 1});
  auto many = KMeans(pts, 10, 5, {300, 1e-4, 8});
  PPCARD_ASSERT_OK(one);
  PPCARD_ASSERT_OK(many);
  EXPECT_LE(many->inertia, one->inertia + 1e-9);
}

TEST(KMeansTest, RejectsBadArguments) {
  const auto pts = Blocks(2, 2, 4, 0, 1);
  EXPECT_FALSE(KMeans(pts, 0, 1).ok());
  EXPECT_FALSE(KMeans(pts, 5, 1).ok());
  EXPECT_FALSE(KMeans(pts, 2, 1, {0, 1e-4, 1}).ok());
  EXPECT_FALSE(KMeans(pts, 2, 1, {10, 1e-4, 0}).ok());
  std::vector<BloomFilter> mixed = {BloomFilter(8), BloomFilter(9)};
  EXPECT_FALSE(KMeans(mixed, 1, 1).ok());
}

TEST(KMeansTest, SingleCluster) {
  const auto pts = Blocks(2, 3, 4, 0, 1);
  auto res = KMeans(pts, 1, 1);
  PPCARD_ASSERT_OK(res);
  for (int a : res->assignments) EXPECT_EQ(a, 0);
  // Two groups of 3 at Hamming distance 8: the mean sits 0.5 off on each of
  // the 8 differing bits, so every point contributes 2.
  EXPECT_NEAR(res->inertia, 6 * 2.0, 1e-9);
}

}  // namespace
}  // namespace ppcard
