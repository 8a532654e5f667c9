// Copyright 2026 The SNN Assign Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "snn/assignment.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "snn/errors.h"
#include "snn/sinkhorn.h"
#include "test_util.h"

namespace snn {
namespace {

using testing::random_normal;

Matrix random_int_costs(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(1, 100);
  Matrix c(n, n);
  for (Eigen::Index k = 0; k < c.size(); ++k) c.data()[k] = d(rng);
  return c;
}

Permutation random_perm(int n, std::mt19937_64& rng) {
  Permutation p = Permutation::identity(n);
  std::shuffle(p.mapping.begin(), p.mapping.end(), rng);
  return p;
}

TEST(PermutationTest, MatrixSemantics) {
  const Permutation p{{2, 0, 1}};
  const Matrix x = p.matrix();
  EXPECT_EQ(x(2, 0), 1.0);
  EXPECT_EQ(x(0, 1), 1.0);
  EXPECT_EQ(x(1, 2), 1.0);
  EXPECT_EQ(x.sum(), 3.0);
  EXPECT_TRUE(p.valid());
  EXPECT_FALSE((Permutation{{0, 0, 1}}.valid()));
  EXPECT_FALSE((Permutation{{0, 3, 1}}.valid()));
}

TEST(LinearCostTest, SumsSelectedEntries) {
  Matrix c(2, 2);
  c << 1, 2, 3, 4;
  EXPECT_EQ(linear_cost(c, Permutation{{1, 0}}), 3.0 + 2.0);
}

TEST(HungarianTest, SingleCell) {
  const Assignment a = hungarian_min(Matrix::Constant(1, 1, 7.0));
  EXPECT_EQ(a.perm.mapping, std::vector<int>{0});
  EXPECT_EQ(a.value, 7.0);
}

TEST(HungarianTest, ZeroMatrix) {
  const Assignment a = hungarian_min(Matrix::Zero(5, 5));
  EXPECT_TRUE(a.perm.valid());
  EXPECT_EQ(a.value, 0.0);
  EXPECT_EQ(a.perm, Permutation::identity(5));
}

TEST(HungarianTest, NonSquareThrows) {
  EXPECT_THROW(hungarian_min(Matrix::Zero(2, 3)), ShapeError);
}

TEST(HungarianTest, MatchesExhaustiveEnumeration) {
  std::mt19937_64 rng(1);
  for (int n = 1; n <= 7; ++n) {
    const int trials = n <= 5 ? 300 : 40;
    for (int t = 0; t < trials; ++t) {
      const Matrix c = random_int_costs(n, rng);
      const Assignment h = hungarian_min(c);
      const Assignment b = brute_force_min(c);
      ASSERT_EQ(h.value, b.value) << c;
      ASSERT_EQ(h.perm, b.perm) << c;
      ASSERT_EQ(linear_cost(c, h.perm), h.value);
    }
  }
}

TEST(HungarianTest, AgreesWithBruteForceOnRealCosts) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 1000; ++t) {
    const Matrix c = random_normal(5, 5, rng);
    const Assignment h = hungarian_min(c);
    const Assignment b = brute_force_min(c);
    ASSERT_EQ(h.perm, b.perm);
    ASSERT_EQ(h.value, b.value);
  }
}

TEST(HungarianTest, LexicographicTieBreak) {
  Matrix c = Matrix::Ones(3, 3);
  c(0, 0) = c(1, 1) = c(2, 2) = 0.0;
  c(1, 0) = c(0, 1) = 0.0;  // swapping rows 0 and 1 keeps the cost
  EXPECT_EQ(hungarian_min(c).perm, Permutation::identity(3));
  Matrix d = Matrix::Ones(3, 3);
  d(2, 0) = d(0, 1) = d(1, 2) = 0.0;
  d(0, 0) = d(1, 1) = d(2, 2) = 0.0;
  EXPECT_EQ(hungarian_min(d).perm, Permutation::identity(3));
  EXPECT_EQ(brute_force_min(d).perm, Permutation::identity(3));
}

TEST(HungarianTest, LargeInstanceIsFeasibleAndNoWorseThanRandom) {
  std::mt19937_64 rng(3);
  const Matrix c = random_int_costs(60, rng);
  const Assignment h = hungarian_min(c);
  ASSERT_TRUE(h.perm.valid());
  for (int t = 0; t < 100; ++t) EXPECT_LE(h.value, linear_cost(c, random_perm(60, rng)));
}

TEST(BruteForceTest, ConstantObjectivePicksFirstPermutation) {
  const Assignment a =
      brute_force_min(Matrix::Zero(4, 4), [](const Matrix&, const Permutation&) { return 1.0; });
  EXPECT_EQ(a.perm, Permutation::identity(4));
  EXPECT_EQ(a.value, 1.0);
}

TEST(BruteForceTest, TwoByTwo) {
  Matrix c(2, 2);
  c << 0, 1, 1, 0;
  const Assignment a = brute_force_min(c);
  EXPECT_EQ(a.perm, Permutation::identity(2));
  EXPECT_EQ(a.value, 0.0);
}

TEST(BruteForceTest, NonlinearObjective) {
  std::mt19937_64 rng(4);
  const Matrix c = random_normal(4, 4, rng);
  auto squares = [](const Matrix& m, const Permutation& p) {
    double s = 0.0;
    for (int j = 0; j < p.size(); ++j) s += m(p.mapping[j], j) * m(p.mapping[j], j);
    return s;
  };
  EXPECT_EQ(brute_force_min(c, squares).perm, hungarian_min(c.cwiseAbs2()).perm);
}

TEST(BruteForceTest, SizeLimit) {
  EXPECT_THROW(brute_force_min(Matrix::Zero(11, 11)), SizeLimitError);
}

TEST(HardenTest, PermutationIsFixedPoint) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const Permutation p = random_perm(6, rng);
    EXPECT_EQ(harden(p.matrix()), p);
  }
}

TEST(HardenTest, UniformDsmPicksIdentity) {
  EXPECT_EQ(harden(Matrix::Constant(4, 4, 0.25)), Permutation::identity(4));
}

TEST(HardenTest, SinkhornOutputMatchesEnumeration) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 200; ++t) {
    const Matrix a = random_normal(3, 3, rng);
    const Matrix s = sinkhorn_operator(a, 20.0, 20);
    EXPECT_EQ(harden(s), brute_force_min(-a).perm);
  }
}

TEST(AffinityTest, Examples) {
  std::mt19937_64 rng(7);
  EXPECT_EQ(affinity(random_perm(6, rng).matrix()), 6.0);
  EXPECT_EQ(affinity(Matrix::Constant(4, 4, 0.25)), 1.0);
}

TEST(AffinityTest, DualityWithHarden) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 200; ++t) {
    const Matrix s = sinkhorn_operator(random_normal(5, 5, rng), 3.0, 10);
    const Permutation h = harden(s);
    double trace = 0.0;
    for (int j = 0; j < 5; ++j) trace += s(h.mapping[j], j);
    EXPECT_EQ(affinity(s), trace);
    EXPECT_LE(affinity(s), 5.0 + 1e-12);
  }
}

}  // namespace
}  // namespace snn
