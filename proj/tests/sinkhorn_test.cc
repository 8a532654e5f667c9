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

#include "snn/sinkhorn.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "snn/assignment.h"
#include "snn/errors.h"
#include "test_util.h"

namespace snn {
namespace {

using testing::central_difference;
using testing::random_normal;
using testing::random_uniform;
using testing::relative_error;

// Direct linear-domain reference: m passes of C(R(.)) on exp(tau * a).
Matrix linear_sinkhorn(const Matrix& a, double tau, int m) {
  Matrix s = (tau * a).array().exp().matrix();
  for (int k = 0; k < m; ++k) {
    for (Eigen::Index i = 0; i < s.rows(); ++i) s.row(i) /= s.row(i).sum();
    for (Eigen::Index j = 0; j < s.cols(); ++j) s.col(j) /= s.col(j).sum();
  }
  return s;
}

TEST(NormalizeTest, UniformTwoByTwo) {
  const Matrix ones = Matrix::Ones(2, 2);
  EXPECT_EQ(row_normalize(ones), Matrix::Constant(2, 2, 0.5));
  EXPECT_EQ(col_normalize(ones), Matrix::Constant(2, 2, 0.5));
}

TEST(NormalizeTest, RowArithmetic) {
  Matrix a(2, 2);
  a << 1, 3, 2, 2;
  Matrix expected(2, 2);
  expected << 0.25, 0.75, 0.5, 0.5;
  EXPECT_EQ(row_normalize(a), expected);
}

TEST(NormalizeTest, SumsAreOne) {
  std::mt19937_64 rng(1);
  const Matrix a = random_uniform(5, 5, rng, 0.1, 10.0);
  const Matrix r = row_normalize(a);
  const Matrix c = col_normalize(a);
  for (int k = 0; k < 5; ++k) {
    EXPECT_NEAR(r.row(k).sum(), 1.0, 1e-15);
    EXPECT_NEAR(c.col(k).sum(), 1.0, 1e-15);
  }
}

TEST(NormalizeTest, TransposeDuality) {
  std::mt19937_64 rng(2);
  const Matrix a = random_uniform(4, 4, rng, 0.1, 10.0);
  const Matrix t = a.transpose();
  EXPECT_EQ(col_normalize(a), Matrix(row_normalize(t).transpose()));
}

TEST(NormalizeTest, NonPositiveThrows) {
  Matrix a = Matrix::Ones(2, 2);
  a(1, 0) = 0.0;
  EXPECT_THROW(row_normalize(a), DomainError);
  a(1, 0) = -1.0;
  EXPECT_THROW(col_normalize(a), DomainError);
}

TEST(OperatorTest, MatchesLinearDomainReference) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = random_normal(5, 5, rng);
    const Matrix got = sinkhorn_operator(a, 2.0, 7);
    EXPECT_LT((got - linear_sinkhorn(a, 2.0, 7)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(OperatorTest, IdentityHardensToIdentity) {
  const Matrix s = sinkhorn_operator(Matrix::Identity(5, 5), 20.0, 10);
  EXPECT_EQ(harden(s), Permutation::identity(5));
}

TEST(OperatorTest, EqualEntriesGiveUniformDsm) {
  const Matrix s = sinkhorn_operator(Matrix::Constant(4, 4, 3.7), 20.0, 5);
  EXPECT_LT((s - Matrix::Constant(4, 4, 0.25)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(OperatorTest, HardenedOutputIsBruteForceArgmax) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    const Matrix a = random_normal(3, 3, rng);
    const Matrix s = sinkhorn_operator(a, 20.0, 20);
    EXPECT_EQ(harden(s), brute_force_min(-a).perm) << a;
  }
}

TEST(OperatorTest, OutputInUnitIntervalWithUnitColumns) {
  std::mt19937_64 rng(5);
  const Matrix s = sinkhorn_operator(random_normal(6, 6, rng), 20.0, 20);
  EXPECT_GT(s.minCoeff(), 0.0);
  EXPECT_LE(s.maxCoeff(), 1.0);
  for (int j = 0; j < 6; ++j) EXPECT_NEAR(s.col(j).sum(), 1.0, 1e-12);
}

TEST(OperatorTest, LargeInputsStayFinite) {
  std::mt19937_64 rng(6);
  const Matrix a = 100.0 * random_normal(5, 5, rng);
  const Matrix s = sinkhorn_operator(a, 20.0, 20);
  EXPECT_TRUE(s.allFinite());
}

TEST(OperatorTest, NonSquareThrows) {
  EXPECT_THROW(sinkhorn_operator(Matrix::Ones(2, 3), 1.0, 1), ShapeError);
  SinkhornConfig cfg;
  EXPECT_THROW(cascaded_activation(Matrix::Ones(3, 2), cfg), ShapeError);
}

TEST(OperatorTest, OverflowReportsTau) {
  try {
    sinkhorn_operator(Matrix::Constant(2, 2, 1e300), 1e10, 1);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("tau"), std::string::npos);
  }
}

TEST(ConfigTest, Validation) {
  EXPECT_NO_THROW((SinkhornConfig{20.0, 4, 20}.validate()));
  EXPECT_THROW((SinkhornConfig{0.0, 4, 20}.validate()), std::invalid_argument);
  EXPECT_THROW((SinkhornConfig{20.0, 3, 20}.validate()), std::invalid_argument);
  EXPECT_THROW((SinkhornConfig{20.0, 0, 20}.validate()), std::invalid_argument);
  EXPECT_EQ((SinkhornConfig{20.0, 4, 20}.iterations_per_cascade()), 5);
}

TEST(CascadeTest, SingleCascadeIsOperator) {
  std::mt19937_64 rng(7);
  const Matrix a = random_normal(5, 5, rng);
  EXPECT_EQ(cascaded_activation(a, {20.0, 1, 20}), sinkhorn_operator(a, 20.0, 20));
}

TEST(CascadeTest, ReexponentiatesPreviousOutput) {
  std::mt19937_64 rng(8);
  const Matrix a = random_normal(4, 4, rng);
  const Matrix first = linear_sinkhorn(a, 3.0, 2);
  const Matrix expected = linear_sinkhorn(first, 3.0, 2);
  EXPECT_LT((cascaded_activation(a, {3.0, 2, 4}) - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(CascadeTest, TapeLength) {
  std::mt19937_64 rng(9);
  SinkhornTape tape;
  cascaded_activation(random_normal(4, 4, rng), {20.0, 4, 20}, &tape);
  EXPECT_EQ(tape.records.size(), 2u * 20 + 4);
  EXPECT_EQ(tape.pass_outputs().size(), 20u);
}

TEST(CascadeTest, FourCascadesBeatOne) {
  std::mt19937_64 rng(10);
  double k1 = 0.0, k4 = 0.0;
  for (int t = 0; t < 200; ++t) {
    const Matrix a = random_normal(6, 6, rng);
    k1 += affinity(cascaded_activation(a, {20.0, 1, 20}));
    k4 += affinity(cascaded_activation(a, {20.0, 4, 20}));
  }
  EXPECT_LT(k1, k4);
}

TEST(BackwardTest, ZeroGradientMapsToZero) {
  std::mt19937_64 rng(11);
  SinkhornTape tape;
  cascaded_activation(random_normal(4, 4, rng), {5.0, 2, 8}, &tape);
  EXPECT_TRUE(sinkhorn_backward(tape, Matrix::Zero(4, 4)).isZero(0.0));
}

TEST(BackwardTest, ScalarInputHasZeroGradient) {
  SinkhornTape tape;
  const Matrix s = cascaded_activation(Matrix::Constant(1, 1, 0.3), {5.0, 2, 8}, &tape);
  EXPECT_EQ(s(0, 0), 1.0);
  EXPECT_EQ(sinkhorn_backward(tape, Matrix::Ones(1, 1))(0, 0), 0.0);
}

TEST(BackwardTest, EmptyTapeAndShapeMismatchThrow) {
  EXPECT_THROW(sinkhorn_backward(SinkhornTape{}, Matrix::Zero(2, 2)), StateError);
  SinkhornTape tape;
  cascaded_activation(Matrix::Ones(3, 3), {5.0, 2, 8}, &tape);
  EXPECT_THROW(sinkhorn_backward(tape, Matrix::Zero(2, 2)), ShapeError);
}

TEST(BackwardTest, MatchesCentralDifferences) {
  const SinkhornConfig cfg{5.0, 2, 8};
  int ok = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    Matrix a = random_normal(4, 4, rng);
    const Matrix w = random_normal(4, 4, rng);
    SinkhornTape tape;
    cascaded_activation(a, cfg, &tape);
    const Matrix g = sinkhorn_backward(tape, w);
    auto loss = [&] { return w.cwiseProduct(cascaded_activation(a, cfg)).sum(); };
    for (Eigen::Index k = 0; k < a.size(); ++k) {
      ok += relative_error(g.data()[k], central_difference(loss, a.data() + k, 1e-5)) < 1e-4;
      ++total;
    }
  }
  EXPECT_GT(static_cast<double>(ok) / total, 0.99);
}

TEST(InvariantTest, ColumnsExactAndRowDeviationMonotone) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 100; ++t) {
    const Matrix a = random_normal(5, 5, rng);
    SinkhornTape tape;
    sinkhorn_operator(a, 1.0, 30, &tape);
    double prev = INFINITY;
    for (const Matrix& s : tape.pass_outputs()) {
      for (int j = 0; j < 5; ++j) ASSERT_NEAR(s.col(j).sum(), 1.0, 1e-12);
      const double dev = (s.rowwise().sum().array() - 1.0).abs().maxCoeff();
      ASSERT_LE(dev, prev + 1e-15);
      prev = dev;
    }
  }
}

TEST(InvariantTest, PermutationLimitInTau) {
  std::mt19937_64 rng(13);
  const double taus[] = {1.0, 5.0, 20.0};
  double dist[3] = {0.0, 0.0, 0.0};
  for (int t = 0; t < 500; ++t) {
    const Matrix a = random_normal(6, 6, rng);
    for (int k = 0; k < 3; ++k) {
      const Matrix s = sinkhorn_operator(a, taus[k], 60);
      dist[k] += (s - harden(s).matrix()).cwiseAbs().maxCoeff();
    }
  }
  EXPECT_GE(dist[0], dist[1]);
  EXPECT_GE(dist[1], dist[2]);
}

// A planted permutation plus small noise gives a distinct row/column structure.
Matrix planted(int n, std::mt19937_64& rng) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  Matrix a = 0.3 * random_normal(n, n, rng);
  for (int j = 0; j < n; ++j) a(perm[j], j) += 1.0;
  return a;
}

TEST(InvariantTest, ArgmaxConsistency) {
  std::mt19937_64 rng(14);
  const SinkhornConfig cfg;
  for (int n = 2; n <= 4; ++n) {
    int agree = 0;
    for (int t = 0; t < 1000; ++t) {
      const Matrix a = planted(n, rng);
      agree += harden(cascaded_activation(a, cfg)) == brute_force_min(-a).perm;
    }
    EXPECT_GE(agree, 990) << "n = " << n;
  }
}

TEST(InvariantTest, PositiveScalingKeepsHardening) {
  std::mt19937_64 rng(15);
  const SinkhornConfig cfg;
  int agree = 0, total = 0;
  for (int t = 0; t < 300; ++t) {
    const Matrix a = planted(4, rng);
    const Permutation base = harden(cascaded_activation(a, cfg));
    for (double c : {0.5, 2.0, 4.0}) {
      agree += harden(cascaded_activation(c * a, cfg)) == base;
      ++total;
    }
  }
  EXPECT_GE(agree, total * 99 / 100);
}

TEST(OpCountTest, PassCost) {
  OpCounter ops;
  sinkhorn_operator(Matrix::Ones(8, 8), 20.0, 20, nullptr, &ops);
  EXPECT_EQ(ops.flops(), 20u * (4 * 64 - 8));
  EXPECT_EQ(ops.transcendentals, 64u);
}

}  // namespace
}  // namespace snn
