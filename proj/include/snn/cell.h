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

#ifndef SNN_CELL_H_
#define SNN_CELL_H_

#include <cstdint>
#include <random>
#include <vector>

#include "snn/assignment.h"
#include "snn/matrix.h"

namespace snn {

// Two-tier network constants.
inline constexpr double kMacroCellRadiusM = 1000.0;
inline constexpr double kSmallCellRingM = 500.0;
inline constexpr double kMinUeDistanceM = 10.0;
inline constexpr double kPathLossInterceptDb = 120.9;
inline constexpr double kPathLossSlopeDb = 37.6;  // per decade of km
inline constexpr double kShadowingStdDb = 8.0;
inline constexpr double kNoisePowerDbm = -114.0;

// Per-BS transmit power in watts.
using PowerVector = Vector;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// N BSs and N UEs. gain(i, j) is the linear power gain from BS i to UE j.
struct CellScenario {
  int n = 0;
  std::vector<Point> bs;
  std::vector<Point> ue;
  PowerVector power_budget;  // W
  double noise_power = 0.0;  // W
  Matrix gain;
  Matrix shadowing_db;       // the shadowing draw behind each gain
};

double dbm_to_watt(double dbm);
// 10^(-(120.9 + 37.6 log10 d_km) / 10), no shadowing or fading.
double path_gain(double distance_km);

// BS 0 at the origin, BSs 1..n-1 at uniform angles on the 500 m ring, UEs
// uniform in the 1 km disk at least 10 m from every BS, log-normal shadowing
// and Rayleigh power fading. Throws std::invalid_argument for n < 2.
CellScenario gen_cell_scenario(int n, double p_macro_dbm, double p_small_dbm, std::uint64_t seed);
CellScenario gen_cell_scenario(int n, double p_macro_dbm, double p_small_dbm,
                               std::mt19937_64& rng);

// Scenario with caller-supplied gains and budgets (geometry left empty).
CellScenario make_cell_scenario(const Matrix& gain, const PowerVector& budget, double noise_power);

// log(1 + p_i h_ij / (sigma^2 + sum_{k != i} p_k h_kj)) in nats.
double rate(const CellScenario& scn, const PowerVector& p, int i, int j);
Matrix rate_matrix(const CellScenario& scn, const PowerVector& p);

// sum_ij x_ij r_ij(p) for a soft or hard N x N association. Throws ShapeError.
double sum_rate(const CellScenario& scn, const Matrix& x, const PowerVector& p);

struct SumRateGrad {
  Matrix dx;  // r_ij(p)
  Vector dp;
};
SumRateGrad sum_rate_grad(const CellScenario& scn, const Matrix& x, const PowerVector& p);

// Throws DomainError unless 0 <= p_i <= P_i for every BS.
void require_feasible(const CellScenario& scn, const PowerVector& p);

struct WmmseTrace {
  PowerVector power;
  std::vector<double> sum_rates;  // at the full-power start, then after each iteration
};

inline constexpr double kWmmseTolerance = 1e-8;
inline constexpr int kOracleWmmseIterations = 200;

// Scalar WMMSE for a fixed association, started from full power. Stops after
// `iterations` or when the relative sum-rate change drops below
// kWmmseTolerance.
WmmseTrace wmmse_trace(const CellScenario& scn, const Permutation& assignment, int iterations);
PowerVector wmmse_power(const CellScenario& scn, const Permutation& assignment, int iterations);

struct JointSolution {
  Permutation assignment;
  PowerVector power;
  double sum_rate = 0.0;
};

// Alternates Hungarian association on -r_ij(p) and WMMSE power control,
// starting from full power; returns the best iterate.
JointSolution hungarian_wmmse_baseline(const CellScenario& scn, int rounds,
                                       int wmmse_iterations = kOracleWmmseIterations);

inline constexpr int kJointOracleLimit = 5;

// WMMSE on every one of the N! associations. Throws SizeLimitError for N > 5.
JointSolution joint_brute_oracle(const CellScenario& scn);

}  // namespace snn

#endif  // SNN_CELL_H_
