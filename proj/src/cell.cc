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

#include "snn/cell.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "snn/errors.h"

namespace snn {
namespace {

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

// sigma^2 + sum_{k != i} p_k h_kj
double interference(const CellScenario& scn, const PowerVector& p, int i, int j) {
  double s = scn.noise_power;
  for (int k = 0; k < scn.n; ++k)
    if (k != i) s += p[k] * scn.gain(k, j);
  return s;
}

void require_power_shape(const CellScenario& scn, const PowerVector& p) {
  if (p.size() != scn.n) {
    std::ostringstream msg;
    msg << "power vector has " << p.size() << " entries for " << scn.n << " BSs";
    throw ShapeError(msg.str());
  }
}

void require_association_shape(const CellScenario& scn, const Matrix& x) {
  if (x.rows() != scn.n || x.cols() != scn.n) {
    std::ostringstream msg;
    msg << "association is " << x.rows() << "x" << x.cols() << ", expected " << scn.n << "x"
        << scn.n;
    throw ShapeError(msg.str());
  }
}

}  // namespace

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double path_gain(double distance_km) {
  const double loss_db = kPathLossInterceptDb + kPathLossSlopeDb * std::log10(distance_km);
  return std::pow(10.0, -loss_db / 10.0);
}

CellScenario gen_cell_scenario(int n, double p_macro_dbm, double p_small_dbm,
                               std::mt19937_64& rng) {
  if (n < 2) throw std::invalid_argument("gen_cell_scenario: need n >= 2");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> shadow(0.0, kShadowingStdDb);
  std::normal_distribution<double> component(0.0, std::sqrt(0.5));

  CellScenario scn;
  scn.n = n;
  scn.bs.resize(n);
  for (int i = 1; i < n; ++i) {
    const double theta = 2.0 * std::numbers::pi * unit(rng);
    scn.bs[i] = {kSmallCellRingM * std::cos(theta), kSmallCellRingM * std::sin(theta)};
  }
  scn.ue.resize(n);
  for (int j = 0; j < n; ++j) {
    Point u;
    bool ok = false;
    while (!ok) {
      const double r = kMacroCellRadiusM * std::sqrt(unit(rng));
      const double theta = 2.0 * std::numbers::pi * unit(rng);
      u = {r * std::cos(theta), r * std::sin(theta)};
      ok = std::all_of(scn.bs.begin(), scn.bs.end(),
                       [&](const Point& b) { return distance(u, b) >= kMinUeDistanceM; });
    }
    scn.ue[j] = u;
  }
  scn.power_budget.resize(n);
  scn.power_budget[0] = dbm_to_watt(p_macro_dbm);
  for (int i = 1; i < n; ++i) scn.power_budget[i] = dbm_to_watt(p_small_dbm);
  scn.noise_power = dbm_to_watt(kNoisePowerDbm);

  scn.gain.resize(n, n);
  scn.shadowing_db.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double chi = shadow(rng);
      const double re = component(rng), im = component(rng);
      const double d_km = distance(scn.bs[i], scn.ue[j]) / 1000.0;
      scn.shadowing_db(i, j) = chi;
      scn.gain(i, j) = path_gain(d_km) * std::pow(10.0, -chi / 10.0) * (re * re + im * im);
    }
  }
  return scn;
}

CellScenario gen_cell_scenario(int n, double p_macro_dbm, double p_small_dbm, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return gen_cell_scenario(n, p_macro_dbm, p_small_dbm, rng);
}

CellScenario make_cell_scenario(const Matrix& gain, const PowerVector& budget, double noise_power) {
  if (gain.rows() != gain.cols() || gain.rows() != budget.size() || gain.rows() < 1)
    throw ShapeError("make_cell_scenario: gain must be N x N with N budgets");
  if (!(noise_power > 0.0)) throw DomainError("make_cell_scenario: noise power must be positive");
  if ((budget.array() <= 0.0).any()) throw DomainError("make_cell_scenario: budgets must be > 0");
  if ((gain.array() < 0.0).any()) throw DomainError("make_cell_scenario: negative gain");
  CellScenario scn;
  scn.n = static_cast<int>(gain.rows());
  scn.power_budget = budget;
  scn.noise_power = noise_power;
  scn.gain = gain;
  scn.shadowing_db = Matrix::Zero(scn.n, scn.n);
  return scn;
}

double rate(const CellScenario& scn, const PowerVector& p, int i, int j) {
  require_power_shape(scn, p);
  return std::log1p(p[i] * scn.gain(i, j) / interference(scn, p, i, j));
}

Matrix rate_matrix(const CellScenario& scn, const PowerVector& p) {
  require_power_shape(scn, p);
  Matrix r(scn.n, scn.n);
  for (int i = 0; i < scn.n; ++i)
    for (int j = 0; j < scn.n; ++j)
      r(i, j) = std::log1p(p[i] * scn.gain(i, j) / interference(scn, p, i, j));
  return r;
}

double sum_rate(const CellScenario& scn, const Matrix& x, const PowerVector& p) {
  require_association_shape(scn, x);
  double total = 0.0;
  const Matrix r = rate_matrix(scn, p);
  for (int j = 0; j < scn.n; ++j)
    for (int i = 0; i < scn.n; ++i) total += x(i, j) * r(i, j);
  return total;
}

SumRateGrad sum_rate_grad(const CellScenario& scn, const Matrix& x, const PowerVector& p) {
  require_association_shape(scn, x);
  require_power_shape(scn, p);
  const int n = scn.n;
  SumRateGrad g{rate_matrix(scn, p), Vector::Zero(n)};
  // r_ij = log(T_j) - log(I_ij), T_j = I_ij + p_i h_ij.
  for (int j = 0; j < n; ++j) {
    double total = scn.noise_power;
    for (int k = 0; k < n; ++k) total += p[k] * scn.gain(k, j);
    for (int i = 0; i < n; ++i) {
      const double w = x(i, j);
      if (w == 0.0) continue;
      const double inv_i = 1.0 / interference(scn, p, i, j);
      for (int k = 0; k < n; ++k) {
        g.dp[k] += w * scn.gain(k, j) / total;
        if (k != i) g.dp[k] -= w * scn.gain(k, j) * inv_i;
      }
    }
  }
  return g;
}

void require_feasible(const CellScenario& scn, const PowerVector& p) {
  require_power_shape(scn, p);
  for (int i = 0; i < scn.n; ++i) {
    if (!(p[i] >= 0.0 && p[i] <= scn.power_budget[i])) {
      std::ostringstream msg;
      msg << "power p_" << i << " = " << p[i] << " outside [0, " << scn.power_budget[i] << "]";
      throw DomainError(msg.str());
    }
  }
}

WmmseTrace wmmse_trace(const CellScenario& scn, const Permutation& assignment, int iterations) {
  const int n = scn.n;
  if (assignment.size() != n || !assignment.valid())
    throw std::invalid_argument("wmmse: invalid association");
  if (iterations < 1) throw std::invalid_argument("wmmse: iterations must be >= 1");
  const Matrix x = assignment.matrix();

  // ue_of[i]: the UE served by BS i.
  std::vector<int> ue_of(n);
  for (int j = 0; j < n; ++j) ue_of[assignment.mapping[j]] = j;

  Vector amp = scn.power_budget.cwiseSqrt();
  const Vector amp_max = amp;
  auto powers = [&] {
    PowerVector p = amp.cwiseProduct(amp);
    return p.cwiseMin(scn.power_budget);
  };

  WmmseTrace trace;
  trace.power = powers();
  trace.sum_rates.push_back(sum_rate(scn, x, trace.power));
  Vector u(n), w(n);
  for (int t = 0; t < iterations; ++t) {
    for (int j = 0; j < n; ++j) {
      const int i = assignment.mapping[j];
      double total = scn.noise_power;
      for (int k = 0; k < n; ++k) total += scn.gain(k, j) * amp[k] * amp[k];
      const double sh = std::sqrt(scn.gain(i, j));
      u[j] = sh * amp[i] / total;
      // 1 / MSE = T_j / (T_j - h_ij v_i^2), written via the interference term.
      w[j] = total / interference(scn, amp.cwiseProduct(amp), i, j);
    }
    for (int i = 0; i < n; ++i) {
      const int j = ue_of[i];
      double den = 0.0;
      for (int l = 0; l < n; ++l) den += w[l] * u[l] * u[l] * scn.gain(i, l);
      const double num = w[j] * u[j] * std::sqrt(scn.gain(i, j));
      double v = den > 0.0 ? num / den : amp_max[i];
      amp[i] = std::clamp(v, 0.0, amp_max[i]);
    }
    trace.power = powers();
    const double prev = trace.sum_rates.back();
    const double cur = sum_rate(scn, x, trace.power);
    trace.sum_rates.push_back(cur);
    if (std::abs(cur - prev) <= kWmmseTolerance * std::max(std::abs(cur), 1e-300)) break;
  }
  return trace;
}

PowerVector wmmse_power(const CellScenario& scn, const Permutation& assignment, int iterations) {
  return wmmse_trace(scn, assignment, iterations).power;
}

JointSolution hungarian_wmmse_baseline(const CellScenario& scn, int rounds, int wmmse_iterations) {
  if (rounds < 1) throw std::invalid_argument("baseline: rounds must be >= 1");
  PowerVector p = scn.power_budget;
  JointSolution best;
  bool have = false;
  Permutation prev;
  for (int r = 0; r < rounds; ++r) {
    const Permutation perm = hungarian_min(-rate_matrix(scn, p)).perm;
    if (have && perm == prev) break;
    p = wmmse_power(scn, perm, wmmse_iterations);
    const double value = sum_rate(scn, perm.matrix(), p);
    if (!have || value > best.sum_rate) best = {perm, p, value};
    have = true;
    prev = perm;
  }
  return best;
}

JointSolution joint_brute_oracle(const CellScenario& scn) {
  if (scn.n > kJointOracleLimit) {
    std::ostringstream msg;
    msg << "joint_brute_oracle: N = " << scn.n << " exceeds the enumeration limit "
        << kJointOracleLimit;
    throw SizeLimitError(msg.str());
  }
  Permutation perm = Permutation::identity(scn.n);
  JointSolution best;
  bool have = false;
  do {
    PowerVector p = wmmse_power(scn, perm, kOracleWmmseIterations);
    const double value = sum_rate(scn, perm.matrix(), p);
    if (!have || value > best.sum_rate) best = {perm, p, value};
    have = true;
  } while (std::next_permutation(perm.mapping.begin(), perm.mapping.end()));
  return best;
}

}  // namespace snn
