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

#include "snn/convergence.h"

#include <random>
#include <stdexcept>

#include "snn/assignment.h"

namespace snn {

std::vector<double> affinity_curve(const Matrix& a, const SinkhornConfig& cfg) {
  cfg.validate();
  SinkhornTape tape;
  cascaded_activation(a, cfg, &tape);
  std::vector<double> curve;
  curve.reserve(static_cast<std::size_t>(cfg.total_iterations) + 1);
  // Shift before exponentiating; the scale to mass N removes it again.
  const Matrix e = (cfg.tau * (a.array() - a.maxCoeff())).exp().matrix();
  curve.push_back(affinity(e * (static_cast<double>(a.rows()) / e.sum())));
  for (const Matrix& s : tape.pass_outputs()) curve.push_back(affinity(s));
  return curve;
}

std::vector<std::vector<double>> mean_affinity_curves(int n, double tau,
                                                      const std::vector<int>& cascades,
                                                      int total_iterations, int trials,
                                                      std::uint64_t seed, double sigma) {
  if (n < 1 || trials < 1) throw std::invalid_argument("affinity curves: need n >= 1, trials >= 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("affinity curves: sigma must be > 0");
  std::vector<SinkhornConfig> cfgs;
  for (int k : cascades) {
    SinkhornConfig cfg{tau, k, total_iterations};
    cfg.validate();
    cfgs.push_back(cfg);
  }
  std::vector<std::vector<double>> sums(cfgs.size(),
                                        std::vector<double>(total_iterations + 1, 0.0));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  Matrix a(n, n);
  for (int t = 0; t < trials; ++t) {
    for (Eigen::Index k = 0; k < a.size(); ++k) a.data()[k] = normal(rng);
    for (std::size_t c = 0; c < cfgs.size(); ++c) {
      const std::vector<double> curve = affinity_curve(a, cfgs[c]);
      for (std::size_t i = 0; i < curve.size(); ++i) sums[c][i] += curve[i];
    }
  }
  for (auto& s : sums)
    for (double& v : s) v /= trials;
  return sums;
}

}  // namespace snn
