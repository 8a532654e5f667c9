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

#ifndef SNN_CONVERGENCE_H_
#define SNN_CONVERGENCE_H_

#include <cstdint>
#include <vector>

#include "snn/matrix.h"
#include "snn/sinkhorn.h"

namespace snn {

// Affinity after each full C(R(.)) pass of the cascaded activation, L + 1 entries.
// Entry 0 is the affinity of exp(tau * A) scaled to total mass N.
std::vector<double> affinity_curve(const Matrix& a, const SinkhornConfig& cfg);

// Mean affinity curves over `trials` matrices with i.i.d. N(0, sigma^2) entries, one curve per
// cascade count. Every cascade count sees the same matrices.
std::vector<std::vector<double>> mean_affinity_curves(int n, double tau,
                                                      const std::vector<int>& cascades,
                                                      int total_iterations, int trials,
                                                      std::uint64_t seed, double sigma = 1.0);

}  // namespace snn

#endif  // SNN_CONVERGENCE_H_
