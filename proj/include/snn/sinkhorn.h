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

#ifndef SNN_SINKHORN_H_
#define SNN_SINKHORN_H_

#include <vector>

#include "snn/matrix.h"
#include "snn/op_counter.h"

namespace snn {

// Linear-domain entries emitted by the Sinkhorn layer never drop below this.
inline constexpr double kSinkhornFloor = 1e-30;

struct SinkhornConfig {
  double tau = 20.0;
  int cascades = 4;           // K
  int total_iterations = 20;  // L, split evenly across cascades

  int iterations_per_cascade() const { return total_iterations / cascades; }

  // Throws std::invalid_argument unless tau > 0, K >= 1, L >= 1 and K | L.
  void validate() const;
};

// Everything a recorded forward pass needs for reverse-mode differentiation.
//
// For each cascade, in order: 2 * (L / K) log-domain matrices (the result of
// every row and every column normalization), then the cascade's linear-domain
// output exp(.) after flooring. Total length is 2 L + K.
struct SinkhornTape {
  double tau = 0.0;
  int cascades = 0;
  int iterations_per_cascade = 0;
  Eigen::Index n = 0;
  std::vector<Matrix> records;

  bool empty() const { return records.empty(); }

  // Linear-domain iterate after each full C(R(.)) pass, L matrices in total.
  std::vector<Matrix> pass_outputs() const;
};

// a_ij / sum_k a_ik. Throws DomainError on a nonpositive or non-finite entry.
Matrix row_normalize(const Matrix& a);
// a_ij / sum_k a_kj. Throws DomainError on a nonpositive or non-finite entry.
Matrix col_normalize(const Matrix& a);

// S^m(tau A): m applications of C(R(.)) to exp(tau A), carried out on
// log-values with log-sum-exp normalizations. Throws ShapeError for
// non-square input and NumericError if tau * A is not finite (or, with zero
// iterations, if exp(tau A) overflows).
Matrix sinkhorn_operator(const Matrix& a, double tau, int iterations,
                         SinkhornTape* tape = nullptr, OpCounter* ops = nullptr);

// K Sinkhorn operators in sequence; each one exponentiates tau times the
// previous operator's (linear-domain) output and runs L / K passes.
Matrix cascaded_activation(const Matrix& a, const SinkhornConfig& cfg,
                           SinkhornTape* tape = nullptr, OpCounter* ops = nullptr);

// d loss / d A through every recorded normalization and exponentiation.
Matrix sinkhorn_backward(const SinkhornTape& tape, const Matrix& output_grad);

}  // namespace snn

#endif  // SNN_SINKHORN_H_
