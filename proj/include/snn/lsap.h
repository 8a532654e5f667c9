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

#ifndef SNN_LSAP_H_
#define SNN_LSAP_H_

#include <cstdint>
#include <random>

#include "snn/matrix.h"

namespace snn {

inline constexpr double kLsapCostMin = 1.0;
inline constexpr double kLsapCostMax = 100.0;

// N workers (rows) by M jobs (columns), N >= M >= 1.
struct AssignmentInstance {
  Matrix cost;
  int n = 0;
  int m = 0;

  bool balanced() const { return n == m; }
};

// I.i.d. U[1, 100] costs. Throws std::invalid_argument unless n >= m >= 1.
AssignmentInstance gen_lsap(int n, int m, std::uint64_t seed);
AssignmentInstance gen_lsap(int n, int m, std::mt19937_64& rng);

// tr(H^T X) for an N x M assignment matrix X. Throws ShapeError.
double lsap_cost(const AssignmentInstance& inst, const Matrix& x);
// d lsap_cost / d X, which is H itself.
Matrix lsap_cost_grad(const AssignmentInstance& inst, const Matrix& x);

// Keeps the first m columns of a square N x N output.
Matrix truncate_square_output(const Matrix& x_square, int m);
// Scatters an N x M gradient back to N x N; discarded columns get zero.
Matrix truncate_backward(const Matrix& grad, int n);

// Every column sums to exactly 1 and every row to at most 1, entries in {0, 1}.
bool satisfies_unbalanced_constraints(const Matrix& x);

// Cost matrix padded with zero columns to N x N so hungarian_min solves the
// unbalanced problem.
Matrix padded_cost(const AssignmentInstance& inst);

}  // namespace snn

#endif  // SNN_LSAP_H_
