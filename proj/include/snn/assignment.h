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

#ifndef SNN_ASSIGNMENT_H_
#define SNN_ASSIGNMENT_H_

#include <functional>
#include <vector>

#include "snn/matrix.h"

namespace snn {

// mapping[j] is the row assigned to column j; equivalently the permutation
// matrix X with X(mapping[j], j) = 1.
struct Permutation {
  std::vector<int> mapping;

  int size() const { return static_cast<int>(mapping.size()); }
  Matrix matrix() const;
  // True iff mapping is a bijection on {0, ..., N-1}.
  bool valid() const;
  static Permutation identity(int n);

  friend bool operator==(const Permutation&, const Permutation&) = default;
};

struct Assignment {
  Permutation perm;
  double value = 0.0;
};

// sum_j cost(mapping[j], j) = tr(cost^T X), accumulated in column order.
double linear_cost(const Matrix& cost, const Permutation& perm);

// Exact minimizer of tr(cost^T X) over permutation matrices in O(N^3).
// Among equal-cost optima the lexicographically smallest mapping is returned.
// Throws ShapeError for a non-square input and DomainError for non-finite
// entries.
Assignment hungarian_min(const Matrix& cost);

using Objective = std::function<double(const Matrix& cost, const Permutation& perm)>;

inline constexpr int kBruteForceLimit = 10;

// Enumerates all N! mappings in lexicographic order and keeps the first strict
// minimizer of `objective`. Throws SizeLimitError for N > kBruteForceLimit.
Assignment brute_force_min(const Matrix& cost, const Objective& objective);
Assignment brute_force_min(const Matrix& cost);

// argmax_X tr(soft^T X), computed as hungarian_min(-soft).
Permutation harden(const Matrix& soft);

// max_X tr(soft^T X); equals N exactly for a permutation-matrix input.
double affinity(const Matrix& soft);

}  // namespace snn

#endif  // SNN_ASSIGNMENT_H_
