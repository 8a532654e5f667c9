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

#ifndef SNN_OP_COUNTER_H_
#define SNN_OP_COUNTER_H_

#include <cstdint>

namespace snn {

// Tally of scalar arithmetic performed by an inference pass.
//
// Conventions:
//  * A dense layer y = W x + b accumulates onto the bias, so each of the
//    K_out * K_in weight entries costs one multiply and one add.
//  * A Sinkhorn pass R then C on an N x N matrix is charged in its linear
//    domain form: the row step sums each row (N - 1 adds per row) and divides
//    every entry (N^2 divisions); the column step sums each column
//    (N - 1 adds per column), takes N reciprocals and scales every entry
//    (N^2 multiplies).
//  * Scaled exponentials exp(tau * x), sigmoid exponentials and ReLU clamps are
//    counted as transcendental / comparison evaluations and kept out of
//    flops().
struct OpCounter {
  std::uint64_t adds = 0;
  std::uint64_t muls = 0;
  std::uint64_t divs = 0;
  std::uint64_t transcendentals = 0;
  std::uint64_t comparisons = 0;

  std::uint64_t flops() const { return adds + muls + divs; }

  OpCounter& operator+=(const OpCounter& o) {
    adds += o.adds;
    muls += o.muls;
    divs += o.divs;
    transcendentals += o.transcendentals;
    comparisons += o.comparisons;
    return *this;
  }
};

}  // namespace snn

#endif  // SNN_OP_COUNTER_H_
