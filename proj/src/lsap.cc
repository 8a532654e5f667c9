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

#include "snn/lsap.h"

#include <sstream>
#include <stdexcept>

#include "snn/errors.h"

namespace snn {

AssignmentInstance gen_lsap(int n, int m, std::mt19937_64& rng) {
  if (m < 1 || n < m) throw std::invalid_argument("gen_lsap: need n >= m >= 1");
  std::uniform_real_distribution<double> dist(kLsapCostMin, kLsapCostMax);
  AssignmentInstance inst{Matrix(n, m), n, m};
  for (Eigen::Index k = 0; k < inst.cost.size(); ++k) inst.cost.data()[k] = dist(rng);
  return inst;
}

AssignmentInstance gen_lsap(int n, int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return gen_lsap(n, m, rng);
}

double lsap_cost(const AssignmentInstance& inst, const Matrix& x) {
  if (x.rows() != inst.cost.rows() || x.cols() != inst.cost.cols()) {
    std::ostringstream msg;
    msg << "lsap_cost: X is " << x.rows() << "x" << x.cols() << ", H is " << inst.cost.rows()
        << "x" << inst.cost.cols();
    throw ShapeError(msg.str());
  }
  return inst.cost.cwiseProduct(x).sum();
}

Matrix lsap_cost_grad(const AssignmentInstance& inst, const Matrix& x) {
  if (x.rows() != inst.cost.rows() || x.cols() != inst.cost.cols())
    throw ShapeError("lsap_cost_grad: shape mismatch");
  return inst.cost;
}

Matrix truncate_square_output(const Matrix& x_square, int m) {
  if (x_square.rows() != x_square.cols()) throw ShapeError("truncate: input is not square");
  if (m < 1 || m > x_square.cols()) {
    std::ostringstream msg;
    msg << "truncate: cannot keep " << m << " of " << x_square.cols() << " columns";
    throw ShapeError(msg.str());
  }
  return x_square.leftCols(m);
}

Matrix truncate_backward(const Matrix& grad, int n) {
  if (grad.rows() != n || grad.cols() > n) throw ShapeError("truncate_backward: shape mismatch");
  Matrix out = Matrix::Zero(n, n);
  out.leftCols(grad.cols()) = grad;
  return out;
}

bool satisfies_unbalanced_constraints(const Matrix& x) {
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double v = x.data()[k];
    if (v != 0.0 && v != 1.0) return false;
  }
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    if (x.col(j).sum() != 1.0) return false;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    if (x.row(i).sum() > 1.0) return false;
  return true;
}

Matrix padded_cost(const AssignmentInstance& inst) {
  Matrix c = Matrix::Zero(inst.n, inst.n);
  c.leftCols(inst.m) = inst.cost;
  return c;
}

}  // namespace snn
