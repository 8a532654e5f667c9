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

#ifndef SNN_MATRIX_H_
#define SNN_MATRIX_H_

#include <Eigen/Dense>

namespace snn {

// Dense row-major matrix used for costs, channel gains, Sinkhorn iterates and
// layer weights.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Column-per-sample batch of vectors.
using Batch = Eigen::MatrixXd;

// vec(.) stacks columns: v[i + j * rows] = m(i, j).
inline Vector vec(const Matrix& m) {
  Vector v(m.size());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) v[i + j * m.rows()] = m(i, j);
  return v;
}

template <typename Derived>
Matrix unvec(const Eigen::MatrixBase<Derived>& v, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = v(i + j * rows);
  return m;
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace snn

#endif  // SNN_MATRIX_H_
