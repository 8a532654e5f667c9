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

#include "snn/sinkhorn.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "snn/errors.h"

namespace snn {
namespace {

void require_positive(const Matrix& a, const char* op) {
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const double v = a.data()[k];
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::ostringstream msg;
      msg << op << ": entry " << k << " = " << v << " is not strictly positive";
      throw DomainError(msg.str());
    }
  }
}

// In place: x_ij -= log sum_k exp(x_ik).
void log_normalize_rows(Matrix& x) {
  const Eigen::Index n = x.rows(), m = x.cols();
  for (Eigen::Index i = 0; i < n; ++i) {
    double* row = x.data() + i * m;
    const double mx = *std::max_element(row, row + m);
    double s = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) s += std::exp(row[j] - mx);
    const double lse = mx + std::log(s);
    for (Eigen::Index j = 0; j < m; ++j) row[j] -= lse;
  }
}

void log_normalize_cols(Matrix& x) {
  const Eigen::Index n = x.rows(), m = x.cols();
  for (Eigen::Index j = 0; j < m; ++j) {
    double mx = x(0, j);
    for (Eigen::Index i = 1; i < n; ++i) mx = std::max(mx, x(i, j));
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) s += std::exp(x(i, j) - mx);
    const double lse = mx + std::log(s);
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) -= lse;
  }
}

void charge_pass(OpCounter* ops, Eigen::Index n) {
  if (ops == nullptr) return;
  const auto nn = static_cast<std::uint64_t>(n);
  ops->adds += 2 * nn * (nn - 1);
  ops->divs += nn * nn + nn;
  ops->muls += nn * nn;
}

// One Sinkhorn operator on the linear-domain input `a`. Appends 2 * iterations
// log records plus the floored output to `tape` when given.
Matrix run_operator(const Matrix& a, double tau, int iterations,
                    SinkhornTape* tape, OpCounter* ops) {
  Matrix x = tau * a;
  if (!x.allFinite()) {
    std::ostringstream msg;
    msg << "sinkhorn: tau * A is not finite (tau = " << tau << ")";
    throw NumericError(msg.str());
  }
  if (ops != nullptr) ops->transcendentals += static_cast<std::uint64_t>(x.size());
  for (int it = 0; it < iterations; ++it) {
    log_normalize_rows(x);
    if (tape != nullptr) tape->records.push_back(x);
    log_normalize_cols(x);
    if (tape != nullptr) tape->records.push_back(x);
    charge_pass(ops, a.rows());
  }
  Matrix out = x.array().exp().matrix();
  if (!out.allFinite()) {
    std::ostringstream msg;
    msg << "sinkhorn: exp(tau * A) overflows (tau = " << tau << ")";
    throw NumericError(msg.str());
  }
  out = out.cwiseMax(kSinkhornFloor);
  if (tape != nullptr) tape->records.push_back(out);
  return out;
}

void require_square(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    std::ostringstream msg;
    msg << "sinkhorn: expected a non-empty square matrix, got " << a.rows() << "x" << a.cols();
    throw ShapeError(msg.str());
  }
}

}  // namespace

void SinkhornConfig::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("SinkhornConfig: tau must be positive");
  if (cascades < 1 || total_iterations < 1)
    throw std::invalid_argument("SinkhornConfig: cascades and iterations must be >= 1");
  if (total_iterations % cascades != 0)
    throw std::invalid_argument("SinkhornConfig: cascades must divide total iterations");
}

std::vector<Matrix> SinkhornTape::pass_outputs() const {
  std::vector<Matrix> out;
  const std::size_t stride = 2 * static_cast<std::size_t>(iterations_per_cascade) + 1;
  for (int k = 0; k < cascades; ++k) {
    const std::size_t base = k * stride;
    for (int p = 0; p < iterations_per_cascade; ++p)
      out.push_back(records[base + 2 * p + 1].array().exp().matrix());
  }
  return out;
}

Matrix row_normalize(const Matrix& a) {
  require_positive(a, "row_normalize");
  Matrix out = a;
  for (Eigen::Index i = 0; i < a.rows(); ++i) out.row(i) /= a.row(i).sum();
  return out;
}

Matrix col_normalize(const Matrix& a) {
  require_positive(a, "col_normalize");
  Matrix out = a;
  for (Eigen::Index j = 0; j < a.cols(); ++j) out.col(j) /= a.col(j).sum();
  return out;
}

Matrix sinkhorn_operator(const Matrix& a, double tau, int iterations,
                         SinkhornTape* tape, OpCounter* ops) {
  require_square(a);
  if (iterations < 0) throw std::invalid_argument("sinkhorn_operator: negative iterations");
  if (tape != nullptr) {
    *tape = SinkhornTape{tau, 1, iterations, a.rows(), {}};
    tape->records.reserve(2 * iterations + 1);
  }
  return run_operator(a, tau, iterations, tape, ops);
}

Matrix cascaded_activation(const Matrix& a, const SinkhornConfig& cfg,
                           SinkhornTape* tape, OpCounter* ops) {
  require_square(a);
  cfg.validate();
  const int per = cfg.iterations_per_cascade();
  if (tape != nullptr) {
    *tape = SinkhornTape{cfg.tau, cfg.cascades, per, a.rows(), {}};
    tape->records.reserve(static_cast<std::size_t>(2 * cfg.total_iterations + cfg.cascades));
  }
  Matrix s = run_operator(a, cfg.tau, per, tape, ops);
  for (int k = 1; k < cfg.cascades; ++k) s = run_operator(s, cfg.tau, per, tape, ops);
  return s;
}

Matrix sinkhorn_backward(const SinkhornTape& tape, const Matrix& output_grad) {
  if (tape.empty()) throw StateError("sinkhorn_backward: tape was not recorded");
  const int per = tape.iterations_per_cascade;
  const std::size_t stride = 2 * static_cast<std::size_t>(per) + 1;
  if (tape.records.size() != stride * static_cast<std::size_t>(tape.cascades))
    throw StateError("sinkhorn_backward: malformed tape");
  if (output_grad.rows() != tape.n || output_grad.cols() != tape.n) {
    std::ostringstream msg;
    msg << "sinkhorn_backward: gradient is " << output_grad.rows() << "x" << output_grad.cols()
        << ", tape is " << tape.n << "x" << tape.n;
    throw ShapeError(msg.str());
  }
  const Eigen::Index n = tape.n;
  Matrix g = output_grad;
  Matrix dz(n, n);
  for (int k = tape.cascades - 1; k >= 0; --k) {
    const std::size_t base = static_cast<std::size_t>(k) * stride;
    const Matrix& s = tape.records[base + stride - 1];
    // d exp(z) / dz = exp(z); floored entries are constant.
    for (Eigen::Index q = 0; q < s.size(); ++q) {
      const double sv = s.data()[q];
      dz.data()[q] = sv > kSinkhornFloor ? g.data()[q] * sv : 0.0;
    }
    for (int p = per - 1; p >= 0; --p) {
      const Matrix& zc = tape.records[base + 2 * p + 1];
      for (Eigen::Index j = 0; j < n; ++j) {
        const double cs = dz.col(j).sum();
        for (Eigen::Index i = 0; i < n; ++i) dz(i, j) -= std::exp(zc(i, j)) * cs;
      }
      const Matrix& yr = tape.records[base + 2 * p];
      for (Eigen::Index i = 0; i < n; ++i) {
        const double rs = dz.row(i).sum();
        for (Eigen::Index j = 0; j < n; ++j) dz(i, j) -= std::exp(yr(i, j)) * rs;
      }
    }
    g = tape.tau * dz;
  }
  return g;
}

}  // namespace snn
