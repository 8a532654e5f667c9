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

#include "snn/assignment.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "snn/errors.h"

namespace snn {
namespace {

struct Duals {
  std::vector<double> u;  // rows
  std::vector<double> v;  // columns
  std::vector<int> row_of_col;
};

// Shortest augmenting path Hungarian method with row and column potentials.
Duals solve_duals(const Matrix& c) {
  const int n = static_cast<int>(c.rows());
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based internals; index 0 is the virtual root column.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<double> minv(n + 1);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = c(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  Duals d;
  d.u.assign(u.begin() + 1, u.end());
  d.v.assign(v.begin() + 1, v.end());
  d.row_of_col.resize(n);
  for (int j = 1; j <= n; ++j) d.row_of_col[j - 1] = p[j] - 1;
  return d;
}

// Kuhn augmenting path over the tight-edge graph restricted to free rows and
// columns >= first_col.
class TightMatcher {
 public:
  TightMatcher(const std::vector<std::vector<char>>& tight, int n) : tight_(tight), n_(n) {}

  bool perfect(const std::vector<char>& row_taken, int first_col) {
    match_row_.assign(n_, -1);
    for (int j = first_col; j < n_; ++j) {
      seen_.assign(n_, 0);
      if (!augment(j, row_taken)) return false;
    }
    return true;
  }

 private:
  bool augment(int j, const std::vector<char>& row_taken) {
    for (int i = 0; i < n_; ++i) {
      if (row_taken[i] || !tight_[i][j] || seen_[i]) continue;
      seen_[i] = 1;
      if (match_row_[i] < 0 || augment(match_row_[i], row_taken)) {
        match_row_[i] = j;
        return true;
      }
    }
    return false;
  }

  const std::vector<std::vector<char>>& tight_;
  int n_;
  std::vector<int> match_row_;
  std::vector<char> seen_;
};

// Lexicographically smallest optimal mapping: every optimum is a perfect
// matching on edges with zero reduced cost under optimal duals.
Permutation lexicographic_optimum(const Matrix& c, const Duals& d) {
  const int n = static_cast<int>(c.rows());
  const double scale = 1.0 + c.cwiseAbs().maxCoeff();
  const double eps = 1e-11 * scale * n;
  std::vector<std::vector<char>> tight(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) tight[i][j] = c(i, j) - d.u[i] - d.v[j] <= eps;
  for (int j = 0; j < n; ++j) tight[d.row_of_col[j]][j] = 1;

  TightMatcher matcher(tight, n);
  std::vector<char> taken(n, 0);
  Permutation perm;
  perm.mapping.resize(n);
  for (int j = 0; j < n; ++j) {
    bool placed = false;
    for (int i = 0; i < n && !placed; ++i) {
      if (taken[i] || !tight[i][j]) continue;
      taken[i] = 1;
      if (matcher.perfect(taken, j + 1)) {
        perm.mapping[j] = i;
        placed = true;
      } else {
        taken[i] = 0;
      }
    }
    if (!placed) return Permutation{d.row_of_col};
  }
  return perm;
}

void require_square_finite(const Matrix& m, const char* op) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream msg;
    msg << op << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw ShapeError(msg.str());
  }
  if (!m.allFinite()) throw DomainError(std::string(op) + ": non-finite entry");
}

}  // namespace

Matrix Permutation::matrix() const {
  const int n = size();
  Matrix x = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) x(mapping[j], j) = 1.0;
  return x;
}

bool Permutation::valid() const {
  std::vector<char> seen(mapping.size(), 0);
  for (int r : mapping) {
    if (r < 0 || r >= size() || seen[r]) return false;
    seen[r] = 1;
  }
  return true;
}

Permutation Permutation::identity(int n) {
  Permutation p;
  p.mapping.resize(n);
  std::iota(p.mapping.begin(), p.mapping.end(), 0);
  return p;
}

double linear_cost(const Matrix& cost, const Permutation& perm) {
  if (cost.cols() != perm.size()) throw ShapeError("linear_cost: size mismatch");
  double total = 0.0;
  for (int j = 0; j < perm.size(); ++j) total += cost(perm.mapping[j], j);
  return total;
}

Assignment hungarian_min(const Matrix& cost) {
  require_square_finite(cost, "hungarian_min");
  const Duals d = solve_duals(cost);
  Assignment a;
  a.perm = lexicographic_optimum(cost, d);
  a.value = linear_cost(cost, a.perm);
  return a;
}

Assignment brute_force_min(const Matrix& cost, const Objective& objective) {
  if (cost.rows() != cost.cols() || cost.rows() == 0)
    throw ShapeError("brute_force_min: expected a non-empty square matrix");
  if (cost.rows() > kBruteForceLimit) {
    std::ostringstream msg;
    msg << "brute_force_min: N = " << cost.rows() << " exceeds the enumeration limit "
        << kBruteForceLimit;
    throw SizeLimitError(msg.str());
  }
  Permutation p = Permutation::identity(static_cast<int>(cost.rows()));
  Assignment best{p, objective(cost, p)};
  while (std::next_permutation(p.mapping.begin(), p.mapping.end())) {
    const double v = objective(cost, p);
    if (v < best.value) best = {p, v};
  }
  return best;
}

Assignment brute_force_min(const Matrix& cost) { return brute_force_min(cost, linear_cost); }

Permutation harden(const Matrix& soft) {
  require_square_finite(soft, "harden");
  return hungarian_min(-soft).perm;
}

double affinity(const Matrix& soft) { return linear_cost(soft, harden(soft)); }

}  // namespace snn
