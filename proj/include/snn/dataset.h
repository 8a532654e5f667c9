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

#ifndef SNN_DATASET_H_
#define SNN_DATASET_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "snn/cell.h"
#include "snn/lsap.h"

namespace snn {

// Long-format matrix dump: header "instanceId,i,j,value", one row per entry,
// values with 17 significant digits.
void write_matrix_csv(std::ostream& out, const std::vector<Matrix>& matrices);
// Inverse of write_matrix_csv; shapes come from the sidecar. Throws ConfigError.
std::vector<Matrix> read_matrix_csv(std::istream& in, int rows, int cols);

struct DatasetMeta {
  std::string family;  // "lsap" or "cell"
  int count = 0;
  int rows = 0;
  int cols = 0;
  std::uint64_t seed = 0;
  std::string value_unit;
  // cell only
  double p_macro_dbm = 0.0;
  double p_small_dbm = 0.0;
  double noise_power_w = 0.0;
};

// JSON sidecar next to the CSV.
void write_sidecar(std::ostream& out, const DatasetMeta& meta);
DatasetMeta read_sidecar(std::istream& in);

// `count` consecutive instances from one generator seeded with `seed`.
std::vector<AssignmentInstance> gen_lsap_set(int n, int m, int count, std::uint64_t seed);
std::vector<CellScenario> gen_cell_set(int n, double p_macro_dbm, double p_small_dbm, int count,
                                       std::uint64_t seed);

}  // namespace snn

#endif  // SNN_DATASET_H_
