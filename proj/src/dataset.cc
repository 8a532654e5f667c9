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

#include "snn/dataset.h"

#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "snn/errors.h"

namespace snn {

void write_matrix_csv(std::ostream& out, const std::vector<Matrix>& matrices) {
  out << "instanceId,i,j,value\n";
  char buf[32];
  for (std::size_t k = 0; k < matrices.size(); ++k) {
    const Matrix& m = matrices[k];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
        out << k << ',' << i << ',' << j << ',' << buf << '\n';
      }
    }
  }
}

std::vector<Matrix> read_matrix_csv(std::istream& in, int rows, int cols) {
  std::string line;
  if (!std::getline(in, line) || line != "instanceId,i,j,value")
    throw ConfigError("dataset csv: missing header row");
  std::vector<Matrix> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    long k = 0, i = 0, j = 0;
    double v = 0.0;
    char c1 = 0, c2 = 0, c3 = 0;
    std::istringstream s(line);
    if (!(s >> k >> c1 >> i >> c2 >> j >> c3) || c1 != ',' || c2 != ',' || c3 != ',')
      throw ConfigError("dataset csv: bad row '" + line + "'");
    std::string tok;
    s >> tok;
    char* end = nullptr;
    v = std::strtod(tok.c_str(), &end);
    if (tok.empty() || *end != '\0') throw ConfigError("dataset csv: bad value '" + tok + "'");
    if (k < 0 || i < 0 || i >= rows || j < 0 || j >= cols)
      throw ConfigError("dataset csv: index out of range in '" + line + "'");
    while (static_cast<long>(out.size()) <= k) out.push_back(Matrix::Zero(rows, cols));
    out[static_cast<std::size_t>(k)](i, j) = v;
  }
  return out;
}

void write_sidecar(std::ostream& out, const DatasetMeta& meta) {
  nlohmann::json j;
  j["family"] = meta.family;
  j["count"] = meta.count;
  j["rows"] = meta.rows;
  j["cols"] = meta.cols;
  j["seed"] = meta.seed;
  j["value_unit"] = meta.value_unit;
  if (meta.family == "cell") {
    j["p_macro_dbm"] = meta.p_macro_dbm;
    j["p_small_dbm"] = meta.p_small_dbm;
    j["noise_power_w"] = meta.noise_power_w;
    j["position_unit"] = "m";
    j["power_unit"] = "W";
  }
  out << j.dump(2) << '\n';
}

DatasetMeta read_sidecar(std::istream& in) {
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    DatasetMeta meta;
    meta.family = j.at("family").get<std::string>();
    meta.count = j.at("count").get<int>();
    meta.rows = j.at("rows").get<int>();
    meta.cols = j.at("cols").get<int>();
    meta.seed = j.at("seed").get<std::uint64_t>();
    meta.value_unit = j.at("value_unit").get<std::string>();
    if (meta.family == "cell") {
      meta.p_macro_dbm = j.at("p_macro_dbm").get<double>();
      meta.p_small_dbm = j.at("p_small_dbm").get<double>();
      meta.noise_power_w = j.at("noise_power_w").get<double>();
    }
    return meta;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("dataset sidecar: ") + e.what());
  }
}

std::vector<AssignmentInstance> gen_lsap_set(int n, int m, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<AssignmentInstance> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out.push_back(gen_lsap(n, m, rng));
  return out;
}

std::vector<CellScenario> gen_cell_set(int n, double p_macro_dbm, double p_small_dbm, int count,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CellScenario> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k)
    out.push_back(gen_cell_scenario(n, p_macro_dbm, p_small_dbm, rng));
  return out;
}

}  // namespace snn
