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

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "snn/errors.h"
#include "snn/nn.h"

namespace snn {
namespace {

constexpr const char* kMagic = "SNNCKPT v1";

void write_row(std::ostream& out, const double* v, Eigen::Index n) {
  char buf[32];
  for (Eigen::Index k = 0; k < n; ++k) {
    std::snprintf(buf, sizeof(buf), "%.17g", v[k]);
    if (k > 0) out << ' ';
    out << buf;
  }
  out << '\n';
}

std::string next_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(std::string("checkpoint: missing ") + what);
  return line;
}

void read_row(std::istream& in, double* v, Eigen::Index n, const char* what) {
  std::istringstream row(next_line(in, what));
  std::string tok;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!(row >> tok)) throw ConfigError(std::string("checkpoint: short row in ") + what);
    // strtod round-trips %.17g exactly.
    char* end = nullptr;
    v[k] = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
      throw ConfigError("checkpoint: bad number '" + tok + "'");
  }
  if (row >> tok) throw ConfigError(std::string("checkpoint: long row in ") + what);
}

}  // namespace

void write_params(std::ostream& out, const MlpParams& params) {
  out << kMagic << '\n' << params.layers.size() << '\n';
  for (std::size_t r = 0; r < params.layers.size(); ++r) {
    const Layer& l = params.layers[r];
    out << "LAYER " << r + 1 << ' ' << l.weight.rows() << ' ' << l.weight.cols() << ' '
        << activation_name(l.activation) << '\n';
    for (Eigen::Index i = 0; i < l.weight.rows(); ++i)
      write_row(out, l.weight.data() + i * l.weight.cols(), l.weight.cols());
    write_row(out, l.bias.data(), l.bias.size());
  }
}

MlpParams read_params(std::istream& in) {
  if (next_line(in, "header") != kMagic) throw ConfigError("checkpoint: bad magic line");
  long count = 0;
  {
    std::istringstream s(next_line(in, "layer count"));
    if (!(s >> count) || count < 1) throw ConfigError("checkpoint: bad layer count");
  }
  MlpParams params;
  for (long r = 1; r <= count; ++r) {
    std::istringstream head(next_line(in, "LAYER line"));
    std::string tag, act;
    long idx = 0, rows = 0, cols = 0;
    if (!(head >> tag >> idx >> rows >> cols >> act) || tag != "LAYER" || idx != r || rows < 1 ||
        cols < 1)
      throw ConfigError("checkpoint: bad LAYER line for layer " + std::to_string(r));
    Layer l;
    try {
      l.activation = parse_activation(act);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("checkpoint: ") + e.what());
    }
    l.weight.resize(rows, cols);
    for (long i = 0; i < rows; ++i) read_row(in, l.weight.data() + i * cols, cols, "weights");
    l.bias.resize(rows);
    read_row(in, l.bias.data(), rows, "bias");
    params.layers.push_back(std::move(l));
  }
  try {
    params.validate();
  } catch (const ShapeError& e) {
    throw ConfigError(std::string("checkpoint: ") + e.what());
  }
  return params;
}

}  // namespace snn
