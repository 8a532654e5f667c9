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

#ifndef SNN_NN_H_
#define SNN_NN_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "snn/matrix.h"
#include "snn/op_counter.h"
#include "snn/sinkhorn.h"

namespace snn {

enum class Activation { kRelu, kSigmoid, kIdentity, kSinkhorn };

std::string_view activation_name(Activation a);
// Inverse of activation_name; throws std::invalid_argument.
Activation parse_activation(std::string_view name);

struct Layer {
  Matrix weight;  // K_r x K_{r-1}
  Vector bias;    // K_r
  Activation activation = Activation::kIdentity;
};

// Trainable parameters of a fully-connected chain. A Sinkhorn-tagged layer
// may only appear last; its K_R outputs are read as vec() of an N x N matrix.
struct MlpParams {
  std::vector<Layer> layers;
  SinkhornConfig sinkhorn;

  Eigen::Index input_dim() const { return layers.front().weight.cols(); }
  Eigen::Index output_dim() const { return layers.back().weight.rows(); }
  bool sinkhorn_output() const {
    return !layers.empty() && layers.back().activation == Activation::kSinkhorn;
  }
  // Throws ShapeError on a broken chain or misplaced Sinkhorn layer.
  void validate() const;
};

struct LayerGrad {
  Matrix weight;
  Vector bias;
};

struct Gradients {
  std::vector<LayerGrad> layers;

  static Gradients zeros_like(const MlpParams& params);
  Gradients& operator+=(const Gradients& other);
};

struct ForwardTape {
  bool recorded = false;
  Vector input;
  std::vector<Vector> pre;   // W_r h_{r-1} + b_r
  std::vector<Vector> post;  // sigma_r(pre_r)
  SinkhornTape sinkhorn;
};

// F(h; theta). Records every intermediate when `tape` is given; tallies the
// arithmetic into `ops` when given. Throws ShapeError on a size mismatch.
Vector forward(const MlpParams& params, const Vector& input, ForwardTape* tape = nullptr,
               OpCounter* ops = nullptr);

// Reverse-mode gradients of a scalar loss whose gradient with respect to the
// network output is `output_grad`. Writes d loss / d input to `input_grad`
// when given. Throws StateError if the tape was not recorded.
Gradients backward(const MlpParams& params, const ForwardTape& tape, const Vector& output_grad,
                   Vector* input_grad = nullptr);

// Column-per-sample versions used by the training loop.
struct BatchTape {
  bool recorded = false;
  Batch input;
  std::vector<Batch> pre;
  std::vector<Batch> post;
  std::vector<SinkhornTape> sinkhorn;  // one per column
};

Batch forward_batch(const MlpParams& params, const Batch& inputs, BatchTape* tape = nullptr);
// Gradients summed over all columns.
Gradients backward_batch(const MlpParams& params, const BatchTape& tape, const Batch& output_grads,
                         Batch* input_grads = nullptr);

// theta - (eta / |B|) * sum of the batch gradients. Throws std::invalid_argument
// on an empty batch or negative eta, ShapeError on incongruent gradients.
MlpParams sgd_step(const MlpParams& params, std::span<const Gradients> batch_grads, double eta);

// In-place form of sgd_step given the already-summed batch gradient.
void apply_sgd(MlpParams& params, const Gradients& grad_sum, double eta, std::size_t batch_size);

// Glorot-uniform weights, zero biases. dims = {K_0, ..., K_R}, one activation
// per layer.
MlpParams init_params(std::span<const int> dims, std::span<const Activation> activations,
                      std::uint64_t seed);

// Line-oriented "SNNCKPT v1" text format with 17 significant digits.
void write_params(std::ostream& out, const MlpParams& params);
// Throws ConfigError on a malformed stream.
MlpParams read_params(std::istream& in);

}  // namespace snn

#endif  // SNN_NN_H_
