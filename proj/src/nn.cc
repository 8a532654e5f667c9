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

#include "snn/nn.h"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "snn/errors.h"

namespace snn {
namespace {

Eigen::Index square_side(Eigen::Index k) {
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(k))));
  return n * n == k ? n : -1;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

template <typename M>
M apply_elementwise(const M& z, Activation act) {
  switch (act) {
    case Activation::kRelu:
      return z.cwiseMax(0.0);
    case Activation::kSigmoid:
      return z.unaryExpr([](double v) { return sigmoid(v); });
    default:
      return z;
  }
}

// dz = d(post) * sigma'(pre), for the element-wise activations.
template <typename M>
M elementwise_backward(const M& dpost, const M& pre, const M& post, Activation act) {
  switch (act) {
    case Activation::kRelu:
      return (pre.array() > 0.0).select(dpost.array(), 0.0).matrix();
    case Activation::kSigmoid:
      return (dpost.array() * post.array() * (1.0 - post.array())).matrix();
    default:
      return dpost;
  }
}

void check_input(const MlpParams& params, Eigen::Index rows) {
  if (params.layers.empty()) throw ShapeError("forward: network has no layers");
  if (rows != params.input_dim()) {
    std::ostringstream msg;
    msg << "forward: input length " << rows << " != K_0 = " << params.input_dim();
    throw ShapeError(msg.str());
  }
}

}  // namespace

std::string_view activation_name(Activation a) {
  switch (a) {
    case Activation::kRelu:
      return "relu";
    case Activation::kSigmoid:
      return "sigmoid";
    case Activation::kIdentity:
      return "identity";
    case Activation::kSinkhorn:
      return "sinkhorn";
  }
  return "identity";
}

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "sigmoid") return Activation::kSigmoid;
  if (name == "identity") return Activation::kIdentity;
  if (name == "sinkhorn") return Activation::kSinkhorn;
  throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

void MlpParams::validate() const {
  if (layers.empty()) throw ShapeError("MlpParams: no layers");
  for (std::size_t r = 0; r < layers.size(); ++r) {
    const Layer& l = layers[r];
    if (l.bias.size() != l.weight.rows()) {
      std::ostringstream msg;
      msg << "MlpParams: layer " << r << " bias has " << l.bias.size() << " entries, expected "
          << l.weight.rows();
      throw ShapeError(msg.str());
    }
    if (r > 0 && l.weight.cols() != layers[r - 1].weight.rows()) {
      std::ostringstream msg;
      msg << "MlpParams: layer " << r << " takes " << l.weight.cols() << " inputs but layer "
          << r - 1 << " emits " << layers[r - 1].weight.rows();
      throw ShapeError(msg.str());
    }
    if (l.activation == Activation::kSinkhorn) {
      if (r + 1 != layers.size()) throw ShapeError("MlpParams: Sinkhorn layer must be last");
      if (square_side(l.weight.rows()) < 0)
        throw ShapeError("MlpParams: Sinkhorn layer width must be a perfect square");
    }
  }
}

Gradients Gradients::zeros_like(const MlpParams& params) {
  Gradients g;
  g.layers.reserve(params.layers.size());
  for (const Layer& l : params.layers)
    g.layers.push_back({Matrix::Zero(l.weight.rows(), l.weight.cols()),
                        Vector::Zero(l.bias.size())});
  return g;
}

Gradients& Gradients::operator+=(const Gradients& other) {
  if (other.layers.size() != layers.size()) throw ShapeError("Gradients: layer count mismatch");
  for (std::size_t r = 0; r < layers.size(); ++r) {
    if (other.layers[r].weight.rows() != layers[r].weight.rows() ||
        other.layers[r].weight.cols() != layers[r].weight.cols() ||
        other.layers[r].bias.size() != layers[r].bias.size())
      throw ShapeError("Gradients: layer shape mismatch");
    layers[r].weight += other.layers[r].weight;
    layers[r].bias += other.layers[r].bias;
  }
  return *this;
}

Vector forward(const MlpParams& params, const Vector& input, ForwardTape* tape, OpCounter* ops) {
  check_input(params, input.size());
  if (tape != nullptr) {
    *tape = ForwardTape{};
    tape->recorded = true;
    tape->input = input;
  }
  Vector h = input;
  for (const Layer& l : params.layers) {
    Vector z = l.weight * h + l.bias;
    if (ops != nullptr) {
      const auto mac = static_cast<std::uint64_t>(l.weight.size());
      ops->muls += mac;
      ops->adds += mac;
    }
    Vector out;
    if (l.activation == Activation::kSinkhorn) {
      const Eigen::Index n = square_side(z.size());
      if (n < 0) throw ShapeError("forward: Sinkhorn layer width must be a perfect square");
      const Matrix s = cascaded_activation(unvec(z, n, n), params.sinkhorn,
                                           tape != nullptr ? &tape->sinkhorn : nullptr, ops);
      out = vec(s);
    } else {
      out = apply_elementwise(z, l.activation);
      if (ops != nullptr) {
        const auto k = static_cast<std::uint64_t>(z.size());
        if (l.activation == Activation::kRelu) ops->comparisons += k;
        if (l.activation == Activation::kSigmoid) {
          ops->transcendentals += k;
          ops->adds += k;
          ops->divs += k;
        }
      }
    }
    if (tape != nullptr) {
      tape->pre.push_back(std::move(z));
      tape->post.push_back(out);
    }
    h = std::move(out);
  }
  return h;
}

Gradients backward(const MlpParams& params, const ForwardTape& tape, const Vector& output_grad,
                   Vector* input_grad) {
  if (!tape.recorded) throw StateError("backward: forward pass was not recorded");
  if (tape.pre.size() != params.layers.size()) throw StateError("backward: tape/params mismatch");
  if (output_grad.size() != params.output_dim()) {
    std::ostringstream msg;
    msg << "backward: output gradient length " << output_grad.size() << " != "
        << params.output_dim();
    throw ShapeError(msg.str());
  }
  Gradients grads = Gradients::zeros_like(params);
  Vector d = output_grad;
  for (std::size_t r = params.layers.size(); r-- > 0;) {
    const Layer& l = params.layers[r];
    Vector dz;
    if (l.activation == Activation::kSinkhorn) {
      const Eigen::Index n = tape.sinkhorn.n;
      dz = vec(sinkhorn_backward(tape.sinkhorn, unvec(d, n, n)));
    } else {
      dz = elementwise_backward(d, tape.pre[r], tape.post[r], l.activation);
    }
    const Vector& h_prev = r == 0 ? tape.input : tape.post[r - 1];
    grads.layers[r].weight.noalias() = dz * h_prev.transpose();
    grads.layers[r].bias = dz;
    d = l.weight.transpose() * dz;
  }
  if (input_grad != nullptr) *input_grad = std::move(d);
  return grads;
}

Batch forward_batch(const MlpParams& params, const Batch& inputs, BatchTape* tape) {
  check_input(params, inputs.rows());
  const Eigen::Index b = inputs.cols();
  if (tape != nullptr) {
    *tape = BatchTape{};
    tape->recorded = true;
    tape->input = inputs;
  }
  Batch h = inputs;
  for (const Layer& l : params.layers) {
    Batch z = l.weight * h;
    z.colwise() += l.bias;
    Batch out;
    if (l.activation == Activation::kSinkhorn) {
      const Eigen::Index n = square_side(z.rows());
      if (n < 0) throw ShapeError("forward_batch: Sinkhorn layer width must be a perfect square");
      out.resize(z.rows(), b);
      if (tape != nullptr) tape->sinkhorn.resize(static_cast<std::size_t>(b));
      for (Eigen::Index c = 0; c < b; ++c) {
        SinkhornTape* st = tape != nullptr ? &tape->sinkhorn[static_cast<std::size_t>(c)] : nullptr;
        out.col(c) = vec(cascaded_activation(unvec(z.col(c), n, n), params.sinkhorn, st));
      }
    } else {
      out = apply_elementwise(z, l.activation);
    }
    if (tape != nullptr) {
      tape->pre.push_back(std::move(z));
      tape->post.push_back(out);
    }
    h = std::move(out);
  }
  return h;
}

Gradients backward_batch(const MlpParams& params, const BatchTape& tape, const Batch& output_grads,
                         Batch* input_grads) {
  if (!tape.recorded) throw StateError("backward_batch: forward pass was not recorded");
  if (tape.pre.size() != params.layers.size())
    throw StateError("backward_batch: tape/params mismatch");
  if (output_grads.rows() != params.output_dim() || output_grads.cols() != tape.input.cols())
    throw ShapeError("backward_batch: output gradient shape mismatch");
  Gradients grads = Gradients::zeros_like(params);
  Batch d = output_grads;
  for (std::size_t r = params.layers.size(); r-- > 0;) {
    const Layer& l = params.layers[r];
    Batch dz;
    if (l.activation == Activation::kSinkhorn) {
      dz.resize(d.rows(), d.cols());
      for (Eigen::Index c = 0; c < d.cols(); ++c) {
        const SinkhornTape& st = tape.sinkhorn[static_cast<std::size_t>(c)];
        dz.col(c) = vec(sinkhorn_backward(st, unvec(d.col(c), st.n, st.n)));
      }
    } else {
      dz = elementwise_backward(d, tape.pre[r], tape.post[r], l.activation);
    }
    const Batch& h_prev = r == 0 ? tape.input : tape.post[r - 1];
    grads.layers[r].weight.noalias() = dz * h_prev.transpose();
    grads.layers[r].bias = dz.rowwise().sum();
    if (r > 0 || input_grads != nullptr) d.noalias() = l.weight.transpose() * dz;
  }
  if (input_grads != nullptr) *input_grads = std::move(d);
  return grads;
}

void apply_sgd(MlpParams& params, const Gradients& grad_sum, double eta, std::size_t batch_size) {
  if (batch_size == 0) throw std::invalid_argument("sgd: empty batch");
  if (!(eta >= 0.0)) throw std::invalid_argument("sgd: learning rate must be >= 0");
  if (grad_sum.layers.size() != params.layers.size())
    throw ShapeError("sgd: gradient/parameter layer count mismatch");
  const double step = eta / static_cast<double>(batch_size);
  for (std::size_t r = 0; r < params.layers.size(); ++r) {
    Layer& l = params.layers[r];
    const LayerGrad& g = grad_sum.layers[r];
    if (g.weight.rows() != l.weight.rows() || g.weight.cols() != l.weight.cols() ||
        g.bias.size() != l.bias.size())
      throw ShapeError("sgd: gradient/parameter shape mismatch");
    if (step == 0.0) continue;
    l.weight -= step * g.weight;
    l.bias -= step * g.bias;
  }
}

MlpParams sgd_step(const MlpParams& params, std::span<const Gradients> batch_grads, double eta) {
  if (batch_grads.empty()) throw std::invalid_argument("sgd_step: empty batch");
  Gradients sum = Gradients::zeros_like(params);
  for (const Gradients& g : batch_grads) sum += g;
  MlpParams out = params;
  apply_sgd(out, sum, eta, batch_grads.size());
  return out;
}

MlpParams init_params(std::span<const int> dims, std::span<const Activation> activations,
                      std::uint64_t seed) {
  if (dims.size() < 2) throw std::invalid_argument("init_params: need at least two layer sizes");
  if (activations.size() != dims.size() - 1)
    throw std::invalid_argument("init_params: need one activation per layer");
  for (int d : dims)
    if (d < 1) throw std::invalid_argument("init_params: layer sizes must be positive");
  std::mt19937_64 rng(seed);
  MlpParams params;
  for (std::size_t r = 1; r < dims.size(); ++r) {
    const double limit = std::sqrt(6.0 / static_cast<double>(dims[r] + dims[r - 1]));
    std::uniform_real_distribution<double> dist(-limit, limit);
    Layer l;
    l.weight.resize(dims[r], dims[r - 1]);
    for (Eigen::Index k = 0; k < l.weight.size(); ++k) l.weight.data()[k] = dist(rng);
    l.bias = Vector::Zero(dims[r]);
    l.activation = activations[r - 1];
    params.layers.push_back(std::move(l));
  }
  params.validate();
  return params;
}

}  // namespace snn
