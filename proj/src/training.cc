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

#include "snn/training.h"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "snn/errors.h"

namespace snn {
namespace {

enum StreamTag : std::uint64_t {
  kTrainStream = 1,
  kValidationStream = 2,
  kTestStream = 3,
  kScalingStream = 4,
  kInitStream = 5,
};

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag)};
  return std::mt19937_64(seq);
}

MlpParams init_mlp(int in, const std::vector<int>& hidden, int out, Activation last,
                   std::uint64_t seed) {
  std::vector<int> dims;
  dims.push_back(in);
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(out);
  std::vector<Activation> acts(dims.size() - 1, Activation::kRelu);
  acts.back() = last;
  return init_params(dims, acts, seed);
}

bool finite(const Gradients& g) {
  for (const LayerGrad& l : g.layers)
    if (!all_finite(l.weight) || !all_finite(l.bias)) return false;
  return true;
}

// Scored on the padded cost, the same summation the Hungarian value uses.
double lsap_hard_cost(const LsapModel& model, const AssignmentInstance& inst) {
  return linear_cost(padded_cost(inst), predict_lsap(model, inst));
}

double lsap_soft_cost(const LsapModel& model, const AssignmentInstance& inst) {
  return lsap_cost(inst, truncate_square_output(forward_lsap(model, inst), inst.m));
}

void check_lsap_instance(const LsapModel& model, const AssignmentInstance& inst) {
  if (inst.n != model.n || inst.m != model.m || inst.cost.rows() != model.n ||
      inst.cost.cols() != model.m)
    throw ConfigError("LSAP instance shape does not match the model");
}

void check_scenario(const JointModel& model, const CellScenario& scn) {
  if (scn.n != model.n || scn.gain.rows() != model.n || scn.gain.cols() != model.n)
    throw ConfigError("cell scenario size does not match the model");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_vector(std::ostream& out, const char* key, const Vector& v) {
  out << key << ' ' << v.size();
  for (Eigen::Index k = 0; k < v.size(); ++k) out << ' ' << fmt(v[k]);
  out << '\n';
}

}  // namespace

std::string_view problem_name(Problem p) { return p == Problem::kLsap ? "lsap" : "cell"; }

Problem parse_problem(std::string_view name) {
  if (name == "lsap") return Problem::kLsap;
  if (name == "cell") return Problem::kCell;
  throw std::invalid_argument("unknown problem '" + std::string(name) + "'");
}

void TrainConfig::validate() const {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(n >= 1, "n must be >= 1");
  require(learning_rate > 0.0 && std::isfinite(learning_rate), "learning rate must be > 0");
  require(batch_size >= 1, "batch size must be >= 1");
  require(total_iterations >= 0, "iterations must be >= 0");
  require(validation_size >= 1 && test_size >= 1, "validation and test sizes must be >= 1");
  require(validation_period >= 1, "validation period must be >= 1");
  if (problem == Problem::kLsap) {
    require(m >= 1 && m <= n, "LSAP needs n >= m >= 1");
  } else {
    require(n >= 2, "cell association needs n >= 2");
    require(standardization_samples >= 2, "need at least two standardization samples");
  }
  try {
    sinkhorn.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  for (const auto* dims : {&lsap_hidden, &shared_hidden, &assignment_hidden, &power_hidden})
    for (int d : *dims) require(d >= 1, "hidden layer sizes must be >= 1");
}

Vector InputScaling::apply(const Vector& raw) const {
  if (raw.size() != mean.size()) throw ShapeError("input scaling: feature count mismatch");
  return ((raw - mean).array() / scale.array()).matrix();
}

Problem model_problem(const Model& model) {
  return std::holds_alternative<LsapModel>(model) ? Problem::kLsap : Problem::kCell;
}

LsapModel init_lsap_model(const TrainConfig& cfg) {
  cfg.validate();
  LsapModel model;
  model.n = cfg.n;
  model.m = cfg.m;
  const int k = cfg.n * cfg.m;
  // Moments of U[1, 100].
  model.scaling.mean = Vector::Constant(k, 0.5 * (kLsapCostMin + kLsapCostMax));
  model.scaling.scale = Vector::Constant(k, (kLsapCostMax - kLsapCostMin) / std::sqrt(12.0));
  std::mt19937_64 rng = stream(cfg.seed, kInitStream);
  model.net = init_mlp(k, cfg.lsap_hidden, cfg.n * cfg.n, Activation::kSinkhorn, rng());
  model.net.sinkhorn = cfg.sinkhorn;
  return model;
}

JointModel init_joint_model(const TrainConfig& cfg) {
  cfg.validate();
  if (cfg.problem != Problem::kCell) throw ConfigError("joint model needs the cell problem");
  JointModel model;
  model.n = cfg.n;
  const int k = cfg.n * cfg.n;

  std::mt19937_64 srng = stream(cfg.seed, kScalingStream);
  Vector sum = Vector::Zero(k), sq = Vector::Zero(k);
  for (int s = 0; s < cfg.standardization_samples; ++s) {
    const CellScenario scn = gen_cell_scenario(cfg.n, cfg.p_macro_dbm, cfg.p_small_dbm, srng);
    const Vector f = vec(scn.gain).array().log10().matrix();
    sum += f;
    sq += f.cwiseAbs2();
  }
  const double count = cfg.standardization_samples;
  model.scaling.mean = sum / count;
  const Vector var = (sq / count - model.scaling.mean.cwiseAbs2()) * (count / (count - 1.0));
  model.scaling.scale = var.cwiseMax(1e-12).cwiseSqrt();

  std::mt19937_64 rng = stream(cfg.seed, kInitStream);
  const int width = cfg.shared_hidden.back();
  std::vector<int> trunk(cfg.shared_hidden.begin(), cfg.shared_hidden.end() - 1);
  model.shared = init_mlp(k, trunk, width, Activation::kRelu, rng());
  model.assignment_head = init_mlp(width, cfg.assignment_hidden, k, Activation::kSinkhorn, rng());
  model.assignment_head.sinkhorn = cfg.sinkhorn;
  model.power_head = init_mlp(width, cfg.power_hidden, cfg.n, Activation::kSigmoid, rng());
  return model;
}

Model init_model(const TrainConfig& cfg) {
  if (cfg.problem == Problem::kLsap) return init_lsap_model(cfg);
  return init_joint_model(cfg);
}

Vector lsap_features(const LsapModel& model, const AssignmentInstance& inst) {
  check_lsap_instance(model, inst);
  return model.scaling.apply(vec(inst.cost));
}

Vector cell_features(const JointModel& model, const CellScenario& scn) {
  check_scenario(model, scn);
  return model.scaling.apply(vec(scn.gain).array().log10().matrix());
}

Matrix forward_lsap(const LsapModel& model, const AssignmentInstance& inst) {
  return unvec(forward(model.net, lsap_features(model, inst)), model.n, model.n);
}

JointOutput forward_joint(const JointModel& model, const CellScenario& scn) {
  if (scn.n != model.n || scn.gain.rows() != model.n || scn.gain.cols() != model.n)
    throw ShapeError("forward_joint: scenario size does not match the model");
  const Vector h = forward(model.shared, cell_features(model, scn));
  JointOutput out;
  out.x_soft = unvec(forward(model.assignment_head, h), model.n, model.n);
  out.power = forward(model.power_head, h).cwiseProduct(scn.power_budget);
  return out;
}

Gradients lsap_loss_grad(const LsapModel& model, const std::vector<AssignmentInstance>& batch,
                         double* mean_cost) {
  const auto b = static_cast<Eigen::Index>(batch.size());
  if (b == 0) throw std::invalid_argument("lsap_loss_grad: empty batch");
  Batch inputs(model.n * model.m, b);
  for (Eigen::Index c = 0; c < b; ++c) inputs.col(c) = lsap_features(model, batch[c]);
  BatchTape tape;
  const Batch out = forward_batch(model.net, inputs, &tape);
  Batch grads(out.rows(), b);
  double total = 0.0;
  for (Eigen::Index c = 0; c < b; ++c) {
    const AssignmentInstance& inst = batch[c];
    const Matrix x = truncate_square_output(unvec(out.col(c), model.n, model.n), model.m);
    total += lsap_cost(inst, x);
    grads.col(c) = vec(truncate_backward(lsap_cost_grad(inst, x) / kLsapCostScale, model.n));
  }
  if (mean_cost != nullptr) *mean_cost = total / static_cast<double>(b);
  return backward_batch(model.net, tape, grads);
}

JointGradients joint_loss_grad(const JointModel& model, const std::vector<CellScenario>& batch,
                               double* mean_loss) {
  const auto b = static_cast<Eigen::Index>(batch.size());
  if (b == 0) throw std::invalid_argument("joint_loss_grad: empty batch");
  const int n = model.n;
  Batch inputs(n * n, b);
  for (Eigen::Index c = 0; c < b; ++c) inputs.col(c) = cell_features(model, batch[c]);
  BatchTape shared_tape, assign_tape, power_tape;
  const Batch h = forward_batch(model.shared, inputs, &shared_tape);
  const Batch x = forward_batch(model.assignment_head, h, &assign_tape);
  const Batch o = forward_batch(model.power_head, h, &power_tape);

  Batch dx(x.rows(), b), dout(o.rows(), b);
  double total = 0.0;
  for (Eigen::Index c = 0; c < b; ++c) {
    const CellScenario& scn = batch[c];
    const Matrix xs = unvec(x.col(c), n, n);
    const PowerVector p = o.col(c).cwiseProduct(scn.power_budget);
    total -= sum_rate(scn, xs, p);
    const SumRateGrad g = sum_rate_grad(scn, xs, p);
    dx.col(c) = -vec(g.dx);
    dout.col(c) = -g.dp.cwiseProduct(scn.power_budget);
  }
  if (mean_loss != nullptr) *mean_loss = total / static_cast<double>(b);

  JointGradients grads;
  Batch dh_assign, dh_power;
  grads.assignment_head = backward_batch(model.assignment_head, assign_tape, dx, &dh_assign);
  grads.power_head = backward_batch(model.power_head, power_tape, dout, &dh_power);
  grads.shared = backward_batch(model.shared, shared_tape, dh_assign + dh_power);
  return grads;
}

Permutation predict_lsap(const LsapModel& model, const AssignmentInstance& inst) {
  return harden(forward_lsap(model, inst));
}

Matrix predict_lsap_matrix(const LsapModel& model, const AssignmentInstance& inst) {
  return truncate_square_output(predict_lsap(model, inst).matrix(), model.m);
}

JointSolution predict_cell(const JointModel& model, const CellScenario& scn) {
  const JointOutput out = forward_joint(model, scn);
  JointSolution sol;
  sol.assignment = harden(out.x_soft);
  sol.power = out.power;
  sol.sum_rate = sum_rate(scn, sol.assignment.matrix(), sol.power);
  return sol;
}

double validation_cost(const Model& model, const std::vector<AssignmentInstance>& lsap,
                       const std::vector<CellScenario>& cell) {
  double total = 0.0;
  if (const auto* m = std::get_if<LsapModel>(&model)) {
    if (lsap.empty()) throw std::invalid_argument("validation_cost: empty LSAP set");
    for (const AssignmentInstance& inst : lsap) total += lsap_hard_cost(*m, inst);
    return total / static_cast<double>(lsap.size());
  }
  const auto& jm = std::get<JointModel>(model);
  if (cell.empty()) throw std::invalid_argument("validation_cost: empty cell set");
  for (const CellScenario& scn : cell) total -= predict_cell(jm, scn).sum_rate;
  return total / static_cast<double>(cell.size());
}

std::vector<AssignmentInstance> lsap_eval_set(const TrainConfig& cfg, int count, bool test) {
  std::mt19937_64 rng = stream(cfg.seed, test ? kTestStream : kValidationStream);
  std::vector<AssignmentInstance> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out.push_back(gen_lsap(cfg.n, cfg.m, rng));
  return out;
}

std::vector<CellScenario> cell_eval_set(const TrainConfig& cfg, int count, bool test) {
  std::mt19937_64 rng = stream(cfg.seed, test ? kTestStream : kValidationStream);
  std::vector<CellScenario> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k)
    out.push_back(gen_cell_scenario(cfg.n, cfg.p_macro_dbm, cfg.p_small_dbm, rng));
  return out;
}

TrainResult train(const TrainConfig& cfg) {
  cfg.validate();
  Model model = init_model(cfg);
  const bool is_lsap = cfg.problem == Problem::kLsap;
  std::vector<AssignmentInstance> val_lsap;
  std::vector<CellScenario> val_cell;
  if (is_lsap) {
    val_lsap = lsap_eval_set(cfg, cfg.validation_size, false);
  } else {
    val_cell = cell_eval_set(cfg, cfg.validation_size, false);
  }

  TrainResult result;
  double best = validation_cost(model, val_lsap, val_cell);
  {
    double soft = 0.0;
    if (is_lsap) {
      for (const AssignmentInstance& inst : val_lsap)
        soft += lsap_soft_cost(std::get<LsapModel>(model), inst);
      soft /= static_cast<double>(val_lsap.size());
    } else {
      for (const CellScenario& scn : val_cell) {
        const JointOutput o = forward_joint(std::get<JointModel>(model), scn);
        soft -= sum_rate(scn, o.x_soft, o.power);
      }
      soft /= static_cast<double>(val_cell.size());
    }
    result.log.push_back({0, soft, best, best});
  }
  result.best = model;

  std::mt19937_64 rng = stream(cfg.seed, kTrainStream);
  const auto bsize = static_cast<std::size_t>(cfg.batch_size);
  double loss_sum = 0.0;
  int loss_count = 0;
  for (int it = 1; it <= cfg.total_iterations; ++it) {
    double loss = 0.0;
    if (is_lsap) {
      auto& m = std::get<LsapModel>(model);
      std::vector<AssignmentInstance> batch;
      batch.reserve(bsize);
      for (std::size_t k = 0; k < bsize; ++k) batch.push_back(gen_lsap(cfg.n, cfg.m, rng));
      Gradients g;
      try {
        g = lsap_loss_grad(m, batch, &loss);
      } catch (const NumericError& e) {
        throw DivergenceError("training diverged at iteration " + std::to_string(it) + ": " +
                                  e.what(),
                              it);
      }
      if (!std::isfinite(loss) || !finite(g))
        throw DivergenceError("training diverged at iteration " + std::to_string(it), it);
      apply_sgd(m.net, g, cfg.learning_rate, bsize);
    } else {
      auto& m = std::get<JointModel>(model);
      std::vector<CellScenario> batch;
      batch.reserve(bsize);
      for (std::size_t k = 0; k < bsize; ++k)
        batch.push_back(gen_cell_scenario(cfg.n, cfg.p_macro_dbm, cfg.p_small_dbm, rng));
      JointGradients g;
      try {
        g = joint_loss_grad(m, batch, &loss);
      } catch (const NumericError& e) {
        throw DivergenceError("training diverged at iteration " + std::to_string(it) + ": " +
                                  e.what(),
                              it);
      }
      if (!std::isfinite(loss) || !finite(g.shared) || !finite(g.assignment_head) ||
          !finite(g.power_head))
        throw DivergenceError("training diverged at iteration " + std::to_string(it), it);
      apply_sgd(m.shared, g.shared, cfg.learning_rate, bsize);
      apply_sgd(m.assignment_head, g.assignment_head, cfg.learning_rate, bsize);
      apply_sgd(m.power_head, g.power_head, cfg.learning_rate, bsize);
    }
    loss_sum += loss;
    ++loss_count;
    if (it % cfg.validation_period == 0 || it == cfg.total_iterations) {
      double val = NAN;
      try {
        val = validation_cost(model, val_lsap, val_cell);
      } catch (const NumericError&) {
      }
      if (!std::isfinite(val))
        throw DivergenceError("validation cost diverged at iteration " + std::to_string(it), it);
      if (val < best) {
        best = val;
        result.best = model;
      }
      result.log.push_back({it, loss_sum / loss_count, val, best});
      loss_sum = 0.0;
      loss_count = 0;
    }
  }
  return result;
}

void write_log_csv(std::ostream& out, const std::vector<LogRow>& log) {
  out << "iteration,trainLoss,valCost,bestSoFar\n";
  for (const LogRow& r : log)
    out << r.iteration << ',' << fmt(r.train_loss) << ',' << fmt(r.val_cost) << ','
        << fmt(r.best_so_far) << '\n';
}

Metrics evaluate_lsap(const LsapModel& model, const std::vector<AssignmentInstance>& test_set) {
  if (test_set.empty()) throw std::invalid_argument("evaluate: empty test set");
  Metrics mt;
  double degradation = 0.0;
  int feasible = 0;
  for (const AssignmentInstance& inst : test_set) {
    const Permutation perm = predict_lsap(model, inst);
    const Matrix x = truncate_square_output(perm.matrix(), inst.m);
    bool ok = satisfies_unbalanced_constraints(x);
    if (inst.balanced())
      for (Eigen::Index i = 0; ok && i < x.rows(); ++i) ok = x.row(i).sum() == 1.0;
    feasible += ok ? 1 : 0;
    const double cost = linear_cost(padded_cost(inst), perm);
    const double best = hungarian_min(padded_cost(inst)).value;
    mt.mean_objective += cost;
    mt.oracle_mean_objective += best;
    degradation += (cost - best) / best;
  }
  const double count = static_cast<double>(test_set.size());
  mt.instances = static_cast<int>(test_set.size());
  mt.mean_objective /= count;
  mt.oracle_mean_objective /= count;
  mt.degradation_percent = 100.0 * degradation / count;
  mt.feasible_fraction = feasible / count;
  return mt;
}

Metrics evaluate_cell(const JointModel& model, const std::vector<CellScenario>& test_set) {
  if (test_set.empty()) throw std::invalid_argument("evaluate: empty test set");
  Metrics mt;
  double degradation = 0.0;
  int feasible = 0;
  for (const CellScenario& scn : test_set) {
    const JointSolution sol = predict_cell(model, scn);
    const bool ok = sol.assignment.valid() && (sol.power.array() >= 0.0).all() &&
                    (sol.power.array() <= scn.power_budget.array()).all();
    feasible += ok ? 1 : 0;
    const double best = joint_brute_oracle(scn).sum_rate;
    mt.mean_objective += sol.sum_rate;
    mt.oracle_mean_objective += best;
    degradation += (best - sol.sum_rate) / best;
  }
  const double count = static_cast<double>(test_set.size());
  mt.instances = static_cast<int>(test_set.size());
  mt.mean_objective /= count;
  mt.oracle_mean_objective /= count;
  mt.degradation_percent = 100.0 * degradation / count;
  mt.feasible_fraction = feasible / count;
  return mt;
}

Metrics evaluate_hungarian(const std::vector<AssignmentInstance>& test_set) {
  if (test_set.empty()) throw std::invalid_argument("evaluate: empty test set");
  Metrics mt;
  double degradation = 0.0;
  int feasible = 0;
  for (const AssignmentInstance& inst : test_set) {
    const Assignment a = hungarian_min(padded_cost(inst));
    const Matrix x = truncate_square_output(a.perm.matrix(), inst.m);
    feasible += satisfies_unbalanced_constraints(x) ? 1 : 0;
    const double cost = linear_cost(padded_cost(inst), a.perm);
    const double best = a.value;
    mt.mean_objective += cost;
    mt.oracle_mean_objective += best;
    degradation += (cost - best) / best;
  }
  const double count = static_cast<double>(test_set.size());
  mt.instances = static_cast<int>(test_set.size());
  mt.mean_objective /= count;
  mt.oracle_mean_objective /= count;
  mt.degradation_percent = 100.0 * degradation / count;
  mt.feasible_fraction = feasible / count;
  return mt;
}

OpCounter inference_ops(const Model& model) {
  OpCounter ops;
  if (const auto* m = std::get_if<LsapModel>(&model)) {
    forward(m->net, Vector::Zero(m->net.input_dim()), nullptr, &ops);
    return ops;
  }
  const auto& jm = std::get<JointModel>(model);
  const Vector h = forward(jm.shared, Vector::Zero(jm.shared.input_dim()), nullptr, &ops);
  forward(jm.assignment_head, h, nullptr, &ops);
  forward(jm.power_head, h, nullptr, &ops);
  ops.muls += static_cast<std::uint64_t>(jm.n);  // budget scaling
  return ops;
}

void write_model(std::ostream& out, const Model& model) {
  const bool is_lsap = std::holds_alternative<LsapModel>(model);
  const InputScaling& sc =
      is_lsap ? std::get<LsapModel>(model).scaling : std::get<JointModel>(model).scaling;
  const SinkhornConfig& sk = is_lsap ? std::get<LsapModel>(model).net.sinkhorn
                                     : std::get<JointModel>(model).assignment_head.sinkhorn;
  const int n = is_lsap ? std::get<LsapModel>(model).n : std::get<JointModel>(model).n;
  const int m = is_lsap ? std::get<LsapModel>(model).m : n;
  out << "META\n"
      << "problem " << problem_name(model_problem(model)) << '\n'
      << "n " << n << '\n'
      << "m " << m << '\n'
      << "tau " << fmt(sk.tau) << '\n'
      << "cascades " << sk.cascades << '\n'
      << "iterations " << sk.total_iterations << '\n';
  write_vector(out, "input_mean", sc.mean);
  write_vector(out, "input_scale", sc.scale);
  out << "END\n";
  if (is_lsap) {
    write_params(out, std::get<LsapModel>(model).net);
  } else {
    const auto& jm = std::get<JointModel>(model);
    write_params(out, jm.shared);
    write_params(out, jm.assignment_head);
    write_params(out, jm.power_head);
  }
}

Model read_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "META") throw ConfigError("model: missing META block");
  std::string problem;
  int n = 0, m = 0;
  SinkhornConfig sk;
  InputScaling sc;
  bool done = false;
  while (std::getline(in, line)) {
    if (line == "END") {
      done = true;
      break;
    }
    std::istringstream s(line);
    std::string key;
    s >> key;
    bool ok = true;
    if (key == "problem") {
      ok = static_cast<bool>(s >> problem);
    } else if (key == "n") {
      ok = static_cast<bool>(s >> n);
    } else if (key == "m") {
      ok = static_cast<bool>(s >> m);
    } else if (key == "tau") {
      ok = static_cast<bool>(s >> sk.tau);
    } else if (key == "cascades") {
      ok = static_cast<bool>(s >> sk.cascades);
    } else if (key == "iterations") {
      ok = static_cast<bool>(s >> sk.total_iterations);
    } else if (key == "input_mean" || key == "input_scale") {
      long len = 0;
      ok = static_cast<bool>(s >> len) && len >= 1 && len <= 1 << 20;
      Vector v(ok ? len : 0);
      std::string tok;
      for (long k = 0; ok && k < len; ++k) {
        ok = static_cast<bool>(s >> tok);
        char* end = nullptr;
        if (ok) v[k] = std::strtod(tok.c_str(), &end);
        ok = ok && end != tok.c_str() && *end == '\0';
      }
      (key == "input_mean" ? sc.mean : sc.scale) = v;
    } else {
      throw ConfigError("model: unknown META key '" + key + "'");
    }
    if (!ok) throw ConfigError("model: bad META line '" + line + "'");
  }
  if (!done) throw ConfigError("model: META block not terminated");
  try {
    sk.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  if (n < 1 || m < 1 || m > n) throw ConfigError("model: bad n/m");

  if (problem == "lsap") {
    LsapModel model;
    model.n = n;
    model.m = m;
    model.scaling = sc;
    model.net = read_params(in);
    model.net.sinkhorn = sk;
    if (sc.mean.size() != n * m || sc.scale.size() != n * m ||
        model.net.input_dim() != n * m || model.net.output_dim() != n * n ||
        !model.net.sinkhorn_output())
      throw ConfigError("model: LSAP network does not match META shapes");
    return model;
  }
  if (problem == "cell") {
    JointModel model;
    model.n = n;
    model.scaling = sc;
    model.shared = read_params(in);
    model.assignment_head = read_params(in);
    model.assignment_head.sinkhorn = sk;
    model.power_head = read_params(in);
    const auto k = static_cast<Eigen::Index>(n) * n;
    if (m != n || sc.mean.size() != k || sc.scale.size() != k || model.shared.input_dim() != k ||
        model.assignment_head.input_dim() != model.shared.output_dim() ||
        model.power_head.input_dim() != model.shared.output_dim() ||
        model.assignment_head.output_dim() != k || !model.assignment_head.sinkhorn_output() ||
        model.power_head.output_dim() != n ||
        model.power_head.layers.back().activation != Activation::kSigmoid)
      throw ConfigError("model: joint networks do not match META shapes");
    return model;
  }
  throw ConfigError("model: unknown problem '" + problem + "'");
}

}  // namespace snn
