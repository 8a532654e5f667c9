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

#ifndef SNN_TRAINING_H_
#define SNN_TRAINING_H_

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <variant>
#include <vector>

#include "snn/assignment.h"
#include "snn/cell.h"
#include "snn/lsap.h"
#include "snn/nn.h"
#include "snn/op_counter.h"

namespace snn {

enum class Problem { kLsap, kCell };

std::string_view problem_name(Problem p);
// Throws std::invalid_argument for anything but "lsap" or "cell".
Problem parse_problem(std::string_view name);

// Network costs are divided by this before they drive the gradient.
inline constexpr double kLsapCostScale = 100.0;

struct TrainConfig {
  Problem problem = Problem::kLsap;
  int n = 4;
  int m = 4;  // LSAP jobs; ignored for cell
  double learning_rate = 1e-3;
  int batch_size = 256;
  int total_iterations = 20000;
  int validation_size = 1000;
  int test_size = 1000;
  int validation_period = 500;
  std::uint64_t seed = 0;
  SinkhornConfig sinkhorn;
  double p_macro_dbm = 20.0;
  double p_small_dbm = 10.0;
  int standardization_samples = 10000;  // cell only
  std::vector<int> lsap_hidden = {288, 144, 80};
  std::vector<int> shared_hidden = {576, 432};
  std::vector<int> assignment_hidden = {360, 216, 144};
  std::vector<int> power_hidden = {288, 144};

  // Throws ConfigError.
  void validate() const;
};

// Per-feature affine input map, (feature - mean) / scale.
struct InputScaling {
  Vector mean;
  Vector scale;

  Vector apply(const Vector& raw) const;
};

struct LsapModel {
  int n = 0;
  int m = 0;
  InputScaling scaling;  // on raw costs
  MlpParams net;         // N*M -> ... -> N^2, Sinkhorn output
};

struct JointModel {
  int n = 0;
  InputScaling scaling;  // on log10 channel gains
  MlpParams shared;
  MlpParams assignment_head;  // Sinkhorn output
  MlpParams power_head;       // sigmoid output, scaled by budgets
};

using Model = std::variant<LsapModel, JointModel>;

Problem model_problem(const Model& model);

LsapModel init_lsap_model(const TrainConfig& cfg);
JointModel init_joint_model(const TrainConfig& cfg);
Model init_model(const TrainConfig& cfg);

// Network input for an instance: scaled vec(H), column-major.
Vector lsap_features(const LsapModel& model, const AssignmentInstance& inst);
Vector cell_features(const JointModel& model, const CellScenario& scn);

// Square soft output (N x N) before truncation.
Matrix forward_lsap(const LsapModel& model, const AssignmentInstance& inst);

struct JointOutput {
  Matrix x_soft;
  PowerVector power;
};
JointOutput forward_joint(const JointModel& model, const CellScenario& scn);

struct JointGradients {
  Gradients shared;
  Gradients assignment_head;
  Gradients power_head;
};

// Sum over the batch of the gradient of -sum_rate(x_soft, p); also returns the mean loss.
JointGradients joint_loss_grad(const JointModel& model, const std::vector<CellScenario>& batch,
                               double* mean_loss = nullptr);
// Sum over the batch of the gradient of tr(H^T X) / kLsapCostScale.
Gradients lsap_loss_grad(const LsapModel& model, const std::vector<AssignmentInstance>& batch,
                         double* mean_cost = nullptr);

struct LogRow {
  int iteration = 0;
  double train_loss = 0.0;  // mean soft objective of the step's batch, NaN at iteration 0
  double val_cost = 0.0;    // mean hardened objective on the validation set (lower is better)
  double best_so_far = 0.0;
};

struct TrainResult {
  Model best;
  std::vector<LogRow> log;
};

// Throws ConfigError for a bad config and DivergenceError on a non-finite loss.
TrainResult train(const TrainConfig& cfg);

void write_log_csv(std::ostream& out, const std::vector<LogRow>& log);

// Hard decisions for one instance.
Permutation predict_lsap(const LsapModel& model, const AssignmentInstance& inst);
// N x M 0/1 matrix, the square hard output with its last N - M columns dropped.
Matrix predict_lsap_matrix(const LsapModel& model, const AssignmentInstance& inst);
JointSolution predict_cell(const JointModel& model, const CellScenario& scn);

// Validation objective, lower is better: mean cost (LSAP) or mean negated sum rate (cell).
double validation_cost(const Model& model, const std::vector<AssignmentInstance>& lsap,
                       const std::vector<CellScenario>& cell);

struct Metrics {
  int instances = 0;
  double mean_objective = 0.0;         // cost (LSAP) or sum rate (cell)
  double oracle_mean_objective = 0.0;
  double degradation_percent = 0.0;    // mean per-instance relative loss vs the oracle
  double feasible_fraction = 0.0;
};

// Oracle: Hungarian on the zero-padded cost.
Metrics evaluate_lsap(const LsapModel& model, const std::vector<AssignmentInstance>& test_set);
// Oracle: joint_brute_oracle, so N <= kJointOracleLimit.
Metrics evaluate_cell(const JointModel& model, const std::vector<CellScenario>& test_set);
// Hungarian scored against itself.
Metrics evaluate_hungarian(const std::vector<AssignmentInstance>& test_set);

// Operation count of one inference forward pass.
OpCounter inference_ops(const Model& model);

// Held-out sets drawn from streams independent of the training stream.
std::vector<AssignmentInstance> lsap_eval_set(const TrainConfig& cfg, int count, bool test);
std::vector<CellScenario> cell_eval_set(const TrainConfig& cfg, int count, bool test);

// Checkpoint: a META block followed by one SNNCKPT block per network. Throws ConfigError.
void write_model(std::ostream& out, const Model& model);
Model read_model(std::istream& in);

}  // namespace snn

#endif  // SNN_TRAINING_H_
