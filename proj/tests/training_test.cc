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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "snn/errors.h"
#include "test_util.h"

namespace snn {
namespace {

using testing::central_difference;
using testing::relative_error;

TrainConfig small_lsap(int n, int m) {
  TrainConfig cfg;
  cfg.problem = Problem::kLsap;
  cfg.n = n;
  cfg.m = m;
  cfg.batch_size = 16;
  cfg.total_iterations = 30;
  cfg.validation_size = 50;
  cfg.validation_period = 10;
  cfg.test_size = 50;
  cfg.lsap_hidden = {24, 12};
  cfg.seed = 3;
  return cfg;
}

TrainConfig small_cell(int n) {
  TrainConfig cfg;
  cfg.problem = Problem::kCell;
  cfg.n = n;
  cfg.batch_size = 8;
  cfg.total_iterations = 10;
  cfg.validation_size = 20;
  cfg.validation_period = 5;
  cfg.test_size = 20;
  cfg.standardization_samples = 200;
  cfg.shared_hidden = {10, 8};
  cfg.assignment_hidden = {7};
  cfg.power_hidden = {6};
  cfg.sinkhorn = {5.0, 2, 8};
  cfg.seed = 4;
  return cfg;
}

std::string checkpoint(const Model& m) {
  std::ostringstream s;
  write_model(s, m);
  return s.str();
}

TEST(ConfigTest, Validation) {
  EXPECT_NO_THROW(TrainConfig{}.validate());
  TrainConfig cfg;
  cfg.learning_rate = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = TrainConfig{};
  cfg.m = 5;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = TrainConfig{};
  cfg.batch_size = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = TrainConfig{};
  cfg.sinkhorn.cascades = 3;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(ProblemTest, Names) {
  EXPECT_EQ(parse_problem("lsap"), Problem::kLsap);
  EXPECT_EQ(parse_problem("cell"), Problem::kCell);
  EXPECT_EQ(problem_name(Problem::kCell), "cell");
  EXPECT_THROW(parse_problem("tsp"), std::invalid_argument);
}

TEST(ModelTest, LsapArchitecture) {
  TrainConfig cfg;
  cfg.n = 4;
  cfg.m = 2;
  const LsapModel m = init_lsap_model(cfg);
  ASSERT_EQ(m.net.layers.size(), 4u);
  EXPECT_EQ(m.net.input_dim(), 8);
  EXPECT_EQ(m.net.layers[0].weight.rows(), 288);
  EXPECT_EQ(m.net.layers[1].weight.rows(), 144);
  EXPECT_EQ(m.net.layers[2].weight.rows(), 80);
  EXPECT_EQ(m.net.output_dim(), 16);
  EXPECT_TRUE(m.net.sinkhorn_output());
}

TEST(ModelTest, JointArchitecture) {
  TrainConfig cfg;
  cfg.problem = Problem::kCell;
  cfg.n = 3;
  cfg.standardization_samples = 100;
  const JointModel m = init_joint_model(cfg);
  EXPECT_EQ(m.shared.input_dim(), 9);
  EXPECT_EQ(m.shared.layers[0].weight.rows(), 576);
  EXPECT_EQ(m.shared.output_dim(), 432);
  EXPECT_EQ(m.assignment_head.input_dim(), 432);
  EXPECT_EQ(m.power_head.input_dim(), 432);
  EXPECT_EQ(m.assignment_head.layers[0].weight.rows(), 360);
  EXPECT_EQ(m.assignment_head.layers[1].weight.rows(), 216);
  EXPECT_EQ(m.assignment_head.layers[2].weight.rows(), 144);
  EXPECT_EQ(m.assignment_head.output_dim(), 9);
  EXPECT_EQ(m.power_head.layers[0].weight.rows(), 288);
  EXPECT_EQ(m.power_head.layers[1].weight.rows(), 144);
  EXPECT_EQ(m.power_head.output_dim(), 3);
  EXPECT_EQ(m.power_head.layers.back().activation, Activation::kSigmoid);
}

TEST(ModelTest, CellStandardizationIsCentred) {
  const TrainConfig cfg = small_cell(3);
  const JointModel m = init_joint_model(cfg);
  TrainConfig other = cfg;
  other.seed = 99;
  double mean = 0.0, sq = 0.0;
  const auto scns = cell_eval_set(other, 500, false);
  for (const CellScenario& s : scns) {
    const Vector f = cell_features(m, s);
    mean += f.mean();
    sq += f.squaredNorm() / f.size();
  }
  mean /= scns.size();
  EXPECT_NEAR(mean, 0.0, 0.1);
  EXPECT_NEAR(sq / scns.size(), 1.0, 0.15);
}

TEST(ForwardJointTest, OutputContracts) {
  const TrainConfig cfg = small_cell(3);
  const JointModel m = init_joint_model(cfg);
  for (const CellScenario& scn : cell_eval_set(cfg, 50, true)) {
    const JointOutput out = forward_joint(m, scn);
    EXPECT_TRUE((out.power.array() > 0.0).all());
    EXPECT_TRUE((out.power.array() < scn.power_budget.array()).all());
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(out.x_soft.col(j).sum(), 1.0, 1e-12);
  }
}

TEST(ForwardJointTest, SizeMismatchThrows) {
  const JointModel m = init_joint_model(small_cell(3));
  const CellScenario scn = gen_cell_scenario(2, 20, 10, 0);
  EXPECT_THROW(forward_joint(m, scn), ShapeError);
}

TEST(JointGradientTest, MatchesFiniteDifferences) {
  TrainConfig cfg = small_cell(2);
  JointModel m = init_joint_model(cfg);
  const std::vector<CellScenario> batch = cell_eval_set(cfg, 3, false);
  const JointGradients g = joint_loss_grad(m, batch);
  auto loss = [&] {
    double total = 0.0;
    for (const CellScenario& s : batch) {
      const JointOutput o = forward_joint(m, s);
      total -= sum_rate(s, o.x_soft, o.power);
    }
    return total;
  };
  int ok = 0, total = 0;
  auto check = [&](MlpParams& net, const Gradients& grads) {
    for (std::size_t r = 0; r < net.layers.size(); ++r) {
      Layer& l = net.layers[r];
      for (Eigen::Index k = 0; k < l.weight.size(); ++k) {
        ok += relative_error(grads.layers[r].weight.data()[k],
                             central_difference(loss, l.weight.data() + k, 1e-6)) < 1e-4;
        ++total;
      }
      for (Eigen::Index k = 0; k < l.bias.size(); ++k) {
        ok += relative_error(grads.layers[r].bias[k],
                             central_difference(loss, l.bias.data() + k, 1e-6)) < 1e-4;
        ++total;
      }
    }
  };
  check(m.shared, g.shared);
  check(m.assignment_head, g.assignment_head);
  check(m.power_head, g.power_head);
  EXPECT_GT(static_cast<double>(ok) / total, 0.99) << ok << " / " << total;
}

TEST(LsapGradientTest, MatchesFiniteDifferences) {
  const TrainConfig cfg = small_lsap(3, 2);
  LsapModel m = init_lsap_model(cfg);
  m.net.sinkhorn = {5.0, 2, 8};
  const auto batch = lsap_eval_set(cfg, 4, false);
  const Gradients g = lsap_loss_grad(m, batch);
  auto loss = [&] {
    double total = 0.0;
    for (const AssignmentInstance& inst : batch)
      total += lsap_cost(inst, truncate_square_output(forward_lsap(m, inst), inst.m));
    return total / kLsapCostScale;
  };
  int ok = 0, total = 0;
  for (std::size_t r = 0; r < m.net.layers.size(); ++r) {
    Layer& l = m.net.layers[r];
    for (Eigen::Index k = 0; k < l.weight.size(); ++k) {
      ok += relative_error(g.layers[r].weight.data()[k],
                           central_difference(loss, l.weight.data() + k, 1e-6)) < 1e-4;
      ++total;
    }
  }
  EXPECT_GT(static_cast<double>(ok) / total, 0.99);
}

TEST(TrainTest, ZeroIterationsReturnsInitialModel) {
  TrainConfig cfg = small_lsap(3, 3);
  cfg.total_iterations = 0;
  const TrainResult r = train(cfg);
  EXPECT_EQ(checkpoint(r.best), checkpoint(init_model(cfg)));
  ASSERT_EQ(r.log.size(), 1u);
  EXPECT_EQ(r.log[0].iteration, 0);
}

TEST(TrainTest, DeterministicGivenSeed) {
  const TrainConfig cfg = small_lsap(3, 2);
  EXPECT_EQ(checkpoint(train(cfg).best), checkpoint(train(cfg).best));
  const TrainConfig cell = small_cell(2);
  EXPECT_EQ(checkpoint(train(cell).best), checkpoint(train(cell).best));
}

TEST(TrainTest, ModelSelectionContract) {
  for (const TrainConfig& cfg : {small_lsap(3, 3), small_cell(2)}) {
    const TrainResult r = train(cfg);
    double best = INFINITY;
    for (const LogRow& row : r.log) {
      EXPECT_TRUE(std::isfinite(row.train_loss));
      best = std::min(best, row.val_cost);
      EXPECT_EQ(row.best_so_far, best);
    }
    EXPECT_EQ(r.log.back().iteration, cfg.total_iterations);
    const bool is_lsap = cfg.problem == Problem::kLsap;
    const auto val_lsap = is_lsap ? lsap_eval_set(cfg, cfg.validation_size, false)
                                  : std::vector<AssignmentInstance>{};
    const auto val_cell = is_lsap ? std::vector<CellScenario>{}
                                  : cell_eval_set(cfg, cfg.validation_size, false);
    EXPECT_EQ(validation_cost(r.best, val_lsap, val_cell), best);
  }
}

TEST(TrainTest, LogCsv) {
  std::ostringstream s;
  write_log_csv(s, {{0, 1.5, 2.0, 2.0}, {10, 1.0, 1.75, 1.75}});
  EXPECT_EQ(s.str(), "iteration,trainLoss,valCost,bestSoFar\n0,1.5,2,2\n10,1,1.75,1.75\n");
}

TEST(TrainTest, DivergenceNamesIteration) {
  TrainConfig cfg = small_cell(2);
  cfg.learning_rate = 1e300;
  try {
    train(cfg);
    FAIL() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    EXPECT_GE(e.iteration(), 1);
    EXPECT_NE(std::string(e.what()).find(std::to_string(e.iteration())), std::string::npos);
  }
}

TEST(EvaluateTest, UntrainedLsapModelIsFeasible) {
  for (auto [n, m] : {std::pair{4, 4}, std::pair{4, 2}}) {
    const TrainConfig cfg = small_lsap(n, m);
    const Metrics mt = evaluate_lsap(init_lsap_model(cfg), lsap_eval_set(cfg, 200, true));
    EXPECT_GT(mt.degradation_percent, 0.0);
    EXPECT_EQ(mt.feasible_fraction, 1.0);
    EXPECT_EQ(mt.instances, 200);
  }
}

TEST(EvaluateTest, HungarianAgainstItselfIsZero) {
  const TrainConfig cfg = small_lsap(5, 3);
  const Metrics mt = evaluate_hungarian(lsap_eval_set(cfg, 100, true));
  EXPECT_EQ(mt.degradation_percent, 0.0);
  EXPECT_EQ(mt.mean_objective, mt.oracle_mean_objective);
  EXPECT_EQ(mt.feasible_fraction, 1.0);
}

TEST(EvaluateTest, UnbalancedHardOutputsSatisfyConstraints) {
  const TrainConfig cfg = small_lsap(5, 2);
  const LsapModel m = init_lsap_model(cfg);
  for (const AssignmentInstance& inst : lsap_eval_set(cfg, 100, true)) {
    const Matrix x = predict_lsap_matrix(m, inst);
    EXPECT_EQ(x.rows(), 5);
    EXPECT_EQ(x.cols(), 2);
    EXPECT_TRUE(satisfies_unbalanced_constraints(x));
  }
}

TEST(EvaluateTest, ShapeMismatchIsConfigError) {
  const LsapModel m = init_lsap_model(small_lsap(4, 4));
  EXPECT_THROW(evaluate_lsap(m, lsap_eval_set(small_lsap(3, 3), 5, true)), ConfigError);
}

TEST(EvaluateTest, CellMetrics) {
  const TrainConfig cfg = small_cell(3);
  const auto test = cell_eval_set(cfg, 20, true);
  const Metrics mt = evaluate_cell(init_joint_model(cfg), test);
  EXPECT_EQ(mt.feasible_fraction, 1.0);
  EXPECT_LE(mt.mean_objective, mt.oracle_mean_objective);
}

TEST(CheckpointTest, RoundTripIsExact) {
  for (const TrainConfig& cfg : {small_lsap(4, 2), small_cell(3)}) {
    const Model m = init_model(cfg);
    const std::string text = checkpoint(m);
    std::istringstream in(text);
    const Model back = read_model(in);
    EXPECT_EQ(checkpoint(back), text);
    EXPECT_EQ(model_problem(back), cfg.problem);
  }
  std::istringstream in(checkpoint(init_model(small_cell(2))));
  const auto jm = std::get<JointModel>(read_model(in));
  EXPECT_EQ(jm.assignment_head.sinkhorn.tau, 5.0);
  EXPECT_EQ(jm.assignment_head.sinkhorn.cascades, 2);
  EXPECT_EQ(jm.assignment_head.sinkhorn.total_iterations, 8);
}

TEST(CheckpointTest, RejectsMalformedInput) {
  std::string text = checkpoint(init_model(small_lsap(3, 3)));
  for (const std::string& bad :
       {std::string("nonsense\n"), text.substr(0, text.find("END")),
        std::string("META\nproblem lsap\nn 3\nm 3\nEND\n"),
        [&] {
          std::string t = text;
          t.replace(t.find("n 3"), 3, "n 4");
          return t;
        }()}) {
    std::istringstream in(bad);
    EXPECT_THROW(read_model(in), ConfigError);
  }
}

TEST(OpCountTest, LsapInference) {
  TrainConfig cfg;
  cfg.n = 8;
  cfg.m = 8;
  EXPECT_EQ(inference_ops(init_model(cfg)).flops(), 158048u);
}

}  // namespace
}  // namespace snn
