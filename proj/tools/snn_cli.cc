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

// snn: train, evaluate and benchmark Sinkhorn-terminated assignment networks.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "snn/assignment.h"
#include "snn/cell.h"
#include "snn/convergence.h"
#include "snn/dataset.h"
#include "snn/errors.h"
#include "snn/training.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string problem = "lsap";
  int n = 4;
  int m = -1;  // defaults to n
  std::uint64_t seed = 0;
  double tau = 20.0;
  int cascades = 4;
  int sinkhorn_iters = 20;
  int iters = 20000;
  double lr = 1e-3;
  int batch = 256;
  int val_size = 1000;
  int val_period = 500;
  int trials = 1000;
  double pmacro_dbm = 20.0;
  double psmall_dbm = 10.0;
  double sigma = 1.0;
  std::string out;
  std::string log;
  std::vector<std::string> checkpoints;
  std::vector<int> demo_cascades = {1, 4};
  std::string method = "snn";
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

// Writes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

snn::Problem problem_of(const Flags& f) {
  try {
    return snn::parse_problem(f.problem);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

int jobs(const Flags& f) { return f.m < 0 ? f.n : f.m; }

snn::TrainConfig train_config(const Flags& f) {
  snn::TrainConfig cfg;
  cfg.problem = problem_of(f);
  cfg.n = f.n;
  cfg.m = cfg.problem == snn::Problem::kLsap ? jobs(f) : f.n;
  cfg.learning_rate = f.lr;
  cfg.batch_size = f.batch;
  cfg.total_iterations = f.iters;
  cfg.validation_size = f.val_size;
  cfg.test_size = f.trials;
  cfg.validation_period = f.val_period;
  cfg.seed = f.seed;
  cfg.sinkhorn = {f.tau, f.cascades, f.sinkhorn_iters};
  cfg.p_macro_dbm = f.pmacro_dbm;
  cfg.p_small_dbm = f.psmall_dbm;
  try {
    cfg.validate();
  } catch (const snn::ConfigError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

snn::Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint '" + path + "'");
  return snn::read_model(in);
}

template <typename F>
double micros_per_call(int count, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  for (int k = 0; k < count; ++k) body(k);
  const std::chrono::duration<double, std::micro> dt = std::chrono::steady_clock::now() - start;
  return dt.count() / count;
}

int cmd_gen(const Flags& f) {
  if (f.out.empty()) throw UsageError("gen needs --out");
  const snn::Problem problem = problem_of(f);
  if (f.trials < 1) throw UsageError("--trials must be >= 1");
  snn::DatasetMeta meta;
  meta.family = std::string(snn::problem_name(problem));
  meta.count = f.trials;
  meta.seed = f.seed;
  std::vector<snn::Matrix> mats;
  if (problem == snn::Problem::kLsap) {
    if (f.n < 1 || jobs(f) < 1 || jobs(f) > f.n) throw UsageError("LSAP needs n >= m >= 1");
    for (auto& inst : snn::gen_lsap_set(f.n, jobs(f), f.trials, f.seed))
      mats.push_back(std::move(inst.cost));
    meta.rows = f.n;
    meta.cols = jobs(f);
    meta.value_unit = "cost";
  } else {
    if (f.n < 2) throw UsageError("cell scenarios need n >= 2");
    for (auto& scn : snn::gen_cell_set(f.n, f.pmacro_dbm, f.psmall_dbm, f.trials, f.seed))
      mats.push_back(std::move(scn.gain));
    meta.rows = meta.cols = f.n;
    meta.value_unit = "linear power gain";
    meta.p_macro_dbm = f.pmacro_dbm;
    meta.p_small_dbm = f.psmall_dbm;
    meta.noise_power_w = snn::dbm_to_watt(snn::kNoisePowerDbm);
  }
  Output csv(f.out);
  snn::write_matrix_csv(csv.stream(), mats);
  Output side(f.out + ".json");
  snn::write_sidecar(side.stream(), meta);
  return kExitOk;
}

int cmd_train(const Flags& f) {
  if (f.out.empty()) throw UsageError("train needs --out");
  const snn::TrainConfig cfg = train_config(f);
  const snn::TrainResult result = snn::train(cfg);
  {
    Output ck(f.out);
    snn::write_model(ck.stream(), result.best);
  }
  Output log(f.log.empty() ? f.out + ".log.csv" : f.log);
  snn::write_log_csv(log.stream(), result.log);
  return kExitOk;
}

void write_metrics(std::ostream& out, const snn::Metrics& mt) {
  out << "instances,meanCost,oracleMeanCost,degradationPercent,feasibleFraction\n"
      << mt.instances << ',' << fmt(mt.mean_objective) << ',' << fmt(mt.oracle_mean_objective)
      << ',' << fmt(mt.degradation_percent) << ',' << fmt(mt.feasible_fraction) << '\n';
}

int cmd_eval(const Flags& f) {
  const snn::TrainConfig cfg = train_config(f);
  snn::Metrics mt;
  if (f.method == "hungarian") {
    if (cfg.problem != snn::Problem::kLsap) throw UsageError("--method hungarian needs lsap");
    mt = snn::evaluate_hungarian(snn::lsap_eval_set(cfg, f.trials, true));
  } else {
    if (f.checkpoints.size() != 1) throw UsageError("eval needs exactly one --checkpoint");
    const snn::Model model = load_model(f.checkpoints.front());
    if (snn::model_problem(model) != cfg.problem)
      throw snn::ConfigError("checkpoint was trained for a different problem");
    if (cfg.problem == snn::Problem::kLsap) {
      const auto& lm = std::get<snn::LsapModel>(model);
      if (lm.n != cfg.n || lm.m != cfg.m)
        throw snn::ConfigError("checkpoint was trained for a different (n, m)");
      mt = snn::evaluate_lsap(lm, snn::lsap_eval_set(cfg, f.trials, true));
    } else {
      const auto& jm = std::get<snn::JointModel>(model);
      if (jm.n != cfg.n) throw snn::ConfigError("checkpoint was trained for a different n");
      mt = snn::evaluate_cell(jm, snn::cell_eval_set(cfg, f.trials, true));
    }
  }
  Output out(f.out);
  write_metrics(out.stream(), mt);
  return kExitOk;
}

int cmd_bench_lsap(const Flags& f) {
  Flags g = f;
  g.problem = "lsap";
  const snn::TrainConfig cfg = train_config(g);
  snn::LsapModel model;
  if (f.checkpoints.empty()) {
    model = snn::init_lsap_model(cfg);
  } else {
    const snn::Model loaded = load_model(f.checkpoints.front());
    if (snn::model_problem(loaded) != snn::Problem::kLsap)
      throw snn::ConfigError("checkpoint is not an LSAP model");
    model = std::get<snn::LsapModel>(loaded);
    if (model.n != cfg.n || model.m != cfg.m)
      throw snn::ConfigError("checkpoint was trained for a different (n, m)");
  }
  const auto test = snn::lsap_eval_set(cfg, f.trials, true);
  const snn::Metrics mt = snn::evaluate_lsap(model, test);
  const double snn_us =
      micros_per_call(f.trials, [&](int k) { (void)snn::predict_lsap(model, test[k]); });
  const double hung_us = micros_per_call(
      f.trials, [&](int k) { (void)snn::hungarian_min(snn::padded_cost(test[k])); });
  const snn::OpCounter ops = snn::inference_ops(model);
  Output out(f.out);
  out.stream() << "n,m,instances,snnMeanCost,hungarianMeanCost,degradationPercent,"
                  "feasibleFraction,snnFlops,snnMicros,hungarianMicros\n"
               << cfg.n << ',' << cfg.m << ',' << mt.instances << ',' << fmt(mt.mean_objective)
               << ',' << fmt(mt.oracle_mean_objective) << ',' << fmt(mt.degradation_percent)
               << ',' << fmt(mt.feasible_fraction) << ',' << ops.flops() << ',' << fmt(snn_us)
               << ',' << fmt(hung_us) << '\n';
  return kExitOk;
}

int cmd_bench_cell(const Flags& f) {
  if (f.checkpoints.empty()) throw UsageError("bench-cell needs at least one --checkpoint");
  Output out(f.out);
  out.stream() << "n,pmacroDbm,psmallDbm,instances,snnSumRate,baselineSumRate,oracleSumRate,"
                  "snnFlops,snnMicros,baselineMicros\n";
  for (const std::string& path : f.checkpoints) {
    const snn::Model loaded = load_model(path);
    if (snn::model_problem(loaded) != snn::Problem::kCell)
      throw snn::ConfigError("checkpoint '" + path + "' is not a cell model");
    const auto& model = std::get<snn::JointModel>(loaded);
    Flags g = f;
    g.problem = "cell";
    g.n = model.n;
    const snn::TrainConfig cfg = train_config(g);
    const auto test = snn::cell_eval_set(cfg, f.trials, true);
    double snn_rate = 0.0, base_rate = 0.0, oracle_rate = 0.0;
    std::vector<snn::JointSolution> snn_out(test.size()), base_out(test.size());
    const double snn_us =
        micros_per_call(f.trials, [&](int k) { snn_out[k] = snn::predict_cell(model, test[k]); });
    const double base_us = micros_per_call(
        f.trials, [&](int k) { base_out[k] = snn::hungarian_wmmse_baseline(test[k], model.n); });
    for (std::size_t k = 0; k < test.size(); ++k) {
      snn_rate += snn_out[k].sum_rate;
      base_rate += base_out[k].sum_rate;
      if (model.n <= snn::kJointOracleLimit)
        oracle_rate += snn::joint_brute_oracle(test[k]).sum_rate;
    }
    const double count = static_cast<double>(test.size());
    out.stream() << model.n << ',' << fmt(f.pmacro_dbm) << ',' << fmt(f.psmall_dbm) << ','
                 << test.size() << ',' << fmt(snn_rate / count) << ',' << fmt(base_rate / count)
                 << ',' << (model.n <= snn::kJointOracleLimit ? fmt(oracle_rate / count) : "")
                 << ',' << snn::inference_ops(loaded).flops() << ',' << fmt(snn_us) << ','
                 << fmt(base_us) << '\n';
  }
  return kExitOk;
}

int cmd_sinkhorn_demo(const Flags& f) {
  if (f.n < 1 || f.trials < 1) throw UsageError("sinkhorn-demo needs n >= 1 and trials >= 1");
  for (int k : f.demo_cascades) {
    snn::SinkhornConfig cfg{f.tau, k, f.sinkhorn_iters};
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (!(f.sigma > 0.0)) throw UsageError("--sigma must be > 0");
  const auto curves = snn::mean_affinity_curves(f.n, f.tau, f.demo_cascades, f.sinkhorn_iters,
                                                f.trials, f.seed, f.sigma);
  Output out(f.out);
  out.stream() << "iteration";
  for (int k : f.demo_cascades) out.stream() << ",meanAffinityK" << k;
  out.stream() << '\n';
  for (int i = 0; i <= f.sinkhorn_iters; ++i) {
    out.stream() << i;
    for (const auto& c : curves) out.stream() << ',' << fmt(c[static_cast<std::size_t>(i)]);
    out.stream() << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  Flags f;
  CLI::App app{"Sinkhorn neural networks for assignment problems"};
  app.require_subcommand(1);

  auto add_common = [&f](CLI::App* c) {
    c->add_option("--seed", f.seed, "Random seed")->capture_default_str();
    c->add_option("--n", f.n, "Rows of the assignment (workers / base stations)")
        ->capture_default_str();
    c->add_option("--out", f.out, "Output path (stdout when omitted, where allowed)");
  };
  auto add_problem = [&f](CLI::App* c) {
    c->add_option("--problem", f.problem, "lsap or cell")->capture_default_str();
    c->add_option("--m", f.m, "LSAP columns (jobs); defaults to --n");
    c->add_option("--pmacro-dbm", f.pmacro_dbm, "Macro BS power budget, dBm")
        ->capture_default_str();
    c->add_option("--psmall-dbm", f.psmall_dbm, "Small-cell BS power budget, dBm")
        ->capture_default_str();
  };
  auto add_sinkhorn = [&f](CLI::App* c) {
    c->add_option("--tau", f.tau, "Sinkhorn temperature")->capture_default_str();
    c->add_option("--cascades", f.cascades, "Cascaded Sinkhorn operators K")
        ->capture_default_str();
    c->add_option("--sinkhorn-iters", f.sinkhorn_iters, "Total Sinkhorn passes L")
        ->capture_default_str();
  };

  CLI::App* gen = app.add_subcommand("gen", "Generate an instance dataset");
  add_common(gen);
  add_problem(gen);
  gen->add_option("--trials", f.trials, "Number of instances")->capture_default_str();
  gen->footer(
      "CSV: instanceId,i,j,value (one row per matrix entry); sidecar <out>.json holds shapes, "
      "seed and units.");

  CLI::App* tr = app.add_subcommand("train", "Train a model and write a checkpoint");
  add_common(tr);
  add_problem(tr);
  add_sinkhorn(tr);
  tr->add_option("--iters", f.iters, "SGD iterations")->capture_default_str();
  tr->add_option("--lr", f.lr, "Learning rate")->capture_default_str();
  tr->add_option("--batch", f.batch, "Mini-batch size")->capture_default_str();
  tr->add_option("--val-size", f.val_size, "Validation instances")->capture_default_str();
  tr->add_option("--val-period", f.val_period, "Iterations between validations")
      ->capture_default_str();
  tr->add_option("--log", f.log, "Training log CSV (default <out>.log.csv)");
  tr->footer("Log CSV: iteration,trainLoss,valCost,bestSoFar");

  CLI::App* ev = app.add_subcommand("eval", "Evaluate a checkpoint on a held-out test set");
  add_common(ev);
  add_problem(ev);
  ev->add_option("--checkpoint", f.checkpoints, "Checkpoint to evaluate");
  ev->add_option("--trials", f.trials, "Test instances")->capture_default_str();
  ev->add_option("--method", f.method, "snn, or hungarian (LSAP oracle scored against itself)")
      ->check(CLI::IsMember({"snn", "hungarian"}))
      ->capture_default_str();
  ev->footer(
      "CSV: instances,meanCost,oracleMeanCost,degradationPercent,feasibleFraction "
      "(cell: the cost columns hold sum rates in nats)");

  CLI::App* bl = app.add_subcommand("bench-lsap", "Compare a checkpoint with the Hungarian method");
  add_common(bl);
  add_sinkhorn(bl);
  bl->add_option("--m", f.m, "LSAP columns (jobs); defaults to --n");
  bl->add_option("--checkpoint", f.checkpoints, "LSAP checkpoint (untrained model when omitted)");
  bl->add_option("--trials", f.trials, "Test instances")->capture_default_str();
  bl->footer(
      "CSV: n,m,instances,snnMeanCost,hungarianMeanCost,degradationPercent,feasibleFraction,"
      "snnFlops,snnMicros,hungarianMicros");

  CLI::App* bc = app.add_subcommand("bench-cell", "Compare cell checkpoints with the baselines");
  add_common(bc);
  bc->add_option("--checkpoint", f.checkpoints, "Cell checkpoint; repeat for several N");
  bc->add_option("--trials", f.trials, "Test scenarios")->capture_default_str();
  bc->add_option("--pmacro-dbm", f.pmacro_dbm, "Macro BS power budget, dBm")
      ->capture_default_str();
  bc->add_option("--psmall-dbm", f.psmall_dbm, "Small-cell BS power budget, dBm")
      ->capture_default_str();
  bc->footer(
      "CSV: n,pmacroDbm,psmallDbm,instances,snnSumRate,baselineSumRate,oracleSumRate,snnFlops,"
      "snnMicros,baselineMicros (oracleSumRate empty for n > 5)");

  CLI::App* demo = app.add_subcommand("sinkhorn-demo", "Affinity of the cascaded activation");
  add_common(demo);
  demo->add_option("--tau", f.tau, "Sinkhorn temperature")->capture_default_str();
  demo->add_option("--cascades", f.demo_cascades, "Cascade counts K to compare")
      ->delimiter(',')
      ->capture_default_str();
  demo->add_option("--iters", f.sinkhorn_iters, "Total Sinkhorn passes L")->capture_default_str();
  demo->add_option("--trials", f.trials, "Random Gaussian matrices")->capture_default_str();
  demo->add_option("--sigma", f.sigma, "Standard deviation of the matrix entries")
      ->capture_default_str();
  demo->footer("CSV: iteration,meanAffinityK<K>... (iteration 0 is the exp-normalized input)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) return cmd_gen(f);
    if (*tr) return cmd_train(f);
    if (*ev) return cmd_eval(f);
    if (*bl) return cmd_bench_lsap(f);
    if (*bc) return cmd_bench_cell(f);
    if (*demo) return cmd_sinkhorn_demo(f);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const snn::DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
