#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rlab/checkpoint.hpp"
#include "rlab/distributions.hpp"
#include "rlab/minimizers.hpp"
#include "rlab/unroll.hpp"

namespace rlab {

struct TrainConfig {
  Kind algorithm = Kind::kNprm;  // noa | nprm | nprm+ | nhedge
  std::string distribution = "rps-sampled";
  int horizon = 64;
  int epochs = 512;
  int batch_size = 32;
  double lr_start = 1e-3;
  double lr_end = 3e-4;
  double alpha = 0.0;  // 0 = 2 * distribution delta_max (prediction heads)
  int hidden_dim = 32;
  std::uint64_t seed = 1;
  long vf_iters = 1000;
  long eval_iters = 0;  // 0 = 10 * vf_iters
  int eval_every = 64;  // epochs between held-out evaluations; 0 disables
  int eval_games = 16;
  bool record_timing = true;
  EndgameConfig endgame;

  void validate() const;
  long resolved_eval_iters() const { return eval_iters > 0 ? eval_iters : 10 * vf_iters; }
  /// Canonical key-value snapshot; its fnv1a64 is the config digest.
  std::string resolved_text(double resolved_alpha) const;
};

struct TrainReportRow {
  int epoch = 0;
  double mean_loss = 0.0;
  double lr = 0.0;
  bool has_eval = false;
  double eval_expl = 0.0;
  double wall_s = 0.0;
};

struct TrainResult {
  NetworkParams params;
  CheckpointMeta meta;
  std::vector<TrainReportRow> report;
  int bound_violations = 0;  // worst-case guarantee audits during training
};

/// Minimizes the expected final external regret over the distribution:
/// per epoch, sample a batch of games, unroll each for `horizon` steps,
/// average losses and gradients in sample order, take one Adam step at the
/// cosine-scheduled rate. Deterministic given the config.
TrainResult meta_train(const TrainConfig& config);

/// Same loop with an explicit distribution (config.distribution is only used
/// for the checkpoint metadata).
TrainResult meta_train(const TrainConfig& config, const GameDistribution& dist);

void write_training_csv(const std::vector<TrainReportRow>& report, const std::string& path);

/// An algorithm to evaluate: a classic kind, or a neural kind with weights.
struct AlgorithmSpec {
  Kind kind = Kind::kRm;
  std::shared_ptr<const NetworkParams> network;  // neural kinds
  std::string label;

  static AlgorithmSpec classic(Kind kind);
  static AlgorithmSpec from_checkpoint(const Checkpoint& ck);
};

struct EvalConfig {
  int n_games = 256;
  int horizon = 128;       // usually twice the training horizon
  int train_horizon = 64;  // hedge temperature + regime marker
  std::uint64_t seed = 9;
  long vf_iters = 1000;
  long eval_iters = 10000;
  bool record_timing = true;
  int expl_stride = 1;  // exploitability cadence; the final step always runs
};

struct EvalCurve {
  std::string label;
  int train_horizon = 0;
  std::vector<double> mean;     // exploitability of the average strategy, per step
  std::vector<double> stderr_;  // standard error across games
  std::vector<double> env_ms;   // mean cumulative environment time
  std::vector<double> algo_ms;  // mean cumulative algorithm time
  int bound_violations = 0;
  /// Weighted-mean external regret (full aggregation, replayed) per step.
  std::vector<double> mean_external_regret;
};

/// Plays n_games fresh seeded games and records the exploitability of the
/// average strategy after every step. Games run in parallel; accumulation
/// order is fixed, so results are reproducible.
EvalCurve evaluate(const AlgorithmSpec& algo, const GameDistribution& dist,
                   const EvalConfig& cfg);

void write_curve_csv(const EvalCurve& curve, const std::string& path);
EvalCurve read_curve_csv(const std::string& path);

struct StepsToTargetTable {
  std::vector<double> targets;  // strictly descending
  std::vector<std::string> algorithms;
  std::vector<std::vector<long>> steps;  // steps[row][col]; -1 = never reached
};

/// First step whose mean exploitability reaches each target. Targets must be
/// positive and strictly descending.
StepsToTargetTable steps_to_target(const std::vector<EvalCurve>& curves,
                                   const std::vector<double>& targets);

std::string format_table_text(const StepsToTargetTable& table);
void write_table_csv(const StepsToTargetTable& table, const std::string& path);

struct BoundCheckResult {
  bool holds = true;
  double margin = 0.0;  // worst-case slack of the closed-form bound
};

/// Verifies at every prefix both the prediction-dependent bound
/// sqrt(2) * (sum_t ||r^t - p^t||_1)^(1/2) and the closed-form ceiling
/// sqrt(2) * ((2*delta_max + alpha) |A| t)^(1/2) against the replayed
/// external regret.
BoundCheckResult bound_check(const Trajectory& traj, double alpha, double delta_max);

struct OodResult {
  EvalCurve in_dist;
  EvalCurve out_dist;
  bool guarantee_applies = false;  // prediction-bounded kinds only
  bool bound_holds = true;
  double regret_rate_at_train_horizon = 0.0;  // mean external regret / t
  double regret_rate_at_horizon = 0.0;
};

/// Evaluates a checkpoint on its training distribution and on a different
/// one; prediction-bounded checkpoints additionally get the worst-case bound
/// verified on every out-of-distribution trajectory.
OodResult ood_evaluate(const Checkpoint& ck, const GameDistribution& eval_dist,
                       const EvalConfig& cfg, const EndgameConfig& endgame_config = {});

struct SweepEntry {
  long vf_iters = 0;
  EvalCurve curve;
  double solver_residual = 0.0;  // mean unfrozen solver gap at this precision
};

/// Re-evaluates a checkpoint under value functions of varying precision.
std::vector<SweepEntry> precision_sweep(const Checkpoint& ck, const GameDistribution& dist,
                                        const std::vector<long>& iters_list,
                                        const EvalConfig& cfg);

/// Shared episode runner used by evaluate/ood/sweep; exposed for tests and
/// trajectory dumps. Returns one trajectory per learner plus the aggregate
/// exploitability sequence.
struct MultiEpisode {
  std::vector<Trajectory> learners;
  std::vector<double> exploitability;  // NaN where skipped by the stride
  std::vector<double> env_ms, algo_ms;
  Eigen::VectorXd weights;
  int bound_violations = 0;
};

MultiEpisode run_multi_episode(const AlgorithmSpec& algo, MetaEnvironment& env, int horizon,
                               int train_horizon, bool record_timing, int expl_stride);

}  // namespace rlab
