#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rlab/env.hpp"
#include "rlab/network.hpp"
#include "rlab/regret.hpp"

namespace rlab {

/// Next-regret estimate added to the cumulative regret before matching.
/// Neural predictors keep every entry in [-alpha, alpha].
struct PredictionVector {
  Eigen::VectorXd values;
};

enum class Kind {
  kRm,
  kRmPlus,
  kPrm,
  kPrmPlus,
  kHedge,
  kPredictiveHedge,
  kNoa,
  kNprm,
  kNprmPlus,
  kNeuralHedge,
};

std::string to_string(Kind kind);
std::optional<Kind> kind_from_string(const std::string& id);

bool is_neural(Kind kind);
/// Kinds whose prediction is the current instantaneous regret.
bool is_self_predictive(Kind kind);
bool uses_hedge_rule(Kind kind);
Aggregation aggregation_of(Kind kind);

/// Hedge temperature for a horizon: sqrt(2 ln|A| / T).
double hedge_beta(int num_actions, int horizon);

struct MinimizerOptions {
  /// Horizon the Hedge temperature is tuned for (the training horizon, even
  /// when evaluation runs longer).
  int hedge_horizon = 64;
  /// Forces the prediction to stay zero; makes PRM coincide with RM.
  bool zero_predictor = false;
  // Neural kinds only.
  std::shared_ptr<const NetworkParams> network;
  Eigen::VectorXd context;
  double delta_max = 1.0;
};

/// Full state of one online learner. Single-owner mutable; distinct instances
/// may run concurrently.
struct MinimizerState {
  Kind kind = Kind::kRm;
  CumulativeRegret cumulative;
  PredictionVector prediction;
  AverageStrategy average;
  RewardVector last_reward;
  StrategyVector last_strategy;
  int step = 0;  // completed observe_reward calls
  double beta = 0.0;
  MinimizerOptions options;
  RecurrentState hidden;              // neural kinds
  Eigen::VectorXd net_strategy;       // NOA's pending strategy output
  bool awaiting_reward = false;
};

/// Initializes the state; neural kinds run the network once on the zero
/// reward to produce the first prediction or strategy.
MinimizerState make_minimizer(Kind kind, int num_actions, MinimizerOptions options = {});

/// The regret-matching rule shared by all non-neural strategy computations:
/// hedge kinds return softmax(beta * (R + p)); otherwise xi = [R + p]^+ is
/// normalized, falling back to uniform when it vanishes.
StrategyVector strategy_from(const Eigen::VectorXd& cumulative, const Eigen::VectorXd& prediction,
                             bool hedge_rule, double beta);

StrategyVector next_strategy(MinimizerState& state);

/// Accumulates regret in the state's aggregation mode, refreshes the
/// prediction (zero, current regret, or a network call), and updates the
/// average strategy. Requires a preceding next_strategy (strict alternation).
void observe_reward(MinimizerState& state, const RewardVector& x);

struct Trajectory {
  std::vector<StrategyVector> strategies;       // sigma^1..T
  std::vector<StrategyVector> averages;         // running means
  std::vector<RewardVector> rewards;            // x^1..T
  std::vector<CumulativeRegret> cumulative;     // state-mode cumulative regret
  std::vector<PredictionVector> predictions;    // p^t used for sigma^t
  std::vector<double> exploitability;           // of the average strategy
  std::vector<double> env_ms, algo_ms;          // cumulative wall time
};

/// Full cumulative regret (kFull aggregation) of a logged trajectory prefix,
/// recomputed from scratch; independent of the minimizer's internal state.
double replay_external_regret(const Trajectory& traj, int prefix);

/// Plays `horizon` alternations of next_strategy / observe_reward against the
/// environment, recording everything needed to replay or audit the episode.
/// Environment errors are rethrown with the failing step attached.
Trajectory run_episode(MinimizerState& state, Environment& env, int horizon,
                       bool record_timing = false);

void write_trajectory_csv(const Trajectory& traj, const std::string& path);

}  // namespace rlab
