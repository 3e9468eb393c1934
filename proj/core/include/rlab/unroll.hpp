#pragma once

#include <vector>

#include "rlab/env.hpp"
#include "rlab/minimizers.hpp"
#include "rlab/network.hpp"

namespace rlab {

/// One recorded step of one learner inside a training unroll.
struct UnrollStep {
  StepActivations acts;     // network internals for the call that produced p^t
  Eigen::VectorXd r_prev;   // state-mode cumulative regret entering the step
  Eigen::VectorXd strategy; // sigma^t
  Eigen::VectorXd reward;   // x^t
  Eigen::VectorXd xi;       // clamp output for regret-matching heads
  double xi_norm = 0.0;
};

/// Everything recorded during one episode that reverse-mode differentiation
/// needs. Rewards and the cumulative regrets entering the network are frozen
/// here: they carry no gradient, so the differentiated objective treats them
/// as constants and only the network weights (through strategies, predictions
/// and hidden states) move.
struct UnrollTrace {
  Kind kind = Kind::kNprm;
  int horizon = 0;
  int num_learners = 0;
  int num_actions = 0;
  double beta = 0.0;       // hedge temperature, hedge kinds only
  double delta_max = 0.0;
  double alpha = 0.0;
  Eigen::VectorXd weights; // learner loss weights, sum 1
  std::vector<std::vector<UnrollStep>> steps;  // [learner][t]
  double loss = 0.0;
  std::vector<double> learner_regret;  // max_a of the full cumulative regret
  bool bound_violated = false;  // worst-case guarantee audit (nprm kinds)
};

/// Plays `horizon` steps of the given neural algorithm against the
/// environment and returns the loss: the weighted mean over learners of the
/// final external regret. The trace captures the whole computation.
UnrollTrace unroll_and_loss(const NetworkParams& params, Kind kind, MetaEnvironment& env,
                            int horizon, int hedge_horizon = 0);

/// Exact reverse-mode gradient of trace.loss with respect to the parameters,
/// under the frozen-input semantics of UnrollTrace. The loss couples to each
/// strategy only through -x^t; everything earlier flows through the hidden
/// states.
ParamBlocks backprop(const UnrollTrace& trace, const NetworkParams& params);

/// Recomputes the loss for arbitrary parameters over the trace's frozen
/// inputs (features, cumulative regrets, rewards). At the parameters that
/// produced the trace this equals trace.loss; its derivative is what
/// backprop computes, which makes it the reference for finite differences.
double replay_loss(const UnrollTrace& trace, const NetworkParams& params);

/// sqrt(2) * ((2*delta_max + alpha) * |A| * t)^(1/2): the worst-case external
/// regret ceiling for a bounded-prediction regret matcher after t steps.
double prediction_bound(double delta_max, double alpha, int num_actions, int t);

}  // namespace rlab
