#pragma once

#include <string>

#include "rlab/regret.hpp"
#include "rlab/rng.hpp"

namespace rlab {

/// Two-player zero-sum matrix game; `payoff` is the row player's utility
/// (the column player receives its negation).
struct MatrixGame {
  Eigen::MatrixXd payoff;

  int rows() const { return static_cast<int>(payoff.rows()); }
  int cols() const { return static_cast<int>(payoff.cols()); }
  double delta_max() const { return payoff.maxCoeff() - payoff.minCoeff(); }
};

enum class MatrixKind { kRpsFixed, kRpsSampled, kUniform3x3 };

/// A distribution over matrix games. delta_max() is the supremum over the
/// distribution so feature scales stay comparable across samples.
struct MatrixDistribution {
  MatrixKind kind = MatrixKind::kRpsFixed;

  int num_actions() const { return 3; }
  double delta_max() const;
  std::string id() const;
};

MatrixDistribution matrix_distribution_from_id(const std::string& id);

/// Draws one game. rps-fixed ignores the rng; rps-sampled perturbs two
/// entries with U(-1,1); uniform-3x3 draws all nine entries i.i.d. U(-1,1).
MatrixGame sample_matrix_game(const MatrixDistribution& dist, Rng& rng);

/// Reward of a best-responding opponent: the column minimizing the row
/// player's expected payoff (ties to the lowest index), returned as the
/// row player's per-action payoffs against that column.
RewardVector best_response_reward(const MatrixGame& game, const StrategyVector& sigma);

/// Certified bracket [value_lo, value_hi] from alternating RM+ self-play with
/// linearly weighted averaging; gap() is an exact best-response certificate.
struct SelfPlayResult {
  double value_lo = 0.0;
  double value_hi = 0.0;
  long iterations = 0;

  double gap() const { return value_hi - value_lo; }
  double value() const { return 0.5 * (value_lo + value_hi); }
};

/// Runs up to max_iters RM+ self-play iterations, stopping early once the
/// certified gap drops below target_gap (0 disables early stopping).
SelfPlayResult rm_plus_self_play(const MatrixGame& game, long max_iters,
                                 double target_gap = 0.0);

/// Exact game value by Shapley-Snow support enumeration: solve the equalizing
/// system for every square support pair and verify feasibility + optimality.
/// Falls back to RM+ self-play certified below 1e-9 if enumeration hits
/// degenerate numerics. Intended for matrices up to roughly 10x10.
double game_value(const MatrixGame& game);

/// game_value(game) minus the strategy's worst-case payoff; >= -1e-9 always,
/// zero exactly at an optimal strategy.
double exploitability_matrix(const MatrixGame& game, const StrategyVector& sigma);

}  // namespace rlab
