#pragma once

#include <array>
#include <optional>
#include <vector>

#include "rlab/endgame.hpp"
#include "rlab/regret.hpp"

namespace rlab {

/// Behavioral profile over the betting tree: per player and decision slot, a
/// (deck_size x actions) matrix of action probabilities per private card.
struct EndgameProfile {
  std::array<std::vector<Eigen::MatrixXd>, 2> tables;
};

struct CfrPlusResult {
  EndgameProfile average;
  /// Counterfactual values of the learner's root actions under the average
  /// profile, one vector per root infoset in ascending holdable-card order.
  /// The learner's own card probability is factored out, so values are
  /// bounded by the game's stakes.
  std::vector<RewardVector> root_values;
  double nash_gap = 0.0;
  long iterations = 0;
};

/// Self-play CFR+: regret matching with immediate positive-part clamping at
/// every infoset, alternating player updates, linearly weighted strategy
/// averaging. When frozen_root is given the learner's root infosets are
/// pinned to it and excluded from regret updates; nash_gap then measures
/// convergence of the constrained solve.
CfrPlusResult cfr_plus_solve(const SequentialEndgame& game, const Beliefs& beliefs,
                             const std::optional<std::vector<StrategyVector>>& frozen_root,
                             long iters);

/// Expected utility (in br_player's units) of an exact best response against
/// the other player's profile, weighted by both root beliefs.
double best_response_value(const SequentialEndgame& game, const Beliefs& beliefs,
                           const EndgameProfile& profile, int br_player);

/// One environment interaction: rewards are the root counterfactual values
/// after a frozen-root solve.
struct RootEnvironmentStep {
  std::vector<RewardVector> rewards;
  long solver_iterations = 0;
  double residual_gap = 0.0;
};

RootEnvironmentStep sequential_env_step(const SequentialEndgame& game, const Beliefs& beliefs,
                                        const std::vector<StrategyVector>& root_strategies,
                                        long iters);

/// Approximate game value (unfrozen solve) minus the learner's best-response
/// evaluated value when its root averages are optimally extended by a
/// frozen-root solve. Can dip slightly below zero, bounded by the residual
/// solver gap.
double exploitability_sequential(const SequentialEndgame& game, const Beliefs& beliefs,
                                 const std::vector<StrategyVector>& root_averages,
                                 long precision_iters);

/// Worst-case value of the learner's profile (u1 against a best-responding
/// opponent); exploitability_sequential is the difference of two of these.
double learner_guaranteed_value(const SequentialEndgame& game, const Beliefs& beliefs,
                                const EndgameProfile& profile);

}  // namespace rlab
