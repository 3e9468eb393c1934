#pragma once

#include <memory>
#include <optional>
#include <string>

#include "rlab/cfr_plus.hpp"
#include "rlab/endgame.hpp"
#include "rlab/env.hpp"

namespace rlab {

struct EnvOptions {
  long vf_iters = 1000;     // solver iterations behind each environment step
  long eval_iters = 10000;  // solver iterations for exploitability evaluation
};

/// A distribution over games. make_env(seed) is deterministic; action count,
/// reward range and context dimension are fixed across the distribution.
class GameDistribution {
 public:
  virtual ~GameDistribution() = default;

  virtual std::string id() const = 0;
  virtual int num_actions() const = 0;
  virtual double delta_max() const = 0;
  virtual int context_dim() const = 0;
  virtual std::unique_ptr<MetaEnvironment> make_env(std::uint64_t seed,
                                                    const EnvOptions& opts) const = 0;
  /// Intrinsic solver gap of the distribution's value function at the given
  /// precision (sequential distributions only; 0 elsewhere).
  virtual double solver_residual(std::uint64_t seed, long iters) const {
    (void)seed;
    (void)iters;
    return 0.0;
  }
};

/// ids: rps-fixed | rps-sampled | uniform-3x3 | endgame-fixed | endgame-sampled.
/// The endgame config applies to the endgame-* ids.
std::unique_ptr<GameDistribution> make_distribution(const std::string& id,
                                                    const EndgameConfig& endgame_config = {});

bool is_endgame_id(const std::string& id);

/// Root-state environment of a dealt endgame: one learner per holdable card,
/// rewards are counterfactual values from a frozen-root CFR+ solve, loss
/// weights are the learner's own beliefs.
class EndgameEnvironment : public MetaEnvironment {
 public:
  EndgameEnvironment(SequentialEndgame game, Beliefs beliefs, EnvOptions opts);

  int num_learners() const override { return game_.num_root_infosets(); }
  int num_actions() const override { return game_.root_actions(); }
  double delta_max() const override { return game_.delta_max(); }
  const Eigen::VectorXd& learner_weights() const override { return weights_; }
  const Eigen::VectorXd& context(int learner) const override { return contexts_.at(learner); }
  std::vector<RewardVector> step(const std::vector<StrategyVector>& sigmas) override;
  double exploitability(const std::vector<StrategyVector>& averages) const override;

  const SequentialEndgame& game() const { return game_; }
  const Beliefs& beliefs() const { return beliefs_; }
  double last_residual_gap() const { return last_residual_gap_; }

 private:
  SequentialEndgame game_;
  Beliefs beliefs_;
  EnvOptions opts_;
  Eigen::VectorXd weights_;
  std::vector<Eigen::VectorXd> contexts_;
  double last_residual_gap_ = 0.0;
  // The unfrozen reference solve only matters for evaluation; computed on
  // first use.
  mutable std::optional<double> game_value_;
};

/// Textual snapshot pinning a sampled game for replay: seed, configuration
/// and the dealt board/beliefs at 17 significant digits.
std::string game_snapshot(const GameDistribution& dist, std::uint64_t seed,
                          const EnvOptions& opts);

}  // namespace rlab
