#pragma once

#include <memory>
#include <vector>

#include "rlab/matrix_games.hpp"
#include "rlab/regret.hpp"

namespace rlab {

/// One online learning task: submit a strategy, receive per-action rewards.
/// Implementations are deterministic given their construction seed.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual int num_actions() const = 0;
  virtual double delta_max() const = 0;
  virtual RewardVector step(const StrategyVector& sigma) = 0;
  virtual double exploitability(const StrategyVector& average) const = 0;
};

/// A sampled game whose root decision may span several information sets, all
/// sharing the same action set. The learners submit one strategy per infoset
/// and are scored by the weighted mean of their external regrets; matrix games
/// are the one-infoset case.
class MetaEnvironment {
 public:
  virtual ~MetaEnvironment() = default;

  virtual int num_learners() const = 0;
  virtual int num_actions() const = 0;
  virtual double delta_max() const = 0;
  /// Loss/exploitability weights per learner; sums to 1.
  virtual const Eigen::VectorXd& learner_weights() const = 0;
  /// Observation features for one learner; empty for matrix games.
  virtual const Eigen::VectorXd& context(int learner) const = 0;
  virtual std::vector<RewardVector> step(const std::vector<StrategyVector>& sigmas) = 0;
  virtual double exploitability(const std::vector<StrategyVector>& averages) const = 0;
};

/// Matrix game against a best-responding opponent. The game value is computed
/// once at construction so per-step exploitability is a dot product.
class MatrixEnvironment : public Environment {
 public:
  explicit MatrixEnvironment(MatrixGame game, double declared_delta_max = 0.0)
      : game_(std::move(game)),
        value_(game_value(game_)),
        delta_max_(declared_delta_max > 0 ? declared_delta_max : game_.delta_max()) {}

  int num_actions() const override { return game_.rows(); }
  double delta_max() const override { return delta_max_; }

  RewardVector step(const StrategyVector& sigma) override {
    return best_response_reward(game_, sigma);
  }

  double exploitability(const StrategyVector& average) const override {
    return value_ - (game_.payoff.transpose() * average.probs).minCoeff();
  }

  const MatrixGame& game() const { return game_; }
  double value() const { return value_; }

 private:
  MatrixGame game_;
  double value_;
  double delta_max_;
};

/// Adapts a single-learner environment to the multi-learner interface.
class SingleEnvAdapter : public MetaEnvironment {
 public:
  explicit SingleEnvAdapter(std::unique_ptr<Environment> env)
      : env_(std::move(env)), weights_(Eigen::VectorXd::Ones(1)), context_(0) {}

  int num_learners() const override { return 1; }
  int num_actions() const override { return env_->num_actions(); }
  double delta_max() const override { return env_->delta_max(); }
  const Eigen::VectorXd& learner_weights() const override { return weights_; }
  const Eigen::VectorXd& context(int) const override { return context_; }

  std::vector<RewardVector> step(const std::vector<StrategyVector>& sigmas) override {
    return {env_->step(sigmas.at(0))};
  }
  double exploitability(const std::vector<StrategyVector>& averages) const override {
    return env_->exploitability(averages.at(0));
  }

  Environment& inner() { return *env_; }

 private:
  std::unique_ptr<Environment> env_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd context_;
};

}  // namespace rlab
