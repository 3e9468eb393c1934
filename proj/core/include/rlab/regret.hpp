#pragma once

#include <stdexcept>

#include <Eigen/Core>

namespace rlab {

inline constexpr double kSimplexTol = 1e-9;

/// Point on the probability simplex over actions.
struct StrategyVector {
  Eigen::VectorXd probs;

  int size() const { return static_cast<int>(probs.size()); }
};

/// Per-action rewards returned by an environment, in game-payoff units.
struct RewardVector {
  Eigen::VectorXd values;

  int size() const { return static_cast<int>(values.size()); }
};

/// Per-action hindsight differences r = x - <sigma, x> * 1.
struct RegretVector {
  Eigen::VectorXd values;

  int size() const { return static_cast<int>(values.size()); }
};

enum class Aggregation {
  kFull,          // R' = R + r
  kPositivePart,  // R' = [R + r]^+
};

/// Running sum of instantaneous regrets. Under kPositivePart every entry
/// stays nonnegative.
struct CumulativeRegret {
  Eigen::VectorXd values;
  int step_count = 0;

  int size() const { return static_cast<int>(values.size()); }
  static CumulativeRegret zeros(int n) {
    return CumulativeRegret{Eigen::VectorXd::Zero(n), 0};
  }
};

/// Width of the environment's reward range (highest minus lowest producible
/// reward). Scales all regret bounds and feature normalization.
struct RewardBound {
  double delta_max = 0.0;
};

/// Uniform running mean of the strategies played so far. The sum is kept
/// exactly; the mean is renormalized on read to absorb float drift.
struct AverageStrategy {
  Eigen::VectorXd sum;
  int step_count = 0;

  static AverageStrategy zeros(int n) {
    return AverageStrategy{Eigen::VectorXd::Zero(n), 0};
  }

  StrategyVector strategy() const {
    int n = static_cast<int>(sum.size());
    if (step_count == 0) return StrategyVector{Eigen::VectorXd::Constant(n, 1.0 / n)};
    Eigen::VectorXd mean = sum / static_cast<double>(step_count);
    double total = mean.sum();
    if (total > 0) mean /= total;
    return StrategyVector{std::move(mean)};
  }
};

/// Uniform strategy over n actions.
inline StrategyVector uniform_strategy(int n) {
  return StrategyVector{Eigen::VectorXd::Constant(n, 1.0 / n)};
}

/// Validates nonnegativity and unit sum (within tol), renormalizing exactly.
StrategyVector make_strategy(Eigen::VectorXd weights, double tol = kSimplexTol);

bool is_simplex(const Eigen::VectorXd& v, double tol = kSimplexTol);

/// r_a = x_a - <sigma, x> for all a.
RegretVector instantaneous_regret(const StrategyVector& sigma, const RewardVector& x);

/// Adds one instantaneous regret to the running sum in the given mode and
/// increments step_count.
CumulativeRegret accumulate(CumulativeRegret r_sum, const RegretVector& r, Aggregation mode);

/// Signed maximum entry of the cumulative regret (may be negative).
double external_regret(const CumulativeRegret& r_sum);

/// Extends the uniform running mean with one more strategy.
AverageStrategy update_average(AverageStrategy avg, const StrategyVector& sigma);

}  // namespace rlab
