#include "rlab/regret.hpp"

#include <cmath>

namespace rlab {

namespace {
void check_same_size(int a, int b, const char* op) {
  if (a != b) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}
}  // namespace

bool is_simplex(const Eigen::VectorXd& v, double tol) {
  if (v.size() == 0) return false;
  if ((v.array() < -tol).any()) return false;
  return std::abs(v.sum() - 1.0) <= tol;
}

StrategyVector make_strategy(Eigen::VectorXd weights, double tol) {
  if (!is_simplex(weights, tol)) {
    throw std::invalid_argument("make_strategy: not a simplex point within tolerance");
  }
  weights = weights.cwiseMax(0.0);
  weights /= weights.sum();
  return StrategyVector{std::move(weights)};
}

RegretVector instantaneous_regret(const StrategyVector& sigma, const RewardVector& x) {
  check_same_size(sigma.size(), x.size(), "instantaneous_regret");
  double expected = sigma.probs.dot(x.values);
  return RegretVector{(x.values.array() - expected).matrix()};
}

CumulativeRegret accumulate(CumulativeRegret r_sum, const RegretVector& r, Aggregation mode) {
  check_same_size(r_sum.size(), r.size(), "accumulate");
  r_sum.values += r.values;
  if (mode == Aggregation::kPositivePart) r_sum.values = r_sum.values.cwiseMax(0.0);
  r_sum.step_count += 1;
  return r_sum;
}

double external_regret(const CumulativeRegret& r_sum) {
  if (r_sum.size() == 0) return 0.0;
  return r_sum.values.maxCoeff();
}

AverageStrategy update_average(AverageStrategy avg, const StrategyVector& sigma) {
  check_same_size(avg.sum.size() ? static_cast<int>(avg.sum.size()) : sigma.size(),
                  sigma.size(), "update_average");
  if (avg.sum.size() == 0) avg.sum = Eigen::VectorXd::Zero(sigma.size());
  avg.sum += sigma.probs;
  avg.step_count += 1;
  return avg;
}

}  // namespace rlab
