#include "rlab/matrix_games.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace rlab {

double MatrixDistribution::delta_max() const {
  switch (kind) {
    case MatrixKind::kRpsFixed:
      return 4.0;  // entries span [-1, 3]
    case MatrixKind::kRpsSampled:
      return 5.0;  // top entry reaches 4, minimum stays -1
    case MatrixKind::kUniform3x3:
      return 2.0;  // entries span (-1, 1)
  }
  throw std::logic_error("unreachable");
}

std::string MatrixDistribution::id() const {
  switch (kind) {
    case MatrixKind::kRpsFixed:
      return "rps-fixed";
    case MatrixKind::kRpsSampled:
      return "rps-sampled";
    case MatrixKind::kUniform3x3:
      return "uniform-3x3";
  }
  throw std::logic_error("unreachable");
}

MatrixDistribution matrix_distribution_from_id(const std::string& id) {
  if (id == "rps-fixed") return {MatrixKind::kRpsFixed};
  if (id == "rps-sampled") return {MatrixKind::kRpsSampled};
  if (id == "uniform-3x3") return {MatrixKind::kUniform3x3};
  throw std::invalid_argument("unknown matrix distribution id: " + id);
}

namespace {
Eigen::MatrixXd rps_matrix(double x, double y) {
  Eigen::MatrixXd u(3, 3);
  u << 0, -1, 3 + x,
       1, y, -1,
      -1, 1, 0;
  return u;
}
}  // namespace

MatrixGame sample_matrix_game(const MatrixDistribution& dist, Rng& rng) {
  switch (dist.kind) {
    case MatrixKind::kRpsFixed:
      return MatrixGame{rps_matrix(0.0, 0.0)};
    case MatrixKind::kRpsSampled: {
      double x = rng.uniform(-1.0, 1.0);
      double y = rng.uniform(-1.0, 1.0);
      return MatrixGame{rps_matrix(x, y)};
    }
    case MatrixKind::kUniform3x3: {
      Eigen::MatrixXd u(3, 3);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) u(i, j) = rng.uniform(-1.0, 1.0);
      return MatrixGame{u};
    }
  }
  throw std::logic_error("unreachable");
}

RewardVector best_response_reward(const MatrixGame& game, const StrategyVector& sigma) {
  if (sigma.size() != game.rows()) {
    throw std::invalid_argument("best_response_reward: strategy/row dimension mismatch");
  }
  Eigen::VectorXd column_values = game.payoff.transpose() * sigma.probs;
  int best = 0;
  for (int j = 1; j < game.cols(); ++j) {
    if (column_values[j] < column_values[best]) best = j;
  }
  return RewardVector{game.payoff.col(best)};
}

namespace {

StrategyVector rm_plus_match(const Eigen::VectorXd& regrets) {
  Eigen::VectorXd pos = regrets.cwiseMax(0.0);
  double s = pos.sum();
  if (s > 0) return StrategyVector{pos / s};
  return uniform_strategy(static_cast<int>(regrets.size()));
}

}  // namespace

SelfPlayResult rm_plus_self_play(const MatrixGame& game, long max_iters, double target_gap) {
  const int m = game.rows(), n = game.cols();
  Eigen::VectorXd row_regret = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd col_regret = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd row_avg = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd col_avg = Eigen::VectorXd::Zero(n);

  // Every averaged iterate yields a valid bracket around the value (its own
  // best-response certificate); intersecting the brackets over time only
  // tightens them.
  SelfPlayResult result;
  result.value_lo = -std::numeric_limits<double>::infinity();
  result.value_hi = std::numeric_limits<double>::infinity();
  const long check_every = 256;

  auto refresh_bracket = [&] {
    Eigen::VectorXd ra = row_avg / row_avg.sum();
    Eigen::VectorXd ca = col_avg / col_avg.sum();
    result.value_lo = std::max(result.value_lo, (game.payoff.transpose() * ra).minCoeff());
    result.value_hi = std::min(result.value_hi, (game.payoff * ca).maxCoeff());
  };

  for (long t = 1; t <= max_iters; ++t) {
    // Alternating updates: the row player responds to the column player's
    // current strategy, then the column player responds to the new one.
    StrategyVector col = rm_plus_match(col_regret);
    Eigen::VectorXd row_values = game.payoff * col.probs;
    StrategyVector row = rm_plus_match(row_regret);
    double row_expected = row.probs.dot(row_values);
    row_regret = (row_regret + (row_values.array() - row_expected).matrix()).cwiseMax(0.0);

    row = rm_plus_match(row_regret);
    Eigen::VectorXd col_values = -(game.payoff.transpose() * row.probs);
    double col_expected = col.probs.dot(col_values);
    col_regret = (col_regret + (col_values.array() - col_expected).matrix()).cwiseMax(0.0);

    double w = static_cast<double>(t);
    row_avg += w * row.probs;
    col_avg += w * rm_plus_match(col_regret).probs;
    result.iterations = t;

    if (t % check_every == 0 || t == max_iters) {
      refresh_bracket();
      if (target_gap > 0 && result.gap() < target_gap) return result;
    }
  }
  return result;
}

namespace {

// Enumerates square supports in increasing size; for each, solves the
// equalizing linear system for both players and verifies the pair is optimal
// on the full matrix.
bool support_enumeration_value(const Eigen::MatrixXd& u, double* value_out) {
  const int m = static_cast<int>(u.rows());
  const int n = static_cast<int>(u.cols());
  const double tol = 1e-9;

  std::vector<int> rows_subset, cols_subset;
  std::vector<std::vector<int>> row_subsets, col_subsets;
  for (int k = 1; k <= std::min(m, n); ++k) {
    row_subsets.clear();
    col_subsets.clear();
    std::vector<int> idx(k);
    // all k-subsets of [0, m)
    auto gen = [&](int limit, std::vector<std::vector<int>>& out) {
      std::vector<int> cur(k);
      for (int i = 0; i < k; ++i) cur[i] = i;
      while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == limit - k + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
      }
    };
    gen(m, row_subsets);
    gen(n, col_subsets);

    for (const auto& sr : row_subsets) {
      for (const auto& sc : col_subsets) {
        Eigen::MatrixXd b(k, k);
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) b(i, j) = u(sr[i], sc[j]);

        // Row strategy p on sr with p^T b = v 1, sum p = 1.
        Eigen::MatrixXd a1 = Eigen::MatrixXd::Zero(k + 1, k + 1);
        a1.block(0, 0, k, k) = b.transpose();
        a1.block(0, k, k, 1) = -Eigen::VectorXd::Ones(k);
        a1.block(k, 0, 1, k) = Eigen::RowVectorXd::Ones(k);
        Eigen::VectorXd rhs1 = Eigen::VectorXd::Zero(k + 1);
        rhs1[k] = 1.0;
        Eigen::FullPivLU<Eigen::MatrixXd> lu1(a1);
        if (!lu1.isInvertible()) continue;
        Eigen::VectorXd sol1 = lu1.solve(rhs1);

        // Column strategy q on sc with b q = v 1, sum q = 1.
        Eigen::MatrixXd a2 = Eigen::MatrixXd::Zero(k + 1, k + 1);
        a2.block(0, 0, k, k) = b;
        a2.block(0, k, k, 1) = -Eigen::VectorXd::Ones(k);
        a2.block(k, 0, 1, k) = Eigen::RowVectorXd::Ones(k);
        Eigen::VectorXd rhs2 = Eigen::VectorXd::Zero(k + 1);
        rhs2[k] = 1.0;
        Eigen::FullPivLU<Eigen::MatrixXd> lu2(a2);
        if (!lu2.isInvertible()) continue;
        Eigen::VectorXd sol2 = lu2.solve(rhs2);

        double v1 = sol1[k], v2 = sol2[k];
        if (std::abs(v1 - v2) > 1e-7) continue;

        bool feasible = true;
        for (int i = 0; i < k && feasible; ++i) {
          if (sol1[i] < -tol || sol2[i] < -tol) feasible = false;
        }
        if (!feasible) continue;

        Eigen::VectorXd p = Eigen::VectorXd::Zero(m);
        Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < k; ++i) {
          p[sr[i]] = std::max(sol1[i], 0.0);
          q[sc[i]] = std::max(sol2[i], 0.0);
        }
        p /= p.sum();
        q /= q.sum();

        // Optimality on the full matrix: p guarantees at least v on every
        // column, q concedes at most v on every row.
        double v = 0.5 * (v1 + v2);
        if (((u.transpose() * p).array() < v - 1e-8).any()) continue;
        if (((u * q).array() > v + 1e-8).any()) continue;

        *value_out = v;
        return true;
      }
    }
  }
  return false;
}

}  // namespace

double game_value(const MatrixGame& game) {
  if (game.rows() == 0 || game.cols() == 0) {
    throw std::invalid_argument("game_value: empty matrix");
  }
  double v = 0.0;
  if (support_enumeration_value(game.payoff, &v)) return v;
  SelfPlayResult fallback = rm_plus_self_play(game, 50'000'000, 1e-9);
  return fallback.value();
}

double exploitability_matrix(const MatrixGame& game, const StrategyVector& sigma) {
  if (sigma.size() != game.rows()) {
    throw std::invalid_argument("exploitability_matrix: dimension mismatch");
  }
  double worst_case = (game.payoff.transpose() * sigma.probs).minCoeff();
  return game_value(game) - worst_case;
}

}  // namespace rlab
