#include <doctest.h>

#include "rlab/env.hpp"
#include "rlab/matrix_games.hpp"

using namespace rlab;

TEST_CASE("rps-fixed matrix is exact") {
  Rng rng(1);
  MatrixGame g = sample_matrix_game({MatrixKind::kRpsFixed}, rng);
  Eigen::MatrixXd expected(3, 3);
  expected << 0, -1, 3, 1, 0, -1, -1, 1, 0;
  CHECK((g.payoff - expected).cwiseAbs().maxCoeff() == 0.0);
  CHECK(g.delta_max() == doctest::Approx(4.0));
}

TEST_CASE("rps-sampled perturbs exactly two entries") {
  for (std::uint64_t seed : {2u, 3u, 4u, 5u}) {
    Rng rng(seed);
    MatrixGame g = sample_matrix_game({MatrixKind::kRpsSampled}, rng);
    CHECK(g.payoff(0, 2) >= 2.0);
    CHECK(g.payoff(0, 2) <= 4.0);
    CHECK(g.payoff(1, 1) >= -1.0);
    CHECK(g.payoff(1, 1) <= 1.0);
    CHECK(g.payoff(0, 0) == 0.0);
    CHECK(g.payoff(0, 1) == -1.0);
    CHECK(g.payoff(1, 0) == 1.0);
    CHECK(g.payoff(1, 2) == -1.0);
    CHECK(g.payoff(2, 0) == -1.0);
    CHECK(g.payoff(2, 1) == 1.0);
    CHECK(g.payoff(2, 2) == 0.0);
  }
}

TEST_CASE("sampling is deterministic per seed") {
  for (MatrixKind kind : {MatrixKind::kRpsSampled, MatrixKind::kUniform3x3}) {
    Rng a(42), b(42), c(43);
    MatrixGame ga = sample_matrix_game({kind}, a);
    MatrixGame gb = sample_matrix_game({kind}, b);
    MatrixGame gc = sample_matrix_game({kind}, c);
    CHECK((ga.payoff - gb.payoff).cwiseAbs().maxCoeff() == 0.0);
    CHECK((ga.payoff - gc.payoff).cwiseAbs().maxCoeff() > 0.0);
  }
}

TEST_CASE("best response reward on rps-fixed") {
  Rng rng(1);
  MatrixGame g = sample_matrix_game({MatrixKind::kRpsFixed}, rng);
  StrategyVector uniform{Eigen::Vector3d(1.0 / 3, 1.0 / 3, 1.0 / 3)};
  RewardVector x = best_response_reward(g, uniform);
  // Column values are (0, 0, 2/3); the tie breaks to column 0.
  CHECK(x.values[0] == doctest::Approx(0));
  CHECK(x.values[1] == doctest::Approx(1));
  CHECK(x.values[2] == doctest::Approx(-1));
}

TEST_CASE("best response against a pure row picks that row's worst column") {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    MatrixGame g = sample_matrix_game({MatrixKind::kUniform3x3}, rng);
    for (int i = 0; i < 3; ++i) {
      Eigen::Vector3d pure = Eigen::Vector3d::Zero();
      pure[i] = 1.0;
      RewardVector x = best_response_reward(g, StrategyVector{pure});
      int expected_col = 0;
      for (int j = 1; j < 3; ++j) {
        if (g.payoff(i, j) < g.payoff(i, expected_col)) expected_col = j;
      }
      CHECK((x.values - g.payoff.col(expected_col)).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("best response reward minimizes over all columns") {
  Rng rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    MatrixGame g = sample_matrix_game({MatrixKind::kUniform3x3}, rng);
    Eigen::Vector3d w(rng.uniform(), rng.uniform(), rng.uniform());
    StrategyVector sigma{w / w.sum()};
    RewardVector x = best_response_reward(g, sigma);
    double got = sigma.probs.dot(x.values);
    double best = (g.payoff.transpose() * sigma.probs).minCoeff();
    CHECK(got == doctest::Approx(best));
  }
}

TEST_CASE("1x1 game best response returns the single entry") {
  MatrixGame g{Eigen::MatrixXd::Constant(1, 1, 2.5)};
  RewardVector x = best_response_reward(g, StrategyVector{Eigen::VectorXd::Ones(1)});
  CHECK(x.values[0] == doctest::Approx(2.5));
}

TEST_CASE("game values of known games") {
  Eigen::MatrixXd pennies(2, 2);
  pennies << 1, -1, -1, 1;
  CHECK(game_value(MatrixGame{pennies}) == doctest::Approx(0.0).epsilon(1e-9));

  CHECK(game_value(MatrixGame{Eigen::MatrixXd::Ones(2, 2)}) == doctest::Approx(1.0));

  Rng rng(1);
  MatrixGame rps = sample_matrix_game({MatrixKind::kRpsFixed}, rng);
  CHECK(game_value(rps) == doctest::Approx(2.0 / 15).epsilon(1e-9));
}

TEST_CASE("support enumeration agrees with certified self-play") {
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    MatrixGame g = sample_matrix_game({MatrixKind::kUniform3x3}, rng);
    double enumerated = game_value(g);
    SelfPlayResult sp = rm_plus_self_play(g, 1'000'000, 1e-8);
    CHECK(sp.gap() < 1e-6);
    CHECK(enumerated == doctest::Approx(sp.value()).epsilon(1e-6));
  }
}

TEST_CASE("zero-sum duality of game_value") {
  Rng rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    MatrixGame g = sample_matrix_game({MatrixKind::kUniform3x3}, rng);
    MatrixGame dual{(-g.payoff).transpose().eval()};
    CHECK(game_value(g) == doctest::Approx(-game_value(dual)).epsilon(1e-8));
  }
}

TEST_CASE("matrix exploitability") {
  Rng rng(1);
  MatrixGame rps = sample_matrix_game({MatrixKind::kRpsFixed}, rng);

  // Equalizing strategy (1/5, 7/15, 1/3) guarantees the value everywhere.
  StrategyVector equilibrium{Eigen::Vector3d(0.2, 7.0 / 15, 1.0 / 3)};
  CHECK(exploitability_matrix(rps, equilibrium) == doctest::Approx(0.0).epsilon(1e-9));

  StrategyVector uniform{Eigen::Vector3d(1.0 / 3, 1.0 / 3, 1.0 / 3)};
  CHECK(exploitability_matrix(rps, uniform) == doctest::Approx(2.0 / 15));

  MatrixGame constant{Eigen::MatrixXd::Constant(3, 3, 0.7)};
  CHECK(exploitability_matrix(constant, uniform) == doctest::Approx(0.0));

  Rng rng2(55);
  for (int trial = 0; trial < 50; ++trial) {
    MatrixGame g = sample_matrix_game({MatrixKind::kUniform3x3}, rng2);
    Eigen::Vector3d w(rng2.uniform(), rng2.uniform(), rng2.uniform());
    CHECK(exploitability_matrix(g, StrategyVector{w / w.sum()}) >= -1e-9);
  }
}

TEST_CASE("matrix environment caches the value and answers steps") {
  Rng rng(1);
  MatrixEnvironment env(sample_matrix_game({MatrixKind::kRpsFixed}, rng), 4.0);
  CHECK(env.value() == doctest::Approx(2.0 / 15));
  CHECK(env.delta_max() == doctest::Approx(4.0));
  StrategyVector uniform{Eigen::Vector3d(1.0 / 3, 1.0 / 3, 1.0 / 3)};
  CHECK(env.exploitability(uniform) == doctest::Approx(2.0 / 15));
  RewardVector x = env.step(uniform);
  CHECK(x.values[1] == doctest::Approx(1.0));
}
