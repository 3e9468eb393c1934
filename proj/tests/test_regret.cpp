#include <doctest.h>

#include "rlab/regret.hpp"
#include "rlab/rng.hpp"

using namespace rlab;

namespace {
StrategyVector strat(std::initializer_list<double> v) {
  Eigen::VectorXd p(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) p[i++] = x;
  return StrategyVector{p};
}
RewardVector reward(std::initializer_list<double> v) {
  Eigen::VectorXd p(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) p[i++] = x;
  return RewardVector{p};
}
}  // namespace

TEST_CASE("instantaneous regret examples") {
  RegretVector r = instantaneous_regret(strat({1, 0}), reward({0, 1}));
  CHECK(r.values[0] == doctest::Approx(0.0));
  CHECK(r.values[1] == doctest::Approx(1.0));

  for (double c : {-3.0, 0.0, 2.5}) {
    RegretVector rc = instantaneous_regret(strat({0.5, 0.5}), reward({c, c}));
    CHECK(rc.values.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  }

  RegretVector r3 =
      instantaneous_regret(strat({1.0 / 3, 1.0 / 3, 1.0 / 3}), reward({0, 1, -1}));
  CHECK(r3.values[0] == doctest::Approx(0.0));
  CHECK(r3.values[1] == doctest::Approx(1.0));
  CHECK(r3.values[2] == doctest::Approx(-1.0));

  CHECK_THROWS_AS(instantaneous_regret(strat({1, 0}), reward({1, 0, 0})),
                  std::invalid_argument);
}

TEST_CASE("regret is orthogonal to the strategy that produced it") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + rng.uniform_int(5);
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) w[i] = rng.uniform();
    StrategyVector sigma{w / w.sum()};
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(-5, 5);
    RegretVector r = instantaneous_regret(sigma, RewardVector{x});
    CHECK(std::abs(sigma.probs.dot(r.values)) < 1e-9);
  }
}

TEST_CASE("accumulate in both modes") {
  CumulativeRegret r_sum{Eigen::Vector2d(1, -2), 3};
  RegretVector r{Eigen::Vector2d(1, 1)};

  CumulativeRegret full = accumulate(r_sum, r, Aggregation::kFull);
  CHECK(full.values[0] == doctest::Approx(2));
  CHECK(full.values[1] == doctest::Approx(-1));
  CHECK(full.step_count == 4);

  CumulativeRegret plus = accumulate(r_sum, r, Aggregation::kPositivePart);
  CHECK(plus.values[0] == doctest::Approx(2));
  CHECK(plus.values[1] == doctest::Approx(0));

  CumulativeRegret zero = CumulativeRegret::zeros(2);
  RegretVector zr{Eigen::Vector2d(0, 0)};
  for (auto mode : {Aggregation::kFull, Aggregation::kPositivePart}) {
    CumulativeRegret out = accumulate(zero, zr, mode);
    CHECK(out.values.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("positive-part accumulation dominates full accumulation") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 2 + rng.uniform_int(4);
    CumulativeRegret full = CumulativeRegret::zeros(n);
    CumulativeRegret plus = CumulativeRegret::zeros(n);
    for (int t = 0; t < 30; ++t) {
      Eigen::VectorXd v(n);
      for (int i = 0; i < n; ++i) v[i] = rng.uniform(-1, 1);
      RegretVector r{v};
      full = accumulate(std::move(full), r, Aggregation::kFull);
      plus = accumulate(std::move(plus), r, Aggregation::kPositivePart);
      CHECK(((plus.values - full.values).array() >= -1e-12).all());
      CHECK((plus.values.array() >= 0).all());
    }
  }
}

TEST_CASE("external regret is the signed max") {
  CHECK(external_regret({Eigen::Vector2d(-1, -2), 1}) == doctest::Approx(-1));
  CHECK(external_regret({Eigen::Vector3d(0, 0, 0), 1}) == doctest::Approx(0));
  CHECK(external_regret({Eigen::Vector2d(3, -5), 1}) == doctest::Approx(3));
}

TEST_CASE("average strategy running mean") {
  AverageStrategy avg = AverageStrategy::zeros(2);
  avg = update_average(avg, strat({1, 0}));
  avg = update_average(avg, strat({0, 1}));
  StrategyVector mean = avg.strategy();
  CHECK(mean.probs[0] == doctest::Approx(0.5));
  CHECK(mean.probs[1] == doctest::Approx(0.5));

  AverageStrategy same = AverageStrategy::zeros(2);
  same = update_average(same, strat({0.25, 0.75}));
  same = update_average(same, strat({0.25, 0.75}));
  CHECK(same.strategy().probs[1] == doctest::Approx(0.75));

  AverageStrategy mixed = AverageStrategy::zeros(2);
  mixed = update_average(mixed, strat({1, 0}));
  mixed = update_average(mixed, strat({1, 0}));
  mixed = update_average(mixed, strat({0, 1}));
  CHECK(mixed.strategy().probs[0] == doctest::Approx(2.0 / 3));
}

TEST_CASE("average strategy stays on the simplex and matches the direct mean") {
  Rng rng(13);
  AverageStrategy avg = AverageStrategy::zeros(4);
  Eigen::VectorXd direct = Eigen::VectorXd::Zero(4);
  for (int t = 1; t <= 500; ++t) {
    Eigen::VectorXd w(4);
    for (int i = 0; i < 4; ++i) w[i] = rng.uniform();
    StrategyVector sigma{w / w.sum()};
    avg = update_average(std::move(avg), sigma);
    direct += sigma.probs;
    StrategyVector mean = avg.strategy();
    CHECK(is_simplex(mean.probs));
    CHECK((mean.probs - direct / t).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("make_strategy validates and renormalizes") {
  CHECK_THROWS_AS(make_strategy(Eigen::Vector2d(0.6, 0.6)), std::invalid_argument);
  CHECK_THROWS_AS(make_strategy(Eigen::Vector2d(1.5, -0.5)), std::invalid_argument);
  StrategyVector ok = make_strategy(Eigen::Vector2d(0.5 + 1e-12, 0.5));
  CHECK(ok.probs.sum() == doctest::Approx(1.0).epsilon(1e-15));
}
