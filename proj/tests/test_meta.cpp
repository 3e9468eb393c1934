#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "rlab/meta.hpp"
#include "test_helpers.hpp"

using namespace rlab;

namespace {

TrainConfig small_config(Kind kind, const std::string& dist) {
  TrainConfig cfg;
  cfg.algorithm = kind;
  cfg.distribution = dist;
  cfg.horizon = 8;
  cfg.epochs = 4;
  cfg.batch_size = 4;
  cfg.hidden_dim = 6;
  cfg.eval_every = 0;
  cfg.record_timing = false;
  cfg.seed = 5;
  return cfg;
}

}  // namespace

TEST_CASE("zero epochs leave the initialization untouched (rm-equivalent nprm)") {
  TrainConfig cfg = small_config(Kind::kNprm, "rps-sampled");
  cfg.epochs = 0;
  TrainResult result = meta_train(cfg);
  CHECK(result.report.empty());
  // The head starts zeroed, so the untrained predictor is exactly zero.
  CHECK(result.params.blocks.head_weight.cwiseAbs().maxCoeff() == 0.0);
  CHECK(result.params.blocks.head_bias.cwiseAbs().maxCoeff() == 0.0);
  CHECK(result.meta.algorithm == "nprm");
  CHECK(result.params.alpha == doctest::Approx(10.0));  // 2 * delta_max
}

TEST_CASE("constant rewards give zero loss and frozen weights") {
  rlab::testing::FixedMatrixDistribution constant(Eigen::MatrixXd::Constant(3, 3, 0.4), 1.0);
  TrainConfig cfg = small_config(Kind::kNprm, "fixed-matrix-test");
  cfg.epochs = 5;
  TrainResult trained = meta_train(cfg, constant);

  NetworkParams init = init_network(HeadKind::kPredictionBounded, 6, cfg.hidden_dim, 3,
                                    2.0 * constant.delta_max(), cfg.seed);
  for (const TrainReportRow& row : trained.report) CHECK(row.mean_loss == doctest::Approx(0.0));
  auto a = block_views(trained.params.blocks);
  auto b = block_views(init.blocks);
  for (size_t i = 0; i < a.size(); ++i) {
    for (std::ptrdiff_t k = 0; k < a[i].size; ++k) CHECK(a[i].data[k] == b[i].data[k]);
  }
}

TEST_CASE("training is reproducible") {
  TrainConfig cfg = small_config(Kind::kNoa, "rps-sampled");
  cfg.record_timing = false;
  TrainResult a = meta_train(cfg);
  TrainResult b = meta_train(cfg);
  auto va = block_views(a.params.blocks);
  auto vb = block_views(b.params.blocks);
  for (size_t i = 0; i < va.size(); ++i) {
    for (std::ptrdiff_t k = 0; k < va[i].size; ++k) CHECK(va[i].data[k] == vb[i].data[k]);
  }
  REQUIRE(a.report.size() == b.report.size());
  for (size_t i = 0; i < a.report.size(); ++i) {
    CHECK(a.report[i].mean_loss == b.report[i].mean_loss);
  }
}

TEST_CASE("training loss matches the trace replay identity") {
  // The loss logged per epoch is a mean over batch losses, each of which is
  // the weighted external regret of a recorded episode. Rerun one game
  // deterministically and confirm.
  TrainConfig cfg = small_config(Kind::kNprm, "uniform-3x3");
  cfg.epochs = 1;
  cfg.batch_size = 1;
  TrainResult result = meta_train(cfg);

  auto dist = make_distribution("uniform-3x3");
  auto env = dist->make_env(derive_seed(cfg.seed, seed_stream::kTrainGame, 0), {});
  NetworkParams init = init_network(HeadKind::kPredictionBounded, 6, cfg.hidden_dim, 3,
                                    2.0 * dist->delta_max(), cfg.seed);
  UnrollTrace trace = unroll_and_loss(init, Kind::kNprm, *env, cfg.horizon, cfg.horizon);
  CHECK(result.report[0].mean_loss == doctest::Approx(trace.loss).epsilon(1e-12));
}

TEST_CASE("evaluate: determinism and classic RM decay on sampled games") {
  auto dist = make_distribution("rps-sampled");
  EvalConfig cfg;
  cfg.n_games = 64;
  cfg.horizon = 128;
  cfg.train_horizon = 64;
  cfg.record_timing = false;
  EvalCurve a = evaluate(AlgorithmSpec::classic(Kind::kRm), *dist, cfg);
  EvalCurve b = evaluate(AlgorithmSpec::classic(Kind::kRm), *dist, cfg);
  for (int t = 0; t < cfg.horizon; ++t) CHECK(a.mean[t] == b.mean[t]);

  // Average regret decays roughly like 1/sqrt(t): the curve at 2T sits below
  // the curve at T/2.
  CHECK(a.mean[127] < a.mean[31]);
  CHECK(a.stderr_[127] >= 0.0);
  CHECK(a.bound_violations == 0);
}

TEST_CASE("evaluate rejects checkpoints with mismatched shapes") {
  Checkpoint ck;
  ck.params = init_network(HeadKind::kPredictionBounded, 6, 4, 3, 4.0, 3);
  ck.meta.algorithm = "nprm";
  ck.meta.distribution = "rps-sampled";
  ck.meta.train_horizon = 16;
  AlgorithmSpec spec = AlgorithmSpec::from_checkpoint(ck);

  EndgameConfig toy;
  toy.deck_ranks = 2;
  toy.max_raises = 0;
  auto endgame = make_distribution("endgame-sampled", toy);
  EvalConfig cfg;
  cfg.n_games = 1;
  cfg.horizon = 4;
  CHECK_THROWS_WITH_AS(evaluate(spec, *endgame, cfg),
                       doctest::Contains("action count"), std::runtime_error);
}

TEST_CASE("steps_to_target") {
  EvalCurve fast;
  fast.label = "fast";
  fast.mean = {0.5, 0.2, 0.05, 0.01};
  EvalCurve slow;
  slow.label = "slow";
  slow.mean = {0.6, 0.5, 0.4, 0.35};

  StepsToTargetTable table = steps_to_target({fast, slow}, {0.4, 0.1, 0.02});
  CHECK(table.steps[0][0] == 2);
  CHECK(table.steps[0][1] == 3);
  CHECK(table.steps[0][2] == 4);
  CHECK(table.steps[1][0] == 3);
  CHECK(table.steps[1][1] == -1);
  CHECK(table.steps[1][2] == -1);

  // Monotone in target strictness.
  for (const auto& row : table.steps) {
    long prev = 0;
    for (long steps : row) {
      if (steps < 0) continue;
      CHECK(steps >= prev);
      prev = steps;
    }
  }

  CHECK_THROWS_AS(steps_to_target({fast}, {0.1, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(steps_to_target({fast}, {0.4, -0.1}), std::invalid_argument);
  CHECK_THROWS_AS(steps_to_target({fast}, {}), std::invalid_argument);

  std::string text = format_table_text(table);
  CHECK(text.find("fast") != std::string::npos);
  CHECK(text.find("—") != std::string::npos);
}

TEST_CASE("bound_check on real and synthetic trajectories") {
  // Zero-prediction RM trajectory: the alpha = 0 ceiling holds.
  rlab::testing::RandomRewardEnvironment env(3, 2.0, 404);
  MinimizerState rm = make_minimizer(Kind::kRm, 3);
  Trajectory traj = run_episode(rm, env, 64);
  BoundCheckResult rm_check = bound_check(traj, 0.0, 2.0);
  CHECK(rm_check.holds);
  CHECK(rm_check.margin > 0.0);

  // Perfect predictions: the residual sum vanishes; a constant-reward
  // trajectory realizes it with zero regret.
  Trajectory perfect;
  for (int t = 0; t < 16; ++t) {
    perfect.strategies.push_back(uniform_strategy(2));
    perfect.rewards.push_back(RewardVector{Eigen::Vector2d(0.7, 0.7)});
    perfect.predictions.push_back(PredictionVector{Eigen::Vector2d(0, 0)});
  }
  BoundCheckResult perfect_check = bound_check(perfect, 1.0, 2.0);
  CHECK(perfect_check.holds);

  // A synthetic violation: real regret with an absurdly small declared range.
  Trajectory bad;
  Eigen::Vector2d x(1.0, -1.0);
  for (int t = 0; t < 32; ++t) {
    bad.strategies.push_back(StrategyVector{Eigen::Vector2d(0, 1)});
    bad.rewards.push_back(RewardVector{x});
    bad.predictions.push_back(PredictionVector{Eigen::Vector2d(0, 0)});
  }
  BoundCheckResult bad_check = bound_check(bad, 0.0, 1e-6);
  CHECK(!bad_check.holds);

  // Randomized property: bounded predictions against bounded rewards.
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + rng.uniform_int(3);
    double delta = 2.0, alpha = 2 * delta;
    Trajectory t;
    Eigen::VectorXd cumulative = Eigen::VectorXd::Zero(n);
    for (int step = 0; step < 64; ++step) {
      Eigen::VectorXd p(n), x_step(n);
      for (int i = 0; i < n; ++i) {
        p[i] = rng.uniform(-alpha, alpha);
        x_step[i] = rng.uniform(-1, 1);
      }
      StrategyVector sigma = strategy_from(cumulative, p, false, 0);
      t.strategies.push_back(sigma);
      t.rewards.push_back(RewardVector{x_step});
      t.predictions.push_back(PredictionVector{p});
      cumulative += (x_step.array() - sigma.probs.dot(x_step)).matrix();
    }
    BoundCheckResult check = bound_check(t, alpha, delta);
    CHECK(check.holds);
  }
}

TEST_CASE("curve csv round trip") {
  EvalCurve curve;
  curve.label = "rm";
  curve.train_horizon = 4;
  curve.mean = {0.5, 0.25, std::numeric_limits<double>::quiet_NaN(), 0.125};
  curve.stderr_ = {0.01, 0.005, std::numeric_limits<double>::quiet_NaN(), 0.001};
  curve.env_ms = {1, 2, 3, 4};
  curve.algo_ms = {0.5, 1, 1.5, 2};
  auto path = (std::filesystem::temp_directory_path() / "rlab_curve_test.csv").string();
  write_curve_csv(curve, path);
  EvalCurve loaded = read_curve_csv(path);
  CHECK(loaded.label == "rlab_curve_test");
  REQUIRE(loaded.mean.size() == 4);
  CHECK(loaded.mean[0] == 0.5);
  CHECK(std::isnan(loaded.mean[2]));
  CHECK(loaded.mean[3] == 0.125);
  CHECK(loaded.env_ms[3] == 4);
  std::filesystem::remove(path);
}

TEST_CASE("ood evaluation flags incompatible action counts") {
  Checkpoint ck;
  ck.params = init_network(HeadKind::kPredictionBounded, 6, 4, 3, 10.0, 3);
  ck.meta.algorithm = "nprm";
  ck.meta.distribution = "rps-sampled";
  ck.meta.train_horizon = 8;

  EndgameConfig toy;
  toy.deck_ranks = 2;
  toy.max_raises = 0;
  auto endgame = make_distribution("endgame-sampled", toy);
  EvalConfig cfg;
  cfg.n_games = 1;
  cfg.horizon = 4;
  CHECK_THROWS_AS(ood_evaluate(ck, *endgame, cfg), std::runtime_error);
}

TEST_CASE("ood evaluation of an untrained prediction head keeps the ceiling") {
  Checkpoint ck;
  ck.params = init_network(HeadKind::kPredictionBounded, 6, 6, 3, 10.0, 9);
  ck.meta.algorithm = "nprm";
  ck.meta.distribution = "rps-sampled";
  ck.meta.train_horizon = 16;

  auto uniform = make_distribution("uniform-3x3");
  EvalConfig cfg;
  cfg.n_games = 16;
  cfg.horizon = 32;
  cfg.train_horizon = 16;
  cfg.record_timing = false;
  OodResult result = ood_evaluate(ck, *uniform, cfg);
  CHECK(result.guarantee_applies);
  CHECK(result.bound_holds);
  CHECK(result.in_dist.mean.size() == 32);
  CHECK(result.out_dist.mean.size() == 32);
  CHECK(result.regret_rate_at_horizon <= result.regret_rate_at_train_horizon + 1e-9);
}

TEST_CASE("multi episode runner on the endgame with classic algorithms") {
  EndgameConfig toy;
  toy.deck_ranks = 2;
  toy.max_raises = 0;
  auto dist = make_distribution("endgame-sampled", toy);
  EnvOptions opts{100, 400};
  auto env = dist->make_env(21, opts);
  MultiEpisode episode = run_multi_episode(AlgorithmSpec::classic(Kind::kRmPlus), *env, 12, 12,
                                           false, 4);
  CHECK(episode.learners.size() == 3);
  CHECK(episode.exploitability.size() == 12);
  CHECK(std::isnan(episode.exploitability[0]));
  CHECK(!std::isnan(episode.exploitability[3]));
  CHECK(!std::isnan(episode.exploitability[11]));
  // Positive-part cumulative regrets never go negative.
  for (const Trajectory& traj : episode.learners) {
    for (const CumulativeRegret& r_sum : traj.cumulative) {
      CHECK(r_sum.values.minCoeff() >= 0.0);
    }
  }
}

TEST_CASE("precision sweep reports one entry per precision") {
  Checkpoint ck;
  EndgameConfig toy;
  toy.deck_ranks = 2;
  toy.max_raises = 0;
  auto dist = make_distribution("endgame-sampled", toy);
  ck.params = init_network(HeadKind::kPredictionBounded,
                           2 * dist->num_actions() + dist->context_dim(), 4,
                           dist->num_actions(), 2.0 * dist->delta_max(), 3);
  ck.meta.algorithm = "nprm";
  ck.meta.distribution = "endgame-sampled";
  ck.meta.train_horizon = 8;

  EvalConfig cfg;
  cfg.n_games = 2;
  cfg.horizon = 6;
  cfg.train_horizon = 8;
  cfg.eval_iters = 400;
  cfg.record_timing = false;
  auto entries = precision_sweep(ck, *dist, {20, 200}, cfg);
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].vf_iters == 20);
  CHECK(entries[1].solver_residual < entries[0].solver_residual);
  CHECK(entries[1].curve.mean.size() == 6);
}
