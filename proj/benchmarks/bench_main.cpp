#include <benchmark/benchmark.h>

#include "rlab/cfr_plus.hpp"
#include "rlab/distributions.hpp"
#include "rlab/matrix_games.hpp"
#include "rlab/minimizers.hpp"
#include "rlab/unroll.hpp"

namespace {

using namespace rlab;

void BM_RegretMatchingStep(benchmark::State& state) {
  const int actions = static_cast<int>(state.range(0));
  MinimizerState rm = make_minimizer(Kind::kRm, actions);
  Rng rng(1);
  Eigen::VectorXd x(actions);
  for (int i = 0; i < actions; ++i) x[i] = rng.uniform(-1, 1);
  RewardVector reward{x};
  for (auto _ : state) {
    StrategyVector sigma = next_strategy(rm);
    benchmark::DoNotOptimize(sigma.probs.data());
    observe_reward(rm, reward);
  }
}
BENCHMARK(BM_RegretMatchingStep)->Arg(3)->Arg(16);

void BM_NeuralMinimizerStep(benchmark::State& state) {
  const int actions = 3;
  auto net = std::make_shared<NetworkParams>(
      init_network(HeadKind::kPredictionBounded, 2 * actions, static_cast<int>(state.range(0)),
                   actions, 8.0, 5));
  MinimizerOptions options;
  options.network = net;
  options.delta_max = 4.0;
  MinimizerState nprm = make_minimizer(Kind::kNprm, actions, options);
  RewardVector reward{Eigen::Vector3d(1.0, -0.5, 0.25)};
  for (auto _ : state) {
    StrategyVector sigma = next_strategy(nprm);
    benchmark::DoNotOptimize(sigma.probs.data());
    observe_reward(nprm, reward);
  }
}
BENCHMARK(BM_NeuralMinimizerStep)->Arg(32)->Arg(128);

void BM_MatrixGameValue(benchmark::State& state) {
  Rng rng(7);
  MatrixGame game = sample_matrix_game({MatrixKind::kUniform3x3}, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(game_value(game));
  }
}
BENCHMARK(BM_MatrixGameValue);

void BM_BestResponseReward(benchmark::State& state) {
  Rng rng(7);
  MatrixGame game = sample_matrix_game({MatrixKind::kRpsSampled}, rng);
  StrategyVector sigma = uniform_strategy(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(best_response_reward(game, sigma).values.data());
  }
}
BENCHMARK(BM_BestResponseReward);

void BM_CfrPlusSolve(benchmark::State& state) {
  EndgameConfig cfg;  // default 12-card endgame
  Rng rng(3);
  auto [game, beliefs] = build_endgame(cfg, std::nullopt, rng);
  const long iters = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cfr_plus_solve(game, beliefs, std::nullopt, iters).nash_gap);
  }
  state.SetItemsProcessed(state.iterations() * iters);
}
BENCHMARK(BM_CfrPlusSolve)->Arg(100)->Arg(1000);

void BM_UnrollAndBackprop(benchmark::State& state) {
  auto dist = make_distribution("rps-sampled");
  NetworkParams params = init_network(HeadKind::kPredictionBounded, 6, 32, 3, 10.0, 9);
  randomize_head(params, 0.5, 10);
  const int horizon = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto env = dist->make_env(seed++, {});
    UnrollTrace trace = unroll_and_loss(params, Kind::kNprm, *env, horizon);
    ParamBlocks grads = backprop(trace, params);
    benchmark::DoNotOptimize(grads.head_bias.data());
  }
}
BENCHMARK(BM_UnrollAndBackprop)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
