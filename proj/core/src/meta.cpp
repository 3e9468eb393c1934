#include "rlab/meta.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rlab/adam.hpp"
#include "rlab/config.hpp"
#include "rlab/csv.hpp"
#include "rlab/parallel.hpp"

namespace rlab {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

HeadKind head_for(Kind kind) {
  return kind == Kind::kNoa ? HeadKind::kStrategySoftmax : HeadKind::kPredictionBounded;
}
}  // namespace

void TrainConfig::validate() const {
  if (!is_neural(algorithm)) {
    throw ConfigError("train config: algorithm must be one of noa, nprm, nprm+, nhedge");
  }
  if (horizon < 1) throw ConfigError("train config: horizon must be >= 1");
  if (epochs < 0) throw ConfigError("train config: epochs must be >= 0");
  if (batch_size < 1) throw ConfigError("train config: batch_size must be >= 1");
  if (hidden_dim < 1) throw ConfigError("train config: hidden_dim must be >= 1");
  if (lr_start <= 0 || lr_end <= 0) throw ConfigError("train config: learning rates must be > 0");
  if (vf_iters < 1) throw ConfigError("train config: vf_iters must be >= 1");
  if (alpha < 0) throw ConfigError("train config: alpha must be >= 0");
}

std::string TrainConfig::resolved_text(double resolved_alpha) const {
  ConfigWriter w;
  w.set("algorithm", to_string(algorithm));
  w.set("distribution", distribution);
  w.set("horizon", horizon);
  w.set("epochs", epochs);
  w.set("batch_size", batch_size);
  w.set("lr_start", lr_start);
  w.set("lr_end", lr_end);
  w.set("alpha", resolved_alpha);
  w.set("hidden_dim", hidden_dim);
  w.set("seed", seed);
  w.set("vf_iters", vf_iters);
  w.set("eval_iters", resolved_eval_iters());
  w.set("eval_every", eval_every);
  w.set("eval_games", eval_games);
  if (is_endgame_id(distribution)) {
    w.set("deck_ranks", endgame.deck_ranks);
    w.set("board_cards", endgame.board_cards);
    std::ostringstream fractions;
    for (size_t i = 0; i < endgame.bet_fractions.size(); ++i) {
      fractions << (i ? "," : "") << csv_double(endgame.bet_fractions[i]);
    }
    w.set("bet_fractions", fractions.str());
    w.set("max_raises", endgame.max_raises);
    w.set("ante", endgame.ante);
  }
  return w.serialize();
}

AlgorithmSpec AlgorithmSpec::classic(Kind kind) {
  if (is_neural(kind)) throw std::invalid_argument("AlgorithmSpec::classic: neural kind");
  AlgorithmSpec spec;
  spec.kind = kind;
  spec.label = to_string(kind);
  return spec;
}

AlgorithmSpec AlgorithmSpec::from_checkpoint(const Checkpoint& ck) {
  auto kind = kind_from_string(ck.meta.algorithm);
  if (!kind || !is_neural(*kind)) {
    throw std::runtime_error("checkpoint: unknown or non-neural algorithm `" +
                             ck.meta.algorithm + "`");
  }
  AlgorithmSpec spec;
  spec.kind = *kind;
  spec.network = std::make_shared<NetworkParams>(ck.params);
  spec.label = ck.meta.algorithm;
  return spec;
}

MultiEpisode run_multi_episode(const AlgorithmSpec& algo, MetaEnvironment& env, int horizon,
                               int train_horizon, bool record_timing, int expl_stride) {
  using clock = std::chrono::steady_clock;
  const int learners = env.num_learners();
  const int actions = env.num_actions();
  if (expl_stride < 1) expl_stride = 1;

  MultiEpisode episode;
  episode.weights = env.learner_weights();

  std::vector<MinimizerState> states;
  states.reserve(learners);
  for (int l = 0; l < learners; ++l) {
    MinimizerOptions options;
    options.hedge_horizon = train_horizon;
    options.delta_max = env.delta_max();
    if (is_neural(algo.kind)) {
      options.network = algo.network;
      options.context = env.context(l);
    }
    states.push_back(make_minimizer(algo.kind, actions, std::move(options)));
  }
  episode.learners.resize(learners);

  const double bound_alpha = algo.network ? algo.network->alpha : 0.0;
  const bool audit_bound = algo.kind == Kind::kNprm || algo.kind == Kind::kNprmPlus;
  std::vector<Eigen::VectorXd> full_regret(learners, Eigen::VectorXd::Zero(actions));

  double env_ms = 0.0, algo_ms = 0.0;
  std::vector<StrategyVector> sigmas(learners);
  std::vector<StrategyVector> averages(learners);
  for (int t = 1; t <= horizon; ++t) {
    auto a0 = clock::now();
    for (int l = 0; l < learners; ++l) sigmas[l] = next_strategy(states[l]);
    auto a1 = clock::now();

    auto e0 = clock::now();
    std::vector<RewardVector> rewards = env.step(sigmas);
    auto e1 = clock::now();

    auto b0 = clock::now();
    for (int l = 0; l < learners; ++l) {
      Trajectory& traj = episode.learners[l];
      traj.predictions.push_back(algo.kind == Kind::kNoa
                                     ? PredictionVector{Eigen::VectorXd::Zero(actions)}
                                     : states[l].prediction);
      observe_reward(states[l], rewards[l]);
      traj.strategies.push_back(sigmas[l]);
      traj.rewards.push_back(rewards[l]);
      traj.cumulative.push_back(states[l].cumulative);
      averages[l] = states[l].average.strategy();
      traj.averages.push_back(averages[l]);

      full_regret[l] += instantaneous_regret(sigmas[l], rewards[l]).values;
      if (audit_bound && full_regret[l].maxCoeff() >
                             prediction_bound(env.delta_max(), bound_alpha, actions, t) + 1e-9) {
        episode.bound_violations += 1;
      }
    }
    auto b1 = clock::now();

    bool want_expl = (t % expl_stride == 0) || t == horizon;
    double expl = kNaN;
    if (want_expl) expl = env.exploitability(averages);
    episode.exploitability.push_back(expl);
    for (int l = 0; l < learners; ++l) episode.learners[l].exploitability.push_back(expl);

    if (record_timing) {
      algo_ms += std::chrono::duration<double, std::milli>(a1 - a0 + (b1 - b0)).count();
      env_ms += std::chrono::duration<double, std::milli>(e1 - e0).count();
    }
    episode.env_ms.push_back(env_ms);
    episode.algo_ms.push_back(algo_ms);
    for (int l = 0; l < learners; ++l) {
      episode.learners[l].env_ms.push_back(env_ms);
      episode.learners[l].algo_ms.push_back(algo_ms);
    }
  }
  return episode;
}

namespace {

struct GameStats {
  std::vector<double> expl;
  std::vector<double> env_ms, algo_ms;
  std::vector<double> ext_regret;  // weighted mean over learners, per step
  int bound_violations = 0;
};

GameStats episode_stats(const MultiEpisode& episode) {
  GameStats stats;
  stats.expl = episode.exploitability;
  stats.env_ms = episode.env_ms;
  stats.algo_ms = episode.algo_ms;
  stats.bound_violations = episode.bound_violations;
  const int horizon = static_cast<int>(episode.exploitability.size());
  const int learners = static_cast<int>(episode.learners.size());
  stats.ext_regret.assign(horizon, 0.0);
  for (int l = 0; l < learners; ++l) {
    Eigen::VectorXd total = Eigen::VectorXd::Zero(episode.learners[l].rewards[0].size());
    for (int t = 0; t < horizon; ++t) {
      total += instantaneous_regret(episode.learners[l].strategies[t],
                                    episode.learners[l].rewards[t])
                   .values;
      stats.ext_regret[t] += episode.weights[l] * total.maxCoeff();
    }
  }
  return stats;
}

}  // namespace

EvalCurve evaluate(const AlgorithmSpec& algo, const GameDistribution& dist,
                   const EvalConfig& cfg) {
  if (cfg.n_games < 1) throw std::invalid_argument("evaluate: n_games must be >= 1");
  if (algo.network) {
    if (algo.network->action_dim != dist.num_actions()) {
      throw std::runtime_error("evaluate: checkpoint action count " +
                               std::to_string(algo.network->action_dim) +
                               " does not match distribution `" + dist.id() + "` (" +
                               std::to_string(dist.num_actions()) + ")");
    }
    int expected = 2 * dist.num_actions() + dist.context_dim();
    if (algo.network->input_dim != expected) {
      throw std::runtime_error("evaluate: checkpoint input width " +
                               std::to_string(algo.network->input_dim) +
                               " does not match distribution `" + dist.id() + "` (" +
                               std::to_string(expected) + ")");
    }
  }

  EnvOptions opts{cfg.vf_iters, cfg.eval_iters};
  std::vector<GameStats> stats(cfg.n_games);
  parallel_for(cfg.n_games, [&](int g) {
    auto env = dist.make_env(derive_seed(cfg.seed, seed_stream::kEvalGame, g), opts);
    MultiEpisode episode = run_multi_episode(algo, *env, cfg.horizon, cfg.train_horizon,
                                             cfg.record_timing, cfg.expl_stride);
    stats[g] = episode_stats(episode);
  });

  EvalCurve curve;
  curve.label = algo.label.empty() ? to_string(algo.kind) : algo.label;
  curve.train_horizon = cfg.train_horizon;
  curve.mean.assign(cfg.horizon, kNaN);
  curve.stderr_.assign(cfg.horizon, kNaN);
  curve.env_ms.assign(cfg.horizon, 0.0);
  curve.algo_ms.assign(cfg.horizon, 0.0);
  curve.mean_external_regret.assign(cfg.horizon, 0.0);

  for (int t = 0; t < cfg.horizon; ++t) {
    bool have = !std::isnan(stats[0].expl[t]);
    if (have) {
      double sum = 0.0, sum_sq = 0.0;
      for (const GameStats& s : stats) {
        sum += s.expl[t];
        sum_sq += s.expl[t] * s.expl[t];
      }
      double n = static_cast<double>(cfg.n_games);
      double mean = sum / n;
      curve.mean[t] = mean;
      double variance = std::max(0.0, sum_sq / n - mean * mean);
      curve.stderr_[t] = cfg.n_games > 1 ? std::sqrt(variance / (n - 1)) : 0.0;
    }
    double env_sum = 0.0, algo_sum = 0.0, regret_sum = 0.0;
    for (const GameStats& s : stats) {
      env_sum += s.env_ms[t];
      algo_sum += s.algo_ms[t];
      regret_sum += s.ext_regret[t];
    }
    curve.env_ms[t] = env_sum / cfg.n_games;
    curve.algo_ms[t] = algo_sum / cfg.n_games;
    curve.mean_external_regret[t] = regret_sum / cfg.n_games;
  }
  for (const GameStats& s : stats) curve.bound_violations += s.bound_violations;
  return curve;
}

TrainResult meta_train(const TrainConfig& config) {
  auto dist = make_distribution(config.distribution, config.endgame);
  return meta_train(config, *dist);
}

TrainResult meta_train(const TrainConfig& config, const GameDistribution& dist_ref) {
  config.validate();
  const GameDistribution* dist = &dist_ref;

  double alpha = config.alpha;
  if (config.algorithm == Kind::kNoa) {
    alpha = 0.0;
  } else if (alpha <= 0.0) {
    alpha = 2.0 * dist->delta_max();
  } else if (alpha < 2.0 * dist->delta_max()) {
    throw ConfigError("train config: alpha must be >= 2 * delta_max of the distribution");
  }

  const int actions = dist->num_actions();
  const int input_dim = 2 * actions + dist->context_dim();
  NetworkParams params = init_network(head_for(config.algorithm), input_dim, config.hidden_dim,
                                      actions, alpha, config.seed);
  AdamState opt = AdamState::init(params.blocks);
  EnvOptions opts{config.vf_iters, config.resolved_eval_iters()};

  TrainResult result;
  result.report.reserve(config.epochs);

  using clock = std::chrono::steady_clock;
  auto start = clock::now();

  std::vector<double> losses(config.batch_size);
  std::vector<ParamBlocks> grads(config.batch_size);
  std::vector<int> violations(config.batch_size);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double lr = cosine_lr(epoch, config.epochs, config.lr_start, config.lr_end);

    parallel_for(config.batch_size, [&](int i) {
      std::uint64_t game_seed =
          derive_seed(config.seed, seed_stream::kTrainGame,
                      static_cast<std::uint64_t>(epoch) * config.batch_size + i);
      try {
        auto env = dist->make_env(game_seed, opts);
        UnrollTrace trace =
            unroll_and_loss(params, config.algorithm, *env, config.horizon, config.horizon);
        losses[i] = trace.loss;
        violations[i] = trace.bound_violated ? 1 : 0;
        grads[i] = backprop(trace, params);
      } catch (const std::exception& e) {
        throw std::runtime_error("meta_train: epoch " + std::to_string(epoch) + ", game " +
                                 std::to_string(i) + ": " + e.what());
      }
    });

    double mean_loss = 0.0;
    ParamBlocks grad = zeros_like(params.blocks);
    auto acc_views = block_views(grad);
    for (int i = 0; i < config.batch_size; ++i) {
      mean_loss += losses[i];
      result.bound_violations += violations[i];
      auto views = block_views(grads[i]);
      for (size_t b = 0; b < views.size(); ++b) {
        for (std::ptrdiff_t k = 0; k < views[b].size; ++k) {
          acc_views[b].data[k] += views[b].data[k];
        }
      }
    }
    mean_loss /= config.batch_size;
    for (auto& view : acc_views) {
      for (std::ptrdiff_t k = 0; k < view.size; ++k) view.data[k] /= config.batch_size;
    }
    if (!std::isfinite(mean_loss)) {
      throw std::runtime_error("meta_train: non-finite loss at epoch " + std::to_string(epoch));
    }
    adam_step(params.blocks, grad, opt, lr);

    TrainReportRow row;
    row.epoch = epoch;
    row.mean_loss = mean_loss;
    row.lr = lr;
    row.wall_s = config.record_timing
                     ? std::chrono::duration<double>(clock::now() - start).count()
                     : 0.0;
    if (config.eval_every > 0 && (epoch + 1) % config.eval_every == 0) {
      AlgorithmSpec spec;
      spec.kind = config.algorithm;
      spec.network = std::make_shared<NetworkParams>(params);
      spec.label = to_string(config.algorithm);
      EvalConfig ec;
      ec.n_games = config.eval_games;
      ec.horizon = config.horizon;
      ec.train_horizon = config.horizon;
      ec.seed = derive_seed(config.seed, seed_stream::kEvalGame, 0xe0a1);
      ec.vf_iters = config.vf_iters;
      ec.eval_iters = config.resolved_eval_iters();
      ec.record_timing = false;
      ec.expl_stride = config.horizon;  // final step only
      EvalCurve quick = evaluate(spec, *dist, ec);
      row.has_eval = true;
      row.eval_expl = quick.mean.back();
    }
    result.report.push_back(row);
  }

  result.params = std::move(params);
  result.meta.algorithm = to_string(config.algorithm);
  result.meta.distribution = config.distribution;
  result.meta.train_horizon = config.horizon;
  result.meta.delta_max = dist->delta_max();
  result.meta.seed = config.seed;
  result.meta.config_digest = fnv1a64(config.resolved_text(alpha));
  return result;
}

void write_training_csv(const std::vector<TrainReportRow>& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_training_csv: cannot open " + path);
  out << "epoch,mean_loss,lr,eval_expl_at_T,wall_time_s\n";
  for (const TrainReportRow& row : report) {
    out << row.epoch << ',' << csv_double(row.mean_loss) << ',' << csv_double(row.lr) << ',';
    if (row.has_eval) out << csv_double(row.eval_expl);
    out << ',' << csv_double(row.wall_s) << '\n';
  }
}

void write_curve_csv(const EvalCurve& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_curve_csv: cannot open " + path);
  out << "step,expl_mean,expl_stderr,env_time_ms,algo_time_ms\n";
  for (size_t t = 0; t < curve.mean.size(); ++t) {
    out << (t + 1) << ',';
    if (!std::isnan(curve.mean[t])) out << csv_double(curve.mean[t]);
    out << ',';
    if (!std::isnan(curve.stderr_[t])) out << csv_double(curve.stderr_[t]);
    out << ',' << csv_double(curve.env_ms[t]) << ',' << csv_double(curve.algo_ms[t]) << '\n';
  }
}

EvalCurve read_curve_csv(const std::string& path) {
  CsvTable table = read_csv(path);
  int step_col = table.column("step");
  int mean_col = table.column("expl_mean");
  int stderr_col = table.column("expl_stderr");
  int env_col = table.column("env_time_ms");
  int algo_col = table.column("algo_time_ms");
  if (step_col < 0 || mean_col < 0) {
    throw std::runtime_error("read_curve_csv: " + path + " lacks step/expl_mean columns");
  }
  EvalCurve curve;
  curve.label = std::filesystem::path(path).stem().string();
  for (const auto& row : table.rows) {
    curve.mean.push_back(row[mean_col]);
    curve.stderr_.push_back(stderr_col >= 0 ? row[stderr_col] : kNaN);
    curve.env_ms.push_back(env_col >= 0 ? row[env_col] : 0.0);
    curve.algo_ms.push_back(algo_col >= 0 ? row[algo_col] : 0.0);
  }
  return curve;
}

StepsToTargetTable steps_to_target(const std::vector<EvalCurve>& curves,
                                   const std::vector<double>& targets) {
  if (targets.empty()) throw std::invalid_argument("steps_to_target: no targets");
  for (size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] <= 0) throw std::invalid_argument("steps_to_target: targets must be positive");
    if (i > 0 && targets[i] >= targets[i - 1]) {
      throw std::invalid_argument("steps_to_target: targets must be strictly descending");
    }
  }
  StepsToTargetTable table;
  table.targets = targets;
  for (const EvalCurve& curve : curves) {
    table.algorithms.push_back(curve.label);
    std::vector<long> row;
    for (double target : targets) {
      long found = -1;
      for (size_t t = 0; t < curve.mean.size(); ++t) {
        if (!std::isnan(curve.mean[t]) && curve.mean[t] <= target) {
          found = static_cast<long>(t + 1);
          break;
        }
      }
      row.push_back(found);
    }
    table.steps.push_back(std::move(row));
  }
  return table;
}

std::string format_table_text(const StepsToTargetTable& table) {
  std::ostringstream out;
  size_t width = 9;
  for (const std::string& a : table.algorithms) width = std::max(width, a.size() + 2);
  out << std::string(width, ' ');
  for (double t : table.targets) {
    std::string label = csv_double(t);
    out << '|' << ' ' << label << std::string(label.size() < 10 ? 10 - label.size() : 1, ' ');
  }
  out << '\n';
  for (size_t r = 0; r < table.algorithms.size(); ++r) {
    std::string name = table.algorithms[r];
    out << name << std::string(width - name.size(), ' ');
    for (long steps : table.steps[r]) {
      std::string cell = steps < 0 ? std::string("—") : std::to_string(steps);
      size_t pad = steps < 0 ? cell.size() - 2 : cell.size();  // em dash is 3 bytes
      out << '|' << ' ' << cell << std::string(pad < 10 ? 10 - pad : 1, ' ');
    }
    out << '\n';
  }
  return out.str();
}

void write_table_csv(const StepsToTargetTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_table_csv: cannot open " + path);
  out << "algorithm";
  for (double t : table.targets) out << ",target_" << csv_double(t);
  out << '\n';
  for (size_t r = 0; r < table.algorithms.size(); ++r) {
    out << table.algorithms[r];
    for (long steps : table.steps[r]) {
      out << ',';
      if (steps >= 0) out << steps;
      else out << "inf";
    }
    out << '\n';
  }
}

BoundCheckResult bound_check(const Trajectory& traj, double alpha, double delta_max) {
  BoundCheckResult result;
  result.margin = std::numeric_limits<double>::infinity();
  if (traj.rewards.empty()) return result;
  const int actions = traj.rewards[0].size();
  Eigen::VectorXd total = Eigen::VectorXd::Zero(actions);
  double residual_sum = 0.0;
  for (size_t t = 0; t < traj.rewards.size(); ++t) {
    RegretVector r = instantaneous_regret(traj.strategies[t], traj.rewards[t]);
    total += r.values;
    residual_sum += (r.values - traj.predictions[t].values).lpNorm<1>();
    double ext = total.maxCoeff();
    double intermediate = std::sqrt(2.0) * std::sqrt(residual_sum);
    double closed = prediction_bound(delta_max, alpha, actions, static_cast<int>(t + 1));
    if (ext > intermediate + 1e-9 || ext > closed + 1e-9) result.holds = false;
    result.margin = std::min(result.margin, closed - ext);
  }
  return result;
}

OodResult ood_evaluate(const Checkpoint& ck, const GameDistribution& eval_dist,
                       const EvalConfig& cfg, const EndgameConfig& endgame_config) {
  AlgorithmSpec spec = AlgorithmSpec::from_checkpoint(ck);
  auto train_dist = make_distribution(ck.meta.distribution, endgame_config);

  OodResult result;
  EvalConfig in_cfg = cfg;
  in_cfg.train_horizon = ck.meta.train_horizon;
  result.in_dist = evaluate(spec, *train_dist, in_cfg);
  result.in_dist.label = spec.label + "@" + train_dist->id();
  result.out_dist = evaluate(spec, eval_dist, in_cfg);
  result.out_dist.label = spec.label + "@" + eval_dist.id();

  result.guarantee_applies = spec.kind == Kind::kNprm || spec.kind == Kind::kNprmPlus;
  if (result.guarantee_applies) {
    // The closed-form ceiling is audited inside every episode; violations
    // surface on the curve.
    result.bound_holds = result.out_dist.bound_violations == 0;
  }
  int train_t = std::min(ck.meta.train_horizon, cfg.horizon);
  result.regret_rate_at_train_horizon =
      result.out_dist.mean_external_regret[train_t - 1] / train_t;
  result.regret_rate_at_horizon = result.out_dist.mean_external_regret.back() / cfg.horizon;
  return result;
}

std::vector<SweepEntry> precision_sweep(const Checkpoint& ck, const GameDistribution& dist,
                                        const std::vector<long>& iters_list,
                                        const EvalConfig& cfg) {
  if (iters_list.empty()) throw std::invalid_argument("precision_sweep: empty iteration list");
  AlgorithmSpec spec = AlgorithmSpec::from_checkpoint(ck);
  std::vector<SweepEntry> entries;
  for (long iters : iters_list) {
    SweepEntry entry;
    entry.vf_iters = iters;
    EvalConfig sweep_cfg = cfg;
    sweep_cfg.vf_iters = iters;
    entry.curve = evaluate(spec, dist, sweep_cfg);
    entry.curve.label = spec.label + "@vf" + std::to_string(iters);
    double residual = 0.0;
    for (int g = 0; g < cfg.n_games; ++g) {
      residual += dist.solver_residual(derive_seed(cfg.seed, seed_stream::kEvalGame, g), iters);
    }
    entry.solver_residual = residual / cfg.n_games;
    entries.push_back(std::move(entry));
  }
  return entries;
}

}  // namespace rlab
