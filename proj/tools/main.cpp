#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "rlab/checkpoint.hpp"
#include "rlab/config.hpp"
#include "rlab/csv.hpp"
#include "rlab/gradcheck.hpp"
#include "rlab/meta.hpp"
#include "svg_plot.hpp"

namespace fs = std::filesystem;
using namespace rlab;

namespace {

constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;

const std::vector<std::string> kTrainKeys = {
    "algorithm", "game",       "horizon",    "epochs",     "batch_size",
    "lr_start",  "lr_end",     "alpha",      "hidden_dim", "seed",
    "vf_iters",  "eval_iters", "eval_every", "eval_games", "timing",
    "deck_ranks", "board_cards", "bet_fractions", "max_raises", "ante"};

EndgameConfig endgame_from_kv(const KeyValueFile& kv) {
  EndgameConfig eg;
  eg.deck_ranks = kv.get_int_or("deck_ranks", eg.deck_ranks);
  eg.board_cards = kv.get_int_or("board_cards", eg.board_cards);
  if (kv.has("bet_fractions")) eg.bet_fractions = kv.get_double_list("bet_fractions");
  eg.max_raises = kv.get_int_or("max_raises", eg.max_raises);
  eg.ante = kv.get_double_or("ante", eg.ante);
  return eg;
}

TrainConfig train_config_from_file(const std::string& path) {
  KeyValueFile kv = KeyValueFile::parse_file(path);
  kv.require_known(kTrainKeys);
  TrainConfig cfg;
  std::string algo = kv.get_string("algorithm");
  auto kind = kind_from_string(algo);
  if (!kind || !is_neural(*kind)) {
    throw ConfigError(path + ": key `algorithm`: expected noa, nprm, nprm+ or nhedge, got `" +
                      algo + "`");
  }
  cfg.algorithm = *kind;
  cfg.distribution = kv.get_string("game");
  cfg.horizon = kv.get_int_or("horizon", cfg.horizon);
  cfg.epochs = kv.get_int_or("epochs", cfg.epochs);
  cfg.batch_size = kv.get_int_or("batch_size", cfg.batch_size);
  cfg.lr_start = kv.get_double_or("lr_start", cfg.lr_start);
  cfg.lr_end = kv.get_double_or("lr_end", cfg.lr_end);
  cfg.alpha = kv.get_double_or("alpha", cfg.alpha);
  cfg.hidden_dim = kv.get_int_or("hidden_dim", cfg.hidden_dim);
  cfg.seed = kv.get_u64_or("seed", cfg.seed);
  cfg.vf_iters = kv.get_long_or("vf_iters", cfg.vf_iters);
  cfg.eval_iters = kv.get_long_or("eval_iters", cfg.eval_iters);
  cfg.eval_every = kv.get_int_or("eval_every", cfg.eval_every);
  cfg.eval_games = kv.get_int_or("eval_games", cfg.eval_games);
  cfg.record_timing = kv.get_bool_or("timing", cfg.record_timing);
  cfg.endgame = endgame_from_kv(kv);
  return cfg;
}

void prepare_out_dir(const std::string& out, bool force) {
  fs::path dir(out);
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir)) {
      throw ConfigError("output path exists and is not a directory: " + out);
    }
    if (!fs::is_empty(dir) && !force) {
      throw ConfigError("output directory `" + out + "` is not empty; pass --force to reuse");
    }
  } else {
    fs::create_directories(dir);
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write " + path);
  file << text;
}

std::unique_ptr<GameDistribution> distribution_for(const std::string& id,
                                                   const std::string& endgame_config_path) {
  EndgameConfig eg;
  if (!endgame_config_path.empty()) eg = EndgameConfig::parse_file(endgame_config_path);
  return make_distribution(id, eg);
}

AlgorithmSpec spec_for(const std::string& algo, const std::string& checkpoint_path,
                       Checkpoint* loaded) {
  if (!checkpoint_path.empty()) {
    *loaded = load_checkpoint(checkpoint_path);
    return AlgorithmSpec::from_checkpoint(*loaded);
  }
  auto kind = kind_from_string(algo);
  bool allowed = kind && !is_neural(*kind) && *kind != Kind::kPredictiveHedge;
  if (!allowed) {
    throw ConfigError("unknown algorithm `" + algo +
                      "`; expected rm, rm+, prm, prm+, hedge, or a --checkpoint for "
                      "noa/nprm/nprm+/nhedge");
  }
  return AlgorithmSpec::classic(*kind);
}

std::vector<SvgSeries> curve_series(const std::vector<EvalCurve>& curves) {
  std::vector<SvgSeries> series;
  for (const EvalCurve& c : curves) series.push_back({c.label, c.mean});
  return series;
}

// ---------------------------------------------------------------------------

int run_train(const std::string& config_path, std::uint64_t seed, bool seed_given,
              const std::string& out, bool force) {
  TrainConfig cfg = train_config_from_file(config_path);
  if (seed_given) cfg.seed = seed;
  prepare_out_dir(out, force);

  TrainResult result = meta_train(cfg);

  fs::path dir(out);
  save_checkpoint((dir / "checkpoint.ckpt").string(), result.params, result.meta);
  write_training_csv(result.report, (dir / "training.csv").string());
  write_text((dir / "config.resolved").string(), cfg.resolved_text(result.params.alpha));

  std::cout << "trained " << result.meta.algorithm << " on " << cfg.distribution << " for "
            << cfg.epochs << " updates";
  if (!result.report.empty()) {
    std::cout << "; final loss " << csv_double(result.report.back().mean_loss);
  }
  std::cout << "\ncheckpoint: " << (dir / "checkpoint.ckpt").string() << "\n";
  if (result.bound_violations > 0) {
    std::cout << "warning: " << result.bound_violations
              << " worst-case bound violations recorded during training\n";
    return kExitCheckFailure;
  }
  return 0;
}

int run_eval(const std::string& algo, const std::string& checkpoint_path, const std::string& game,
             int games, int steps, int train_horizon, std::uint64_t seed, long vf_iters,
             long eval_iters, bool timing, bool svg, bool dump_traj, const std::string& out,
             bool force, const std::string& endgame_config) {
  Checkpoint loaded;
  AlgorithmSpec spec = spec_for(algo, checkpoint_path, &loaded);
  auto dist = distribution_for(game, endgame_config);

  EvalConfig cfg;
  cfg.n_games = games;
  cfg.train_horizon = train_horizon > 0 ? train_horizon
                      : (spec.network ? loaded.meta.train_horizon : 64);
  cfg.horizon = steps > 0 ? steps : 2 * cfg.train_horizon;
  cfg.seed = seed;
  cfg.vf_iters = vf_iters;
  cfg.eval_iters = eval_iters > 0 ? eval_iters : 10 * vf_iters;
  cfg.record_timing = timing;

  prepare_out_dir(out, force);
  EvalCurve curve = evaluate(spec, *dist, cfg);

  fs::path dir(out);
  std::string label = curve.label;
  write_curve_csv(curve, (dir / (label + ".csv")).string());

  ConfigWriter resolved;
  resolved.set("command", std::string("eval"));
  resolved.set("algorithm", label);
  if (!checkpoint_path.empty()) resolved.set("checkpoint", checkpoint_path);
  resolved.set("game", game);
  resolved.set("games", games);
  resolved.set("steps", cfg.horizon);
  resolved.set("train_horizon", cfg.train_horizon);
  resolved.set("seed", cfg.seed);
  resolved.set("vf_iters", cfg.vf_iters);
  resolved.set("eval_iters", cfg.eval_iters);
  resolved.set("timing", cfg.record_timing);
  resolved.write_file((dir / "config.resolved").string());

  if (svg) {
    write_text((dir / (label + ".svg")).string(),
               render_log_curve_svg(curve_series({curve}), cfg.train_horizon,
                                    label + " on " + game, "exploitability"));
  }
  if (dump_traj) {
    EnvOptions opts{cfg.vf_iters, cfg.eval_iters};
    for (int g = 0; g < games; ++g) {
      auto env = dist->make_env(derive_seed(cfg.seed, seed_stream::kEvalGame, g), opts);
      MultiEpisode episode =
          run_multi_episode(spec, *env, cfg.horizon, cfg.train_horizon, false, 1);
      for (size_t l = 0; l < episode.learners.size(); ++l) {
        std::string name = "traj_g" + std::to_string(g) + "_l" + std::to_string(l) + ".csv";
        write_trajectory_csv(episode.learners[l], (dir / name).string());
      }
    }
  }

  std::cout << label << " on " << game << ": exploitability " << csv_double(curve.mean.back())
            << " at step " << cfg.horizon << " (mean over " << games << " games)\n";
  if (curve.bound_violations > 0) {
    std::cout << "warning: " << curve.bound_violations << " bound violations\n";
    return kExitCheckFailure;
  }
  return 0;
}

int run_table(const std::vector<std::string>& curve_files, const std::vector<double>& targets,
              const std::string& out_csv, bool paper_reference) {
  std::vector<EvalCurve> curves;
  for (const std::string& file : curve_files) curves.push_back(read_curve_csv(file));
  StepsToTargetTable table = steps_to_target(curves, targets);
  std::cout << format_table_text(table);
  if (paper_reference) {
    std::cout << "\nreference, full-scale river endgame (steps to reach "
                 "{0.4, 0.1, 0.06, 0.02}):\n"
                 "rm 20/128/212/615  prm 36/158/261/793  noa 1/18/41/157  nprm 1/16/26/118\n";
  }
  if (!out_csv.empty()) write_table_csv(table, out_csv);
  return 0;
}

int run_gradcheck(const std::string& config_path) {
  KeyValueFile kv = KeyValueFile::parse_file(config_path);
  kv.require_known({"graph", "game", "hidden_dim", "horizon", "instances", "seed", "threshold",
                    "fd_step", "deck_ranks", "board_cards", "bet_fractions", "max_raises",
                    "ante"});
  std::string graph = kv.get_string("graph");
  auto kind = kind_from_string(graph);
  if (!kind || !is_neural(*kind)) {
    throw ConfigError(config_path + ": key `graph`: expected noa, nprm, nprm+ or nhedge");
  }
  std::string game = kv.get_string("game");
  int hidden = kv.get_int_or("hidden_dim", 6);
  int horizon = kv.get_int_or("horizon", 6);
  int instances = kv.get_int_or("instances", 20);
  std::uint64_t seed = kv.get_u64_or("seed", 1);
  double threshold = kv.get_double_or("threshold", 1e-4);
  double fd_step = kv.get_double_or("fd_step", 1e-6);
  if (hidden > 8) throw ConfigError(config_path + ": hidden_dim must be <= 8 for gradcheck");
  if (horizon > 8) throw ConfigError(config_path + ": horizon must be <= 8 for gradcheck");

  auto dist = make_distribution(game, endgame_from_kv(kv));
  HeadKind head =
      *kind == Kind::kNoa ? HeadKind::kStrategySoftmax : HeadKind::kPredictionBounded;
  double alpha = *kind == Kind::kNoa ? 0.0 : 2.0 * dist->delta_max();
  int input_dim = 2 * dist->num_actions() + dist->context_dim();

  std::map<std::string, double> block_worst;
  double max_error = 0.0;
  int checked = 0, skipped = 0;
  EnvOptions opts{kv.get_long_or("vf_iters", 100), 1000};
  for (int i = 0; checked < instances && i < 3 * instances; ++i) {
    NetworkParams params = init_network(head, input_dim, hidden, dist->num_actions(), alpha,
                                        derive_seed(seed, 1, i));
    randomize_head(params, 0.6, derive_seed(seed, 2, i));
    auto env = dist->make_env(derive_seed(seed, 3, i), opts);
    GradCheckResult result = grad_check(params, *kind, *env, horizon, fd_step);
    if (result.nonsmooth) {
      ++skipped;
      continue;
    }
    ++checked;
    max_error = std::max(max_error, result.max_rel_error);
    for (const auto& [name, err] : result.block_errors) {
      block_worst[name] = std::max(block_worst[name], err);
    }
  }

  std::cout << "gradcheck " << graph << " on " << game << ": " << checked << " instances ("
            << skipped << " skipped at non-smooth points)\n";
  for (const auto& [name, err] : block_worst) {
    std::cout << "  " << name << ": " << csv_double(err) << "\n";
  }
  std::cout << "max relative error: " << csv_double(max_error) << " (threshold "
            << csv_double(threshold) << ")\n";
  return max_error < threshold ? 0 : kExitCheckFailure;
}

int run_ood(const std::string& checkpoint_path, const std::string& train_dist_id,
            const std::string& eval_dist_id, int games, int steps, std::uint64_t seed,
            bool timing, bool svg, const std::string& out, bool force,
            const std::string& endgame_config) {
  Checkpoint ck = load_checkpoint(checkpoint_path);
  if (!train_dist_id.empty() && train_dist_id != ck.meta.distribution) {
    throw ConfigError("checkpoint was trained on `" + ck.meta.distribution +
                      "`, not on requested `" + train_dist_id + "`");
  }
  auto eval_dist = distribution_for(eval_dist_id, endgame_config);

  EvalConfig cfg;
  cfg.n_games = games;
  cfg.train_horizon = ck.meta.train_horizon;
  cfg.horizon = steps > 0 ? steps : 2 * ck.meta.train_horizon;
  cfg.seed = seed;
  cfg.record_timing = timing;

  EndgameConfig eg;
  if (!endgame_config.empty()) eg = EndgameConfig::parse_file(endgame_config);
  OodResult result = ood_evaluate(ck, *eval_dist, cfg, eg);

  prepare_out_dir(out, force);
  fs::path dir(out);
  write_curve_csv(result.in_dist, (dir / "in_dist.csv").string());
  write_curve_csv(result.out_dist, (dir / "out_dist.csv").string());
  if (svg) {
    write_text((dir / "ood.svg").string(),
               render_log_curve_svg(curve_series({result.in_dist, result.out_dist}),
                                    cfg.train_horizon, ck.meta.algorithm + " out of distribution",
                                    "exploitability"));
  }

  std::string verdict;
  if (!result.guarantee_applies) {
    verdict = "no guarantee (" + ck.meta.algorithm + ")";
  } else if (result.bound_holds) {
    verdict = "bound holds";
  } else {
    verdict = "BOUND VIOLATED";
  }
  ConfigWriter resolved;
  resolved.set("command", std::string("ood"));
  resolved.set("checkpoint", checkpoint_path);
  resolved.set("train_game", ck.meta.distribution);
  resolved.set("eval_game", eval_dist_id);
  resolved.set("games", games);
  resolved.set("steps", cfg.horizon);
  resolved.set("seed", cfg.seed);
  resolved.set("verdict", verdict);
  resolved.write_file((dir / "config.resolved").string());

  std::cout << "in-distribution  (" << ck.meta.distribution
            << "): " << csv_double(result.in_dist.mean.back()) << " at step " << cfg.horizon
            << "\n";
  std::cout << "out-of-distribution (" << eval_dist_id
            << "): " << csv_double(result.out_dist.mean.back()) << " at step " << cfg.horizon
            << "\n";
  std::cout << "verdict: " << verdict << "\n";
  return result.guarantee_applies && !result.bound_holds ? kExitCheckFailure : 0;
}

int run_sweep(const std::string& checkpoint_path, const std::string& game,
              const std::vector<long>& vf_iters, int games, int steps, std::uint64_t seed,
              bool svg, const std::string& out, bool force, const std::string& endgame_config) {
  Checkpoint ck = load_checkpoint(checkpoint_path);
  auto dist = distribution_for(game, endgame_config);

  EvalConfig cfg;
  cfg.n_games = games;
  cfg.train_horizon = ck.meta.train_horizon;
  cfg.horizon = steps > 0 ? steps : 2 * ck.meta.train_horizon;
  cfg.seed = seed;
  cfg.record_timing = false;

  std::vector<SweepEntry> entries = precision_sweep(ck, *dist, vf_iters, cfg);

  prepare_out_dir(out, force);
  fs::path dir(out);
  std::ofstream summary(dir / "sweep_summary.csv");
  summary << "vf_iters,solver_residual,expl_at_final\n";
  std::vector<EvalCurve> curves;
  for (const SweepEntry& entry : entries) {
    write_curve_csv(entry.curve,
                    (dir / ("sweep_vf" + std::to_string(entry.vf_iters) + ".csv")).string());
    summary << entry.vf_iters << ',' << csv_double(entry.solver_residual) << ','
            << csv_double(entry.curve.mean.back()) << '\n';
    curves.push_back(entry.curve);
    std::cout << "vf_iters " << entry.vf_iters << ": solver residual "
              << csv_double(entry.solver_residual) << ", exploitability "
              << csv_double(entry.curve.mean.back()) << "\n";
  }
  if (svg) {
    write_text((dir / "sweep.svg").string(),
               render_log_curve_svg(curve_series(curves), cfg.train_horizon,
                                    "value-function precision sweep", "exploitability"));
  }
  ConfigWriter resolved;
  resolved.set("command", std::string("sweep"));
  resolved.set("checkpoint", checkpoint_path);
  resolved.set("game", game);
  resolved.set("games", games);
  resolved.set("steps", cfg.horizon);
  resolved.set("seed", cfg.seed);
  resolved.write_file((dir / "config.resolved").string());
  return 0;
}

int run_dump_game(const std::string& game, std::uint64_t seed, const std::string& out,
                  const std::string& endgame_config) {
  auto dist = distribution_for(game, endgame_config);
  std::string snapshot = game_snapshot(*dist, seed, {});
  if (out.empty()) {
    std::cout << snapshot;
  } else {
    write_text(out, snapshot);
    std::cout << "wrote " << out << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regretlab: regret minimization against sampled games"};
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "meta-train a neural minimizer");
  std::string train_config, train_out = "out";
  std::uint64_t train_seed = 0;
  bool train_force = false;
  bool train_seed_given = false;
  train->add_option("--config", train_config, "key = value training config")->required();
  train->add_option("--seed", train_seed, "override the config seed")
      ->each([&](const std::string&) { train_seed_given = true; });
  train->add_option("--out", train_out, "output directory");
  train->add_flag("--force", train_force, "reuse a non-empty output directory");

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate an algorithm or checkpoint");
  std::string eval_algo, eval_ckpt, eval_game, eval_out = "out", eval_endgame;
  int eval_games = 256, eval_steps = 0, eval_train_horizon = 0;
  std::uint64_t eval_seed = 9;
  long eval_vf = 1000, eval_precision = 0;
  bool eval_timing = true, eval_svg = false, eval_dump = false, eval_force = false;
  eval->add_option("--algo", eval_algo, "rm | rm+ | prm | prm+ | hedge");
  eval->add_option("--checkpoint", eval_ckpt, "trained checkpoint path");
  eval->add_option("--game", eval_game,
                   "rps-fixed | rps-sampled | uniform-3x3 | endgame-fixed | endgame-sampled")
      ->required();
  eval->add_option("--games", eval_games, "number of evaluation games");
  eval->add_option("--steps", eval_steps, "episode length (default 2 * train horizon)");
  eval->add_option("--train-horizon", eval_train_horizon,
                   "horizon the algorithm is tuned for (classic algorithms)");
  eval->add_option("--seed", eval_seed, "evaluation seed");
  eval->add_option("--vf-iters", eval_vf, "value-function solver iterations per step");
  eval->add_option("--eval-iters", eval_precision,
                   "exploitability solver iterations (default 10x vf)");
  eval->add_option("--timing", eval_timing, "record wall time (off for byte-stable output)");
  eval->add_flag("--svg", eval_svg, "emit a log-scale SVG plot");
  eval->add_flag("--dump-traj", eval_dump, "write one trajectory CSV per episode");
  eval->add_option("--out", eval_out, "output directory");
  eval->add_flag("--force", eval_force, "reuse a non-empty output directory");
  eval->add_option("--endgame-config", eval_endgame, "endgame config file");

  // table
  auto* table = app.add_subcommand("table", "steps-to-target exploitability table");
  std::vector<std::string> table_curves;
  std::vector<double> table_targets;
  std::string table_out;
  bool table_reference = false;
  table->add_option("--curves", table_curves, "curve CSV files")->required()->expected(-1);
  table->add_option("--targets", table_targets, "descending exploitability targets")
      ->required()
      ->delimiter(',');
  table->add_option("--out", table_out, "also write the table as CSV");
  table->add_flag("--paper-reference", table_reference,
                  "print published full-scale reference step counts");

  // gradcheck
  auto* gradcheck_cmd = app.add_subcommand("gradcheck", "compare backprop to finite differences");
  std::string gradcheck_config;
  gradcheck_cmd->add_option("--config", gradcheck_config, "gradcheck config file")->required();

  // ood
  auto* ood = app.add_subcommand("ood", "out-of-distribution evaluation with bound check");
  std::string ood_ckpt, ood_train, ood_eval, ood_out = "out", ood_endgame;
  int ood_games = 256, ood_steps = 0;
  std::uint64_t ood_seed = 9;
  bool ood_timing = true, ood_svg = false, ood_force = false;
  ood->add_option("--checkpoint", ood_ckpt, "trained checkpoint")->required();
  ood->add_option("--train-dist", ood_train, "expected training distribution (sanity check)");
  ood->add_option("--eval-dist", ood_eval, "distribution to transfer to")->required();
  ood->add_option("--games", ood_games, "number of games");
  ood->add_option("--steps", ood_steps, "episode length");
  ood->add_option("--seed", ood_seed, "evaluation seed");
  ood->add_option("--timing", ood_timing, "record wall time");
  ood->add_flag("--svg", ood_svg, "emit a comparison SVG");
  ood->add_option("--out", ood_out, "output directory");
  ood->add_flag("--force", ood_force, "reuse a non-empty output directory");
  ood->add_option("--endgame-config", ood_endgame, "endgame config file");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "evaluate under varying value-function precision");
  std::string sweep_ckpt, sweep_game, sweep_out = "out", sweep_endgame;
  std::vector<long> sweep_iters;
  int sweep_games = 32, sweep_steps = 0;
  std::uint64_t sweep_seed = 9;
  bool sweep_svg = false, sweep_force = false;
  sweep->add_option("--checkpoint", sweep_ckpt, "trained checkpoint")->required();
  sweep->add_option("--game", sweep_game, "distribution id")->required();
  sweep->add_option("--vf-iters", sweep_iters, "solver iteration counts")
      ->required()
      ->delimiter(',');
  sweep->add_option("--games", sweep_games, "number of games");
  sweep->add_option("--steps", sweep_steps, "episode length");
  sweep->add_option("--seed", sweep_seed, "evaluation seed");
  sweep->add_flag("--svg", sweep_svg, "emit an SVG with one curve per precision");
  sweep->add_option("--out", sweep_out, "output directory");
  sweep->add_flag("--force", sweep_force, "reuse a non-empty output directory");
  sweep->add_option("--endgame-config", sweep_endgame, "endgame config file");

  // dump-game
  auto* dump = app.add_subcommand("dump-game", "snapshot a sampled game for replay");
  std::string dump_game, dump_out, dump_endgame;
  std::uint64_t dump_seed = 1;
  dump->add_option("--game", dump_game, "distribution id")->required();
  dump->add_option("--seed", dump_seed, "sample seed");
  dump->add_option("--out", dump_out, "output file (stdout when omitted)");
  dump->add_option("--endgame-config", dump_endgame, "endgame config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (train->parsed()) {
      return run_train(train_config, train_seed, train_seed_given, train_out, train_force);
    }
    if (eval->parsed()) {
      if (eval_algo.empty() == eval_ckpt.empty()) {
        throw ConfigError("eval: pass exactly one of --algo or --checkpoint");
      }
      return run_eval(eval_algo, eval_ckpt, eval_game, eval_games, eval_steps,
                      eval_train_horizon, eval_seed, eval_vf, eval_precision, eval_timing,
                      eval_svg, eval_dump, eval_out, eval_force, eval_endgame);
    }
    if (table->parsed()) {
      return run_table(table_curves, table_targets, table_out, table_reference);
    }
    if (gradcheck_cmd->parsed()) return run_gradcheck(gradcheck_config);
    if (ood->parsed()) {
      return run_ood(ood_ckpt, ood_train, ood_eval, ood_games, ood_steps, ood_seed, ood_timing,
                     ood_svg, ood_out, ood_force, ood_endgame);
    }
    if (sweep->parsed()) {
      return run_sweep(sweep_ckpt, sweep_game, sweep_iters, sweep_games, sweep_steps, sweep_seed,
                       sweep_svg, sweep_out, sweep_force, sweep_endgame);
    }
    if (dump->parsed()) return run_dump_game(dump_game, dump_seed, dump_out, dump_endgame);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
