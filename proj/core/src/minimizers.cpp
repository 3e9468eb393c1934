#include "rlab/minimizers.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "rlab/csv.hpp"

namespace rlab {

std::string to_string(Kind kind) {
  switch (kind) {
    case Kind::kRm: return "rm";
    case Kind::kRmPlus: return "rm+";
    case Kind::kPrm: return "prm";
    case Kind::kPrmPlus: return "prm+";
    case Kind::kHedge: return "hedge";
    case Kind::kPredictiveHedge: return "phedge";
    case Kind::kNoa: return "noa";
    case Kind::kNprm: return "nprm";
    case Kind::kNprmPlus: return "nprm+";
    case Kind::kNeuralHedge: return "nhedge";
  }
  throw std::logic_error("unreachable");
}

std::optional<Kind> kind_from_string(const std::string& id) {
  if (id == "rm") return Kind::kRm;
  if (id == "rm+") return Kind::kRmPlus;
  if (id == "prm") return Kind::kPrm;
  if (id == "prm+") return Kind::kPrmPlus;
  if (id == "hedge") return Kind::kHedge;
  if (id == "phedge") return Kind::kPredictiveHedge;
  if (id == "noa") return Kind::kNoa;
  if (id == "nprm") return Kind::kNprm;
  if (id == "nprm+") return Kind::kNprmPlus;
  if (id == "nhedge") return Kind::kNeuralHedge;
  return std::nullopt;
}

bool is_neural(Kind kind) {
  return kind == Kind::kNoa || kind == Kind::kNprm || kind == Kind::kNprmPlus ||
         kind == Kind::kNeuralHedge;
}

bool is_self_predictive(Kind kind) {
  return kind == Kind::kPrm || kind == Kind::kPrmPlus || kind == Kind::kPredictiveHedge;
}

bool uses_hedge_rule(Kind kind) {
  return kind == Kind::kHedge || kind == Kind::kPredictiveHedge || kind == Kind::kNeuralHedge;
}

Aggregation aggregation_of(Kind kind) {
  switch (kind) {
    case Kind::kRmPlus:
    case Kind::kPrmPlus:
    case Kind::kNprmPlus:
      return Aggregation::kPositivePart;
    default:
      return Aggregation::kFull;
  }
}

double hedge_beta(int num_actions, int horizon) {
  return std::sqrt(2.0 * std::log(static_cast<double>(num_actions)) /
                   static_cast<double>(horizon));
}

namespace {

/// Runs the network on the current observation and stores its output in the
/// state (prediction for bounded heads, pending strategy for softmax heads).
void refresh_network_output(MinimizerState& state) {
  const NetworkParams& net = *state.options.network;
  Eigen::VectorXd features =
      build_features(state.last_reward.values, state.cumulative.values, state.step,
                     state.options.delta_max, state.options.context);
  Eigen::VectorXd out = recurrent_forward(net, features, state.hidden, nullptr,
                                          to_string(state.kind).c_str());
  if (net.head_kind == HeadKind::kStrategySoftmax) {
    state.net_strategy = std::move(out);
  } else {
    state.prediction.values = std::move(out);
  }
}

}  // namespace

MinimizerState make_minimizer(Kind kind, int num_actions, MinimizerOptions options) {
  if (num_actions < 1) throw std::invalid_argument("make_minimizer: need at least one action");
  MinimizerState s;
  s.kind = kind;
  s.options = std::move(options);
  s.cumulative = CumulativeRegret::zeros(num_actions);
  s.prediction = PredictionVector{Eigen::VectorXd::Zero(num_actions)};
  s.average = AverageStrategy::zeros(num_actions);
  s.last_reward = RewardVector{Eigen::VectorXd::Zero(num_actions)};
  s.last_strategy = uniform_strategy(num_actions);
  if (uses_hedge_rule(kind)) s.beta = hedge_beta(num_actions, s.options.hedge_horizon);
  if (is_neural(kind)) {
    if (!s.options.network) {
      throw std::invalid_argument("make_minimizer: neural kind requires network parameters");
    }
    const NetworkParams& net = *s.options.network;
    bool wants_softmax = kind == Kind::kNoa;
    if (wants_softmax != (net.head_kind == HeadKind::kStrategySoftmax)) {
      throw std::invalid_argument("make_minimizer: head kind does not match algorithm");
    }
    if (net.action_dim != num_actions) {
      throw std::invalid_argument("make_minimizer: network action_dim " +
                                  std::to_string(net.action_dim) + " != " +
                                  std::to_string(num_actions));
    }
    int expected = 2 * num_actions + static_cast<int>(s.options.context.size());
    if (net.input_dim != expected) {
      throw std::invalid_argument("make_minimizer: network input_dim " +
                                  std::to_string(net.input_dim) + " != " +
                                  std::to_string(expected));
    }
    s.hidden = zero_state(net);
    refresh_network_output(s);  // consumes the zero reward x^0
  }
  return s;
}

StrategyVector strategy_from(const Eigen::VectorXd& cumulative,
                             const Eigen::VectorXd& prediction, bool hedge_rule, double beta) {
  if (hedge_rule) {
    return StrategyVector{softmax(beta * (cumulative + prediction))};
  }
  Eigen::VectorXd xi = (cumulative + prediction).cwiseMax(0.0);
  double norm = xi.sum();
  if (norm > 0) return StrategyVector{xi / norm};
  return uniform_strategy(static_cast<int>(cumulative.size()));
}

StrategyVector next_strategy(MinimizerState& state) {
  StrategyVector sigma;
  if (state.kind == Kind::kNoa) {
    sigma = StrategyVector{state.net_strategy};
  } else {
    sigma = strategy_from(state.cumulative.values, state.prediction.values,
                          uses_hedge_rule(state.kind), state.beta);
  }
  state.last_strategy = sigma;
  state.awaiting_reward = true;
  return sigma;
}

void observe_reward(MinimizerState& state, const RewardVector& x) {
  if (!state.awaiting_reward) {
    throw std::logic_error("observe_reward: called twice without next_strategy");
  }
  if (x.size() != state.cumulative.size()) {
    throw std::invalid_argument("observe_reward: reward dimension mismatch");
  }
  RegretVector r = instantaneous_regret(state.last_strategy, x);
  state.cumulative = accumulate(std::move(state.cumulative), r, aggregation_of(state.kind));
  state.average = update_average(std::move(state.average), state.last_strategy);
  state.last_reward = x;
  state.step += 1;
  state.awaiting_reward = false;

  if (is_neural(state.kind)) {
    refresh_network_output(state);
  } else if (is_self_predictive(state.kind) && !state.options.zero_predictor) {
    state.prediction.values = r.values;
  }
  // RM kinds and zero_predictor keep the prediction at zero.
}

double replay_external_regret(const Trajectory& traj, int prefix) {
  if (prefix <= 0) return 0.0;
  if (prefix > static_cast<int>(traj.rewards.size())) {
    throw std::invalid_argument("replay_external_regret: prefix exceeds trajectory length");
  }
  Eigen::VectorXd total = Eigen::VectorXd::Zero(traj.rewards[0].size());
  for (int t = 0; t < prefix; ++t) {
    total += instantaneous_regret(traj.strategies[t], traj.rewards[t]).values;
  }
  return total.maxCoeff();
}

Trajectory run_episode(MinimizerState& state, Environment& env, int horizon,
                       bool record_timing) {
  using clock = std::chrono::steady_clock;
  Trajectory traj;
  traj.strategies.reserve(horizon);
  double env_ms = 0.0, algo_ms = 0.0;
  for (int t = 1; t <= horizon; ++t) {
    try {
      auto a0 = clock::now();
      StrategyVector sigma = next_strategy(state);
      auto a1 = clock::now();

      auto e0 = clock::now();
      RewardVector x = env.step(sigma);
      auto e1 = clock::now();

      auto b0 = clock::now();
      traj.predictions.push_back(state.kind == Kind::kNoa
                                     ? PredictionVector{Eigen::VectorXd::Zero(sigma.size())}
                                     : state.prediction);
      observe_reward(state, x);
      auto b1 = clock::now();

      traj.strategies.push_back(std::move(sigma));
      traj.rewards.push_back(std::move(x));
      traj.cumulative.push_back(state.cumulative);
      traj.averages.push_back(state.average.strategy());
      traj.exploitability.push_back(env.exploitability(traj.averages.back()));

      if (record_timing) {
        algo_ms += std::chrono::duration<double, std::milli>(a1 - a0 + (b1 - b0)).count();
        env_ms += std::chrono::duration<double, std::milli>(e1 - e0).count();
      }
      traj.env_ms.push_back(env_ms);
      traj.algo_ms.push_back(algo_ms);
    } catch (const std::exception& e) {
      throw std::runtime_error("run_episode: step " + std::to_string(t) + ": " + e.what());
    }
  }
  return traj;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_trajectory_csv: cannot open " + path);
  const int n = traj.strategies.empty() ? 0 : traj.strategies[0].size();
  out << "step";
  for (int a = 0; a < n; ++a) out << ",sigma_" << a;
  for (int a = 0; a < n; ++a) out << ",avg_sigma_" << a;
  for (int a = 0; a < n; ++a) out << ",x_" << a;
  for (int a = 0; a < n; ++a) out << ",R_" << a;
  out << ",exploitability\n";
  for (size_t t = 0; t < traj.strategies.size(); ++t) {
    out << (t + 1);
    for (int a = 0; a < n; ++a) out << ',' << csv_double(traj.strategies[t].probs[a]);
    for (int a = 0; a < n; ++a) out << ',' << csv_double(traj.averages[t].probs[a]);
    for (int a = 0; a < n; ++a) out << ',' << csv_double(traj.rewards[t].values[a]);
    for (int a = 0; a < n; ++a) out << ',' << csv_double(traj.cumulative[t].values[a]);
    out << ',' << csv_double(traj.exploitability[t]) << '\n';
  }
}

}  // namespace rlab
