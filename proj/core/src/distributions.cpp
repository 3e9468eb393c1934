#include "rlab/distributions.hpp"

#include <sstream>
#include <stdexcept>

#include "rlab/csv.hpp"

namespace rlab {

namespace {

// Pins the endgame-fixed deal: highest cards on the board, beliefs drawn once
// from a constant internal seed.
constexpr std::uint64_t kFixedEndgameSeed = 0x5eedf1f0ULL;

class MatrixGameDistribution : public GameDistribution {
 public:
  explicit MatrixGameDistribution(MatrixDistribution dist) : dist_(dist) {}

  std::string id() const override { return dist_.id(); }
  int num_actions() const override { return dist_.num_actions(); }
  double delta_max() const override { return dist_.delta_max(); }
  int context_dim() const override { return 0; }

  std::unique_ptr<MetaEnvironment> make_env(std::uint64_t seed,
                                            const EnvOptions&) const override {
    Rng rng(seed);
    MatrixGame game = sample_matrix_game(dist_, rng);
    return std::make_unique<SingleEnvAdapter>(
        std::make_unique<MatrixEnvironment>(std::move(game), dist_.delta_max()));
  }

  const MatrixDistribution& dist() const { return dist_; }

 private:
  MatrixDistribution dist_;
};

class EndgameDistribution : public GameDistribution {
 public:
  EndgameDistribution(EndgameConfig config, bool fixed) : config_(config), fixed_(fixed) {
    config_.validate();
    // One prototype deal pins the tree shape shared by every sample.
    Rng rng(derive_seed(kFixedEndgameSeed, seed_stream::kBoard));
    auto [game, beliefs] = build_endgame(config_, pinned_board(), rng);
    root_actions_ = game.root_actions();
    delta_max_ = game.delta_max();
    context_dim_ = 4 * game.deck_size();
  }

  std::string id() const override { return fixed_ ? "endgame-fixed" : "endgame-sampled"; }
  int num_actions() const override { return root_actions_; }
  double delta_max() const override { return delta_max_; }
  int context_dim() const override { return context_dim_; }

  std::unique_ptr<MetaEnvironment> make_env(std::uint64_t seed,
                                            const EnvOptions& opts) const override {
    auto [game, beliefs] = deal(seed);
    return std::make_unique<EndgameEnvironment>(std::move(game), std::move(beliefs), opts);
  }

  double solver_residual(std::uint64_t seed, long iters) const override {
    auto [game, beliefs] = deal(seed);
    return cfr_plus_solve(game, beliefs, std::nullopt, iters).nash_gap;
  }

  std::pair<SequentialEndgame, Beliefs> deal(std::uint64_t seed) const {
    if (fixed_) {
      Rng rng(derive_seed(kFixedEndgameSeed, seed_stream::kBeliefs));
      return build_endgame(config_, pinned_board(), rng);
    }
    Rng rng(derive_seed(seed, seed_stream::kBoard));
    return build_endgame(config_, std::nullopt, rng);
  }

  const EndgameConfig& config() const { return config_; }

 private:
  std::optional<std::vector<int>> pinned_board() const {
    if (!fixed_) return std::nullopt;
    std::vector<int> board;
    for (int i = 0; i < config_.board_cards; ++i) board.push_back(config_.deck_size() - 1 - i);
    return board;
  }

  EndgameConfig config_;
  bool fixed_;
  int root_actions_ = 0;
  double delta_max_ = 0.0;
  int context_dim_ = 0;
};

}  // namespace

bool is_endgame_id(const std::string& id) {
  return id == "endgame-fixed" || id == "endgame-sampled";
}

std::unique_ptr<GameDistribution> make_distribution(const std::string& id,
                                                    const EndgameConfig& endgame_config) {
  if (id == "rps-fixed" || id == "rps-sampled" || id == "uniform-3x3") {
    return std::make_unique<MatrixGameDistribution>(matrix_distribution_from_id(id));
  }
  if (id == "endgame-fixed") return std::make_unique<EndgameDistribution>(endgame_config, true);
  if (id == "endgame-sampled") {
    return std::make_unique<EndgameDistribution>(endgame_config, false);
  }
  throw std::invalid_argument("unknown game distribution id: " + id);
}

EndgameEnvironment::EndgameEnvironment(SequentialEndgame game, Beliefs beliefs, EnvOptions opts)
    : game_(std::move(game)), beliefs_(std::move(beliefs)), opts_(opts) {
  const int learners = game_.num_root_infosets();
  weights_.resize(learners);
  for (int i = 0; i < learners; ++i) weights_[i] = beliefs_.p1[game_.holdable[i]];
  double total = weights_.sum();
  if (total <= 0) throw std::invalid_argument("EndgameEnvironment: degenerate beliefs");
  weights_ /= total;
  contexts_.reserve(learners);
  for (int i = 0; i < learners; ++i) {
    contexts_.push_back(context_features(game_, game_.holdable[i], beliefs_));
  }
}

std::vector<RewardVector> EndgameEnvironment::step(const std::vector<StrategyVector>& sigmas) {
  RootEnvironmentStep result = sequential_env_step(game_, beliefs_, sigmas, opts_.vf_iters);
  last_residual_gap_ = result.residual_gap;
  return std::move(result.rewards);
}

double EndgameEnvironment::exploitability(const std::vector<StrategyVector>& averages) const {
  if (!game_value_) {
    CfrPlusResult unfrozen = cfr_plus_solve(game_, beliefs_, std::nullopt, opts_.eval_iters);
    game_value_ = learner_guaranteed_value(game_, beliefs_, unfrozen.average);
  }
  CfrPlusResult frozen = cfr_plus_solve(game_, beliefs_, averages, opts_.eval_iters);
  return *game_value_ - learner_guaranteed_value(game_, beliefs_, frozen.average);
}

std::string game_snapshot(const GameDistribution& dist, std::uint64_t seed,
                          const EnvOptions& opts) {
  std::ostringstream out;
  out << "distribution = " << dist.id() << "\n";
  out << "seed = " << seed << "\n";
  if (is_endgame_id(dist.id())) {
    const auto& eg = dynamic_cast<const EndgameDistribution&>(dist);
    auto [game, beliefs] = eg.deal(seed);
    std::istringstream cfg(game.config.serialize());
    std::string line;
    while (std::getline(cfg, line)) out << line << "\n";
    out << "board = ";
    for (size_t i = 0; i < game.board.size(); ++i) out << (i ? "," : "") << game.board[i];
    out << "\n";
    auto belief_line = [&](const char* key, const Eigen::VectorXd& b) {
      out << key << " = ";
      for (int i = 0; i < b.size(); ++i) out << (i ? "," : "") << csv_double(b[i]);
      out << "\n";
    };
    belief_line("beliefs_p1", beliefs.p1);
    belief_line("beliefs_p2", beliefs.p2);
  } else {
    Rng rng(seed);
    const auto& md = dynamic_cast<const MatrixGameDistribution&>(dist);
    MatrixGame game = sample_matrix_game(md.dist(), rng);
    for (int i = 0; i < game.rows(); ++i) {
      out << "payoff_row_" << i << " = ";
      for (int j = 0; j < game.cols(); ++j) {
        out << (j ? "," : "") << csv_double(game.payoff(i, j));
      }
      out << "\n";
    }
  }
  (void)opts;
  return out.str();
}

}  // namespace rlab
