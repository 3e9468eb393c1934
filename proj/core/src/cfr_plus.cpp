#include "rlab/cfr_plus.hpp"

#include <cmath>
#include <stdexcept>

namespace rlab {

namespace {

Eigen::MatrixXd rm_plus_rows(const Eigen::MatrixXd& regrets) {
  Eigen::MatrixXd pos = regrets.cwiseMax(0.0);
  Eigen::MatrixXd out(pos.rows(), pos.cols());
  const double uniform = 1.0 / static_cast<double>(pos.cols());
  for (int h = 0; h < pos.rows(); ++h) {
    double s = pos.row(h).sum();
    if (s > 0) {
      out.row(h) = pos.row(h) / s;
    } else {
      out.row(h).setConstant(uniform);
    }
  }
  return out;
}

/// sign(strength(h) - strength(h')) with zero diagonal; showdown values for
/// either player are stake * (S * opponent_reach).
Eigen::MatrixXd showdown_sign_matrix(const SequentialEndgame& game) {
  const int deck = game.deck_size();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(deck, deck);
  for (int a = 0; a < deck; ++a) {
    for (int b = 0; b < deck; ++b) {
      if (a == b) continue;
      int d = game.strength(a) - game.strength(b);
      s(a, b) = d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0);
    }
  }
  return s;
}

Eigen::MatrixXd frozen_root_matrix(const SequentialEndgame& game,
                                   const std::vector<StrategyVector>& root_strategies) {
  const int deck = game.deck_size();
  const int acts = game.root_actions();
  if (static_cast<int>(root_strategies.size()) != game.num_root_infosets()) {
    throw std::invalid_argument("cfr_plus: one frozen strategy per root infoset required");
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(deck, acts, 1.0 / acts);
  for (size_t i = 0; i < game.holdable.size(); ++i) {
    const StrategyVector& sv = root_strategies[i];
    if (sv.size() != acts) throw std::invalid_argument("cfr_plus: frozen strategy arity mismatch");
    if (!is_simplex(sv.probs, 1e-7)) {
      throw std::invalid_argument("cfr_plus: frozen root strategy is not a simplex point");
    }
    m.row(game.holdable[i]) = sv.probs.transpose();
  }
  return m;
}

struct Solver {
  const SequentialEndgame& game;
  const Beliefs& beliefs;
  const Eigen::MatrixXd* frozen;  // deck x actions, or null
  Eigen::MatrixXd sign;
  std::array<std::vector<Eigen::MatrixXd>, 2> regret;
  std::array<std::vector<Eigen::MatrixXd>, 2> avg;

  Solver(const SequentialEndgame& g, const Beliefs& b, const Eigen::MatrixXd* f)
      : game(g), beliefs(b), frozen(f), sign(showdown_sign_matrix(g)) {
    for (int p = 0; p < 2; ++p) {
      for (int node_id : game.decision_slots[p]) {
        int acts = static_cast<int>(game.nodes[node_id].children.size());
        regret[p].push_back(Eigen::MatrixXd::Zero(game.deck_size(), acts));
        avg[p].push_back(Eigen::MatrixXd::Zero(game.deck_size(), acts));
      }
    }
  }

  Eigen::MatrixXd strategy(const BettingNode& n, int node_id) const {
    if (n.actor == 0 && node_id == 0 && frozen) return *frozen;
    return rm_plus_rows(regret[n.actor][n.slot]);
  }

  Eigen::VectorXd terminal_value(const BettingNode& n, int p,
                                 const Eigen::VectorXd& opp_reach) const {
    if (n.terminal_kind == BettingNode::TerminalKind::kFold) {
      double u = (n.folder == p) ? -n.contrib[p] : n.contrib[1 - p];
      double total = opp_reach.sum();
      return (u * (total - opp_reach.array())).matrix();
    }
    return n.contrib[0] * (sign * opp_reach);
  }

  Eigen::VectorXd walk_update(int node_id, int p, const Eigen::VectorXd& own_reach,
                              const Eigen::VectorXd& opp_reach, double t_weight) {
    const BettingNode& n = game.nodes[node_id];
    if (n.type == BettingNode::Type::kTerminal) return terminal_value(n, p, opp_reach);

    const int acts = static_cast<int>(n.children.size());
    Eigen::MatrixXd sigma = strategy(n, node_id);
    if (n.actor == p) {
      Eigen::MatrixXd values(game.deck_size(), acts);
      for (int a = 0; a < acts; ++a) {
        values.col(a) = walk_update(n.children[a], p, own_reach.cwiseProduct(sigma.col(a)),
                                    opp_reach, t_weight);
      }
      Eigen::VectorXd v = (sigma.array() * values.array()).rowwise().sum().matrix();
      bool pinned = (p == 0 && node_id == 0 && frozen);
      if (!pinned) {
        regret[p][n.slot] = (regret[p][n.slot] + (values.colwise() - v)).cwiseMax(0.0);
      }
      avg[p][n.slot] += t_weight * (sigma.array().colwise() * own_reach.array()).matrix();
      return v;
    }
    Eigen::VectorXd v = Eigen::VectorXd::Zero(game.deck_size());
    for (int a = 0; a < acts; ++a) {
      v += walk_update(n.children[a], p, own_reach, opp_reach.cwiseProduct(sigma.col(a)),
                       t_weight);
    }
    return v;
  }

  EndgameProfile average_profile() const {
    EndgameProfile prof;
    for (int p = 0; p < 2; ++p) {
      for (const Eigen::MatrixXd& acc : avg[p]) prof.tables[p].push_back(rm_plus_rows(acc));
    }
    if (frozen) {
      prof.tables[0][game.nodes[0].slot] = *frozen;
    }
    return prof;
  }
};

Eigen::VectorXd holdable_indicator(const SequentialEndgame& game) {
  Eigen::VectorXd ind = Eigen::VectorXd::Zero(game.deck_size());
  for (int c : game.holdable) ind[c] = 1.0;
  return ind;
}

/// Expected value vector for player 0 with both players on `prof`, given the
/// opponent reach entering `node_id`.
Eigen::VectorXd walk_ev(const SequentialEndgame& game, const Eigen::MatrixXd& sign,
                        const EndgameProfile& prof, int node_id,
                        const Eigen::VectorXd& opp_reach) {
  const BettingNode& n = game.nodes[node_id];
  if (n.type == BettingNode::Type::kTerminal) {
    if (n.terminal_kind == BettingNode::TerminalKind::kFold) {
      double u = (n.folder == 0) ? -n.contrib[0] : n.contrib[1];
      return (u * (opp_reach.sum() - opp_reach.array())).matrix();
    }
    return n.contrib[0] * (sign * opp_reach);
  }
  const Eigen::MatrixXd& sigma = prof.tables[n.actor][n.slot];
  Eigen::VectorXd v = Eigen::VectorXd::Zero(game.deck_size());
  for (size_t a = 0; a < n.children.size(); ++a) {
    if (n.actor == 0) {
      v += sigma.col(static_cast<int>(a))
               .cwiseProduct(walk_ev(game, sign, prof, n.children[a], opp_reach));
    } else {
      v += walk_ev(game, sign, prof, n.children[a],
                   opp_reach.cwiseProduct(sigma.col(static_cast<int>(a))));
    }
  }
  return v;
}

/// Best-response values for br_player against the other side of `prof`.
/// When `pinned_root` is set and br_player is 0, the root mixes according to
/// the profile instead of maximizing (constrained best response).
Eigen::VectorXd walk_br(const SequentialEndgame& game, const Eigen::MatrixXd& sign,
                        const EndgameProfile& prof, int br_player, int node_id,
                        const Eigen::VectorXd& opp_reach, bool pinned_root) {
  const BettingNode& n = game.nodes[node_id];
  if (n.type == BettingNode::Type::kTerminal) {
    if (n.terminal_kind == BettingNode::TerminalKind::kFold) {
      double u = (n.folder == br_player) ? -n.contrib[br_player] : n.contrib[1 - br_player];
      return (u * (opp_reach.sum() - opp_reach.array())).matrix();
    }
    // The sign matrix is antisymmetric, so the same expression serves both
    // players: u_p(h, h') = stake * sign(strength(h) - strength(h')).
    return n.contrib[0] * (sign * opp_reach);
  }
  if (n.actor == br_player) {
    Eigen::MatrixXd values(game.deck_size(), static_cast<int>(n.children.size()));
    for (size_t a = 0; a < n.children.size(); ++a) {
      values.col(static_cast<int>(a)) =
          walk_br(game, sign, prof, br_player, n.children[a], opp_reach, pinned_root);
    }
    if (pinned_root && br_player == 0 && node_id == 0) {
      const Eigen::MatrixXd& sigma = prof.tables[0][n.slot];
      return (sigma.array() * values.array()).rowwise().sum().matrix();
    }
    return values.rowwise().maxCoeff();
  }
  const Eigen::MatrixXd& sigma = prof.tables[n.actor][n.slot];
  Eigen::VectorXd v = Eigen::VectorXd::Zero(game.deck_size());
  for (size_t a = 0; a < n.children.size(); ++a) {
    v += walk_br(game, sign, prof, br_player, n.children[a],
                 opp_reach.cwiseProduct(sigma.col(static_cast<int>(a))), pinned_root);
  }
  return v;
}

double br_total(const SequentialEndgame& game, const Beliefs& beliefs,
                const EndgameProfile& prof, const Eigen::MatrixXd& sign, int br_player,
                bool pinned_root) {
  const Eigen::VectorXd& own_belief = br_player == 0 ? beliefs.p1 : beliefs.p2;
  const Eigen::VectorXd& opp_belief = br_player == 0 ? beliefs.p2 : beliefs.p1;
  Eigen::VectorXd v = walk_br(game, sign, prof, br_player, 0, opp_belief, pinned_root);
  return own_belief.dot(v);
}

}  // namespace

CfrPlusResult cfr_plus_solve(const SequentialEndgame& game, const Beliefs& beliefs,
                             const std::optional<std::vector<StrategyVector>>& frozen_root,
                             long iters) {
  if (iters < 1) throw std::invalid_argument("cfr_plus_solve: iters must be >= 1");

  Eigen::MatrixXd frozen_matrix;
  const Eigen::MatrixXd* frozen = nullptr;
  if (frozen_root) {
    frozen_matrix = frozen_root_matrix(game, *frozen_root);
    frozen = &frozen_matrix;
  }

  Solver solver(game, beliefs, frozen);
  Eigen::VectorXd ones = holdable_indicator(game);

  for (long t = 1; t <= iters; ++t) {
    double w = static_cast<double>(t);
    solver.walk_update(0, 0, ones, beliefs.p2, w);
    solver.walk_update(0, 1, ones, beliefs.p1, w);
  }

  CfrPlusResult result;
  result.iterations = iters;
  result.average = solver.average_profile();

  // Root counterfactual values under the average profile, the learner's own
  // card probability factored out.
  const BettingNode& root = game.nodes[0];
  Eigen::MatrixXd root_values(game.deck_size(), game.root_actions());
  for (int a = 0; a < game.root_actions(); ++a) {
    root_values.col(a) =
        walk_ev(game, solver.sign, result.average, root.children[a], beliefs.p2);
  }
  for (int card : game.holdable) {
    result.root_values.push_back(RewardVector{root_values.row(card).transpose()});
  }

  result.nash_gap =
      br_total(game, beliefs, result.average, solver.sign, 0, frozen != nullptr) +
      br_total(game, beliefs, result.average, solver.sign, 1, false);
  return result;
}

double best_response_value(const SequentialEndgame& game, const Beliefs& beliefs,
                           const EndgameProfile& profile, int br_player) {
  Eigen::MatrixXd sign = showdown_sign_matrix(game);
  return br_total(game, beliefs, profile, sign, br_player, false);
}

double learner_guaranteed_value(const SequentialEndgame& game, const Beliefs& beliefs,
                                const EndgameProfile& profile) {
  return -best_response_value(game, beliefs, profile, 1);
}

RootEnvironmentStep sequential_env_step(const SequentialEndgame& game, const Beliefs& beliefs,
                                        const std::vector<StrategyVector>& root_strategies,
                                        long iters) {
  CfrPlusResult solved = cfr_plus_solve(game, beliefs, root_strategies, iters);
  RootEnvironmentStep step;
  step.rewards = std::move(solved.root_values);
  step.solver_iterations = solved.iterations;
  step.residual_gap = solved.nash_gap;
  return step;
}

double exploitability_sequential(const SequentialEndgame& game, const Beliefs& beliefs,
                                 const std::vector<StrategyVector>& root_averages,
                                 long precision_iters) {
  CfrPlusResult unfrozen = cfr_plus_solve(game, beliefs, std::nullopt, precision_iters);
  double game_value = learner_guaranteed_value(game, beliefs, unfrozen.average);
  CfrPlusResult frozen = cfr_plus_solve(game, beliefs, root_averages, precision_iters);
  double learner_value = learner_guaranteed_value(game, beliefs, frozen.average);
  return game_value - learner_value;
}

}  // namespace rlab
