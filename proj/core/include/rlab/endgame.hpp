#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rlab/regret.hpp"
#include "rlab/rng.hpp"

namespace rlab {

/// Single-street river endgame parameters. The deck holds two copies of each
/// rank (copies never matter for strength); bets and raises are pot fractions.
struct EndgameConfig {
  int deck_ranks = 6;
  int board_cards = 1;
  std::vector<double> bet_fractions = {1.0};
  int max_raises = 1;
  double ante = 1.0;

  int deck_size() const { return 2 * deck_ranks; }
  void validate() const;

  std::string serialize() const;
  static EndgameConfig parse(const std::string& text);
  static EndgameConfig parse_file(const std::string& path);
};

/// Root distributions over each player's private card; zero mass on board
/// cards, unit sum elsewhere.
struct Beliefs {
  Eigen::VectorXd p1;
  Eigen::VectorXd p2;
};

struct BettingNode {
  enum class Type { kDecision, kTerminal };
  enum class TerminalKind { kFold, kShowdown };

  Type type = Type::kDecision;
  int actor = -1;  // 0 acts first at the root
  double contrib[2] = {0, 0};
  double to_call = 0.0;
  std::vector<int> children;
  std::vector<std::string> action_names;
  int slot = -1;  // index into decision_slots[actor]

  TerminalKind terminal_kind = TerminalKind::kShowdown;
  int folder = -1;
};

/// A dealt river endgame: fixed board, betting tree, card bookkeeping.
/// Player 0 is the learner and acts first at the root (node 0).
struct SequentialEndgame {
  EndgameConfig config;
  std::vector<int> board;                        // card indices
  std::vector<BettingNode> nodes;                // nodes[0] is the root
  std::vector<std::vector<int>> decision_slots;  // [player] -> node ids
  std::vector<int> holdable;                     // cards not on the board
  double max_stake = 0.0;                        // largest winnable amount

  int deck_size() const { return config.deck_size(); }
  int rank(int card) const { return card / 2; }
  bool on_board(int card) const;
  /// Pair with the board beats high card; equal strength splits the pot.
  int strength(int card) const;
  int root_actions() const { return static_cast<int>(nodes[0].children.size()); }
  int num_root_infosets() const { return static_cast<int>(holdable.size()); }
  double delta_max() const { return 2.0 * max_stake; }
};

/// Builds the dealt game. The board is sampled uniformly without replacement
/// unless `fixed_board` pins it; beliefs are independent symmetric
/// Dirichlet(1) draws over the holdable cards.
std::pair<SequentialEndgame, Beliefs> build_endgame(const EndgameConfig& config,
                                                    const std::optional<std::vector<int>>& fixed_board,
                                                    Rng& rng);

/// Belief vectors for both players, a one-hot of the learner's private card
/// and a multi-hot of the board; length 4 * deck size. Used as the network's
/// context block for the root infoset holding `private_card`.
Eigen::VectorXd context_features(const SequentialEndgame& game, int private_card,
                                 const Beliefs& beliefs);

}  // namespace rlab
