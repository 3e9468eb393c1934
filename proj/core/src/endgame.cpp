#include "rlab/endgame.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "rlab/config.hpp"
#include "rlab/csv.hpp"

namespace rlab {

void EndgameConfig::validate() const {
  if (deck_size() < 3) throw std::invalid_argument("endgame config: deck must hold >= 3 cards");
  if (board_cards < 0 || board_cards > deck_size() - 2) {
    throw std::invalid_argument("endgame config: board_cards leaves no private hands");
  }
  if (max_raises < 0 || max_raises > 2) {
    throw std::invalid_argument("endgame config: max_raises must be in [0, 2]");
  }
  if (ante <= 0) throw std::invalid_argument("endgame config: ante must be positive");
  for (double f : bet_fractions) {
    if (f <= 0) throw std::invalid_argument("endgame config: bet fractions must be positive");
  }
}

std::string EndgameConfig::serialize() const {
  std::ostringstream out;
  out << "deck_ranks = " << deck_ranks << "\n";
  out << "board_cards = " << board_cards << "\n";
  out << "bet_fractions = ";
  for (size_t i = 0; i < bet_fractions.size(); ++i) {
    out << (i ? "," : "") << csv_double(bet_fractions[i]);
  }
  out << "\n";
  out << "max_raises = " << max_raises << "\n";
  out << "ante = " << csv_double(ante) << "\n";
  return out.str();
}

EndgameConfig EndgameConfig::parse(const std::string& text) {
  KeyValueFile kv = KeyValueFile::parse_string(text, "endgame config");
  EndgameConfig cfg;
  cfg.deck_ranks = kv.get_int("deck_ranks");
  cfg.board_cards = kv.get_int("board_cards");
  cfg.bet_fractions = kv.get_double_list("bet_fractions");
  cfg.max_raises = kv.get_int("max_raises");
  cfg.ante = kv.get_double("ante");
  cfg.validate();
  return cfg;
}

EndgameConfig EndgameConfig::parse_file(const std::string& path) {
  return parse(KeyValueFile::read_text(path));
}

bool SequentialEndgame::on_board(int card) const {
  return std::find(board.begin(), board.end(), card) != board.end();
}

int SequentialEndgame::strength(int card) const {
  int r = rank(card);
  for (int b : board) {
    if (rank(b) == r) return config.deck_ranks + r;  // pair with the board
  }
  return r;
}

namespace {

struct TreeBuilder {
  const EndgameConfig& cfg;
  std::vector<BettingNode> nodes;
  std::vector<std::vector<int>> slots{2};

  int add_terminal(BettingNode::TerminalKind kind, int folder, double c0, double c1) {
    BettingNode n;
    n.type = BettingNode::Type::kTerminal;
    n.terminal_kind = kind;
    n.folder = folder;
    n.contrib[0] = c0;
    n.contrib[1] = c1;
    nodes.push_back(std::move(n));
    return static_cast<int>(nodes.size()) - 1;
  }

  // `checked` is true when the actor faces no bet but a check already
  // happened this street, so another check ends the hand.
  int add_decision(int actor, double c0, double c1, double to_call, int raises_used,
                   bool checked) {
    int id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    {
      BettingNode& n = nodes[id];
      n.type = BettingNode::Type::kDecision;
      n.actor = actor;
      n.contrib[0] = c0;
      n.contrib[1] = c1;
      n.to_call = to_call;
      n.slot = static_cast<int>(slots[actor].size());
    }
    slots[actor].push_back(id);

    std::vector<int> children;
    std::vector<std::string> names;
    const int other = 1 - actor;
    const double pot = c0 + c1;

    if (to_call == 0.0) {
      // Check.
      int child = checked ? add_terminal(BettingNode::TerminalKind::kShowdown, -1, c0, c1)
                          : add_decision(other, c0, c1, 0.0, raises_used, true);
      children.push_back(child);
      names.push_back("check");
      // Bets.
      for (double f : cfg.bet_fractions) {
        double bet = f * pot;
        double nc0 = c0 + (actor == 0 ? bet : 0.0);
        double nc1 = c1 + (actor == 1 ? bet : 0.0);
        children.push_back(add_decision(other, nc0, nc1, bet, raises_used, false));
        names.push_back("bet:" + csv_double(f));
      }
    } else {
      children.push_back(add_terminal(BettingNode::TerminalKind::kFold, actor, c0, c1));
      names.push_back("fold");
      double cc0 = c0 + (actor == 0 ? to_call : 0.0);
      double cc1 = c1 + (actor == 1 ? to_call : 0.0);
      children.push_back(add_terminal(BettingNode::TerminalKind::kShowdown, -1, cc0, cc1));
      names.push_back("call");
      if (raises_used < cfg.max_raises) {
        for (double f : cfg.bet_fractions) {
          double raise_by = f * (pot + to_call);
          double rc0 = c0 + (actor == 0 ? to_call + raise_by : 0.0);
          double rc1 = c1 + (actor == 1 ? to_call + raise_by : 0.0);
          children.push_back(add_decision(other, rc0, rc1, raise_by, raises_used + 1, false));
          names.push_back("raise:" + csv_double(f));
        }
      }
    }
    nodes[id].children = std::move(children);
    nodes[id].action_names = std::move(names);
    return id;
  }
};

}  // namespace

std::pair<SequentialEndgame, Beliefs> build_endgame(
    const EndgameConfig& config, const std::optional<std::vector<int>>& fixed_board, Rng& rng) {
  config.validate();

  SequentialEndgame game;
  game.config = config;

  const int deck = config.deck_size();
  if (fixed_board) {
    game.board = *fixed_board;
    if (static_cast<int>(game.board.size()) != config.board_cards) {
      throw std::invalid_argument("build_endgame: fixed board size mismatch");
    }
    for (int c : game.board) {
      if (c < 0 || c >= deck) throw std::invalid_argument("build_endgame: board card out of range");
    }
  } else {
    std::vector<int> remaining(deck);
    for (int i = 0; i < deck; ++i) remaining[i] = i;
    for (int i = 0; i < config.board_cards; ++i) {
      int j = i + rng.uniform_int(deck - i);
      std::swap(remaining[i], remaining[j]);
      game.board.push_back(remaining[i]);
    }
  }

  for (int c = 0; c < deck; ++c) {
    if (!game.on_board(c)) game.holdable.push_back(c);
  }
  if (game.holdable.size() < 2) throw std::invalid_argument("build_endgame: empty hand range");

  TreeBuilder builder{config, {}, {{}, {}}};
  int root = builder.add_decision(0, config.ante, config.ante, 0.0, 0, false);
  if (root != 0) throw std::logic_error("build_endgame: root must be node 0");
  game.nodes = std::move(builder.nodes);
  game.decision_slots = std::move(builder.slots);

  game.max_stake = 0.0;
  for (const BettingNode& n : game.nodes) {
    if (n.type == BettingNode::Type::kTerminal) {
      game.max_stake = std::max(game.max_stake, std::max(n.contrib[0], n.contrib[1]));
    }
  }

  Beliefs beliefs;
  auto sample_belief = [&]() {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(deck);
    Eigen::VectorXd draw = rng.dirichlet(static_cast<int>(game.holdable.size()));
    for (size_t i = 0; i < game.holdable.size(); ++i) full[game.holdable[i]] = draw[i];
    return full;
  };
  beliefs.p1 = sample_belief();
  beliefs.p2 = sample_belief();
  return {std::move(game), std::move(beliefs)};
}

Eigen::VectorXd context_features(const SequentialEndgame& game, int private_card,
                                 const Beliefs& beliefs) {
  const int deck = game.deck_size();
  if (private_card < 0 || private_card >= deck || game.on_board(private_card)) {
    throw std::invalid_argument("context_features: invalid private card");
  }
  Eigen::VectorXd f = Eigen::VectorXd::Zero(4 * deck);
  f.segment(0, deck) = beliefs.p1;
  f.segment(deck, deck) = beliefs.p2;
  f[2 * deck + private_card] = 1.0;
  for (int b : game.board) f[3 * deck + b] = 1.0;
  return f;
}

}  // namespace rlab
