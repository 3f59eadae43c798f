#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ttt/game_state.hpp"
#include "ttt/matching.hpp"

namespace ttt {

struct CellPair {
  LineId line;
  CellId a;
  CellId b;
};

enum class PairingScope { Pregame, Midgame };

const char* scope_name(PairingScope s);

/// Disjoint cell pairs, one per in-scope line. Pre-game strategies cover
/// every line of the empty board; mid-game strategies cover the survivors of
/// the recorded position.
class PairingStrategy {
 public:
  PairingStrategy(BoardPtr board, PairingScope scope, std::vector<Move> position,
                  std::vector<CellPair> pairs, std::vector<CellId> free_cells);

  const Board& board() const { return *board_; }
  const BoardPtr& board_ptr() const { return board_; }
  PairingScope scope() const { return scope_; }
  const std::vector<Move>& position() const { return position_; }
  const std::vector<CellPair>& pairs() const { return pairs_; }
  const std::vector<CellId>& free_cells() const { return free_; }

  /// Partner of a paired cell, -1 for unpaired cells.
  CellId partner_of(CellId c) const { return partner_[static_cast<std::size_t>(c)]; }
  /// Index into pairs() of the pair holding c, -1 if none.
  int pair_index_of(CellId c) const { return pair_of_[static_cast<std::size_t>(c)]; }

  /// Occupancy of the recorded position replayed on an empty board.
  GameState position_state() const;

 private:
  BoardPtr board_;
  PairingScope scope_;
  std::vector<Move> position_;
  std::vector<CellPair> pairs_;
  std::vector<CellId> free_;
  std::vector<CellId> partner_;
  std::vector<std::int32_t> pair_of_;
};

struct PairingReport {
  bool valid = false;
  int in_scope_lines = 0;
  int covered_lines = 0;
  LineId first_violated_line = -1;
  std::string reason;
};

/// Checks a strategy against a position (nullptr means the empty board).
/// Mid-game strategies only validate against the exact position they were
/// built from.
PairingReport verify_pairing(const Board& board, const GameState* position, const PairingStrategy& s);
/// Same check against the strategy's own recorded position.
PairingReport verify_pairing(const PairingStrategy& s);

/// Pairs matched cells of X nodes 2j and 2j+1 for every survivor edge j.
/// Throws InvalidArgument unless m is X-perfect on the doubled graph of h.
PairingStrategy strategy_from_matching(const GameState& state, const Hypergraph& h, const Matching& m);

struct PregameResult {
  std::optional<PairingStrategy> strategy;
  int lines = 0;
  int cells = 0;
  int matching_size = 0;
  int required = 0;  // 2 * lines
  std::string reason;
};

/// Doubled-graph matching on the empty board; feasible iff X-perfect.
PregameResult generate_pregame_pairing(int n, int d);

/// Encases a valid planar pre-game pairing for n^2 in one more layer: the old
/// pairs move by +1 in both coordinates and each new border row/column gets
/// a pair on the two cells next to its midpoint.
PairingStrategy extend_pairing_planar(const PairingStrategy& s);

/// Breaker's pairing reply to Maker's just-played move: the Empty partner,
/// or otherwise the lowest-id Empty cell. Throws IllegalMove on a full board.
CellId breaker_response(const GameState& state, const PairingStrategy& s, CellId maker_move);

using MakerPolicy = std::function<CellId(const GameState&, std::mt19937_64&)>;

/// Uniform over Empty cells.
MakerPolicy random_maker();
/// Plays the listed cells in order when Empty, then falls back to random.
MakerPolicy scripted_maker(std::vector<CellId> cells);

struct GameRecord {
  std::vector<Move> moves;  // moves made during the playout only
  bool maker_won = false;
  /// Every in-scope line holds at least one Breaker cell at the end.
  bool all_lines_blocked = false;
};

/// Maker (policy) and Breaker (pairing replies) alternate from `state`,
/// Maker first, until the board fills or Maker completes a line.
GameRecord playout(GameState state, const PairingStrategy& s, const MakerPolicy& maker, std::uint64_t seed);

// Text formats.

/// Header "n d scope", a "position" ... "end" block for mid-game strategies,
/// one "lineId (a) (b)" line per pair and a final "free: (..) (..)" line.
std::string write_pairing(const PairingStrategy& s);
PairingStrategy read_pairing(std::istream& in);
PairingStrategy read_pairing_file(const std::string& path);

/// Numbered-grid fixture for d = 2: one row per text line, tokens separated
/// by whitespace. A number labels a pair (each label appears exactly twice),
/// '.' is an unpaired cell, 'X' / 'O' are Maker / Breaker cells. Each pair
/// is assigned the unique line through its two cells.
PairingStrategy parse_grid_pairing(std::istream& in);
PairingStrategy parse_grid_pairing_file(const std::string& path);

}  // namespace ttt
