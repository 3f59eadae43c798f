#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ttt/board.hpp"

namespace ttt {

enum class Occupancy : std::uint8_t { Empty = 0, Maker = 1, Breaker = 2 };
enum class Player : std::uint8_t { Maker = 1, Breaker = 2 };

char player_letter(Player p);  // 'M' / 'B'

/// Raised by GameState when a move is illegal (occupied cell, nothing to undo).
class IllegalMove : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Move {
  Player player;
  CellId cell;
  friend bool operator==(const Move&, const Move&) = default;
};

/// Survivor hypergraph of a position, with dense vertex ids.
///
/// Vertices are the Empty cells in increasing cell-id order; edge j lists the
/// dense ids of the Empty cells of survivor line_ids[j], ascending. Abstract
/// hypergraphs (tests, bigamy oracles) leave vertex_cells and line_ids empty.
struct Hypergraph {
  int vertex_count = 0;
  std::vector<CellId> vertex_cells;
  std::vector<LineId> line_ids;
  std::vector<std::int32_t> edge_offsets{0};
  std::vector<std::int32_t> edge_vertices;

  int edge_count() const { return static_cast<int>(edge_offsets.size()) - 1; }
  std::span<const std::int32_t> edge(int j) const {
    return {edge_vertices.data() + edge_offsets[j],
            static_cast<std::size_t>(edge_offsets[j + 1] - edge_offsets[j])};
  }
  int edge_size(int j) const { return edge_offsets[j + 1] - edge_offsets[j]; }

  void clear();
  void add_edge(std::span<const std::int32_t> vertices, LineId line = -1);

  /// Builds an abstract hypergraph; each edge is sorted and deduplicated.
  static Hypergraph from_edges(int vertex_count, const std::vector<std::vector<int>>& edges);
};

/// Mutable Maker-Breaker position with incremental per-line counters.
class GameState {
 public:
  explicit GameState(BoardPtr board);

  const Board& board() const { return *board_; }
  const BoardPtr& board_ptr() const { return board_; }

  Occupancy at(CellId c) const { return occ_[static_cast<std::size_t>(c)]; }
  Occupancy at(const Cell& c) const { return at(board_->id_of(c)); }
  bool is_empty(CellId c) const { return at(c) == Occupancy::Empty; }

  void place(Player p, CellId c);
  void place(Player p, const Cell& c) { place(p, board_->id_of(c)); }
  void undo();

  const std::vector<Move>& history() const { return history_; }
  int empty_count() const { return board_->cell_count() - static_cast<int>(history_.size()); }

  int maker_on(LineId l) const { return maker_[static_cast<std::size_t>(l)]; }
  int breaker_on(LineId l) const { return breaker_[static_cast<std::size_t>(l)]; }
  int empty_on(LineId l) const { return empty_[static_cast<std::size_t>(l)]; }
  bool is_survivor(LineId l) const { return breaker_on(l) == 0; }

  int survivors_count() const { return survivors_; }
  bool maker_has_won() const { return maker_complete_ > 0; }

  /// Lowest-id Empty cell, or -1 when the board is full.
  CellId first_empty() const;

  /// Recounts every line from the occupancy map and compares.
  bool counters_consistent() const;

  Hypergraph surviving_hypergraph() const;
  /// Same as above, reusing out's storage.
  void surviving_hypergraph(Hypergraph& out) const;

  /// "n d" then one "M (..)" / "B (..)" line per move.
  std::string dump() const;
  static GameState parse(std::istream& in);
  static GameState parse(const std::string& text);
  /// Replays dump lines onto this (empty or partial) state until blank/EOF or
  /// a line equal to stop_token.
  void replay(std::istream& in, const std::string& stop_token = {});

 private:
  BoardPtr board_;
  std::vector<Occupancy> occ_;
  std::vector<Move> history_;
  std::vector<std::int16_t> maker_;
  std::vector<std::int16_t> breaker_;
  std::vector<std::int16_t> empty_;
  int survivors_ = 0;
  int maker_complete_ = 0;
};

}  // namespace ttt
