#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ttt/game_state.hpp"

namespace ttt {

/// Exact value numerator / 2^scale. The scale is fixed per board (scale = n)
/// so every line danger 2^-u is an integer numerator 2^(n-u).
struct DyadicDanger {
  std::uint64_t numerator = 0;
  int scale = 0;

  double value() const;
  bool below_one() const { return numerator < (std::uint64_t{1} << scale); }
  /// Reduced fraction "p/q" (or "p" when q = 1).
  std::string fraction() const;

  friend bool operator==(const DyadicDanger&, const DyadicDanger&) = default;
  friend auto operator<=>(const DyadicDanger& a, const DyadicDanger& b) {
    return a.numerator <=> b.numerator;  // same scale assumed
  }
};

/// Sum over survivors of 2^-(Empty cells on the line).
DyadicDanger total_danger(const GameState& s);
/// Sum of 2^-u over survivors through c: by how much a Maker move on c raises
/// the total, and equally by how much a Breaker move on c lowers it.
DyadicDanger danger_through(const GameState& s, CellId c);

/// Highest danger_through over Empty cells, lowest cell id on ties.
/// Throw IllegalMove on a full board.
CellId greedy_maker(const GameState& s);
CellId greedy_breaker(const GameState& s);

enum class MakerMode { Greedy, Random };

struct SimulationOptions {
  MakerMode maker = MakerMode::Greedy;
  std::uint64_t seed = 1;
  /// Force Maker's first move to the board center (odd n) for random play.
  bool center_first = false;
  /// Number of Maker moves to play; 0 means until the board fills.
  int max_rounds = 0;
};

struct TraceEntry {
  int round = 0;  // Maker move index i (0 for the initial row)
  std::optional<Player> mover;
  CellId cell = -1;
  DyadicDanger danger;
};

struct DangerTrace {
  std::vector<TraceEntry> entries;      // one per move plus the initial row
  std::vector<DyadicDanger> after_maker;  // D_0, D_1, ... (D_i after Maker's i-th move)
  std::optional<int> first_below_one;   // smallest i with D_i < 1
  bool maker_won = false;
  bool consistent = true;  // incremental D_i matched a recount at every step
};

/// Alternating play from the empty board with a greedy Breaker.
DangerTrace simulate(int n, int d, const SimulationOptions& opts);
/// Continues from an existing position (Maker to move).
DangerTrace simulate_from(GameState state, const SimulationOptions& opts);

struct EsCondition {
  int delta = 0;
  std::int64_t lines = 0;
  std::int64_t threshold = 0;  // 2^n
  bool holds = false;
};

/// Max degree plus line count against 2^n.
EsCondition es_condition(int n, int d);

/// "i,mover,cell,numerator,scale,danger"
void write_trace_csv(std::ostream& out, const Board& board, const DangerTrace& t);
/// Two columns "i D_i" for the after-Maker series.
void write_trace_series(std::ostream& out, const DangerTrace& t);
/// Line chart of D_i with the D = 1 threshold marked.
void write_trace_svg(std::ostream& out, const DangerTrace& t, const std::string& title);

}  // namespace ttt
