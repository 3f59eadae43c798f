#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ttt/game_state.hpp"
#include "ttt/matching.hpp"
#include "ttt/pairing.hpp"

namespace ttt {

/// A: Maker opens (4,4,4). B: Maker opens elsewhere and both of Maker's first
/// two moves are in the half cube x <= 4. Residual: case-B openings that no
/// symmetry brings into the half cube.
enum class CaseKind { A, B, Residual };

char case_letter(CaseKind k);
CaseKind parse_case_kind(const std::string& s);

/// Fixed cells and lines of the 7^3 openings, resolved to ids once.
class OpeningBook {
 public:
  explicit OpeningBook(BoardPtr board);

  const Board& board() const { return *board_; }
  const BoardPtr& board_ptr() const { return board_; }

  CellId center() const { return center_; }
  CellId c555() const { return c555_; }
  CellId c626() const { return c626_; }
  CellId c717() const { return c717_; }
  const std::array<CellId, 4>& corners() const { return corners_; }  // (7,1,1),(1,7,7),(7,7,1),(1,1,7)
  const std::array<LineId, 4>& superdiagonals() const { return superdiagonals_; }
  /// Cells of superdiagonal k (0=A .. 3=D) in increasing cell-id order.
  const std::vector<CellId>& superdiagonal_cells(int k) const { return diag_cells_[k]; }

  /// Number of survivors through c: lines a Breaker move on c would eliminate.
  static int newly_eliminated(const GameState& s, CellId c);

  /// Breaker's prescribed reply after Maker's k-th move, where k is derived
  /// from the history (Maker to have just moved, Breaker to reply). Positions
  /// must already be normalized. Returns -1 past the opening.
  CellId breaker_move(CaseKind kind, const GameState& s) const;

  /// Opening length in Maker moves: 4 for A, 3 for B/Residual.
  static int opening_rounds(CaseKind kind) { return kind == CaseKind::A ? 4 : 3; }
  /// Per-move elimination counts the opening must achieve.
  static std::vector<int> expected_eliminations(CaseKind kind);
  static int expected_survivors(CaseKind kind) { return kind == CaseKind::A ? 166 : 168; }
  static int expected_empty(CaseKind kind) { return kind == CaseKind::A ? 335 : 337; }

 private:
  CellId first_on_diagonal_eliminating(const GameState& s, int diag, int want) const;

  BoardPtr board_;
  CellId center_, c555_, c626_, c717_;
  std::array<CellId, 4> corners_;
  std::array<LineId, 4> superdiagonals_;
  std::array<std::vector<CellId>, 4> diag_cells_;
};

/// Breaker's case-A reply following Maker's latest move.
CellId breaker_opening_case_a(const OpeningBook& book, const GameState& s);
/// Breaker's case-B reply following Maker's latest move.
CellId breaker_opening_case_b(const OpeningBook& book, const GameState& s);

struct CaseSpec {
  CaseKind kind = CaseKind::A;
  std::uint64_t index = 0;
  std::vector<CellId> maker;  // Maker's opening moves in play order (A includes (4,4,4))
};

enum Anomaly : std::uint32_t {
  kIllegalSpec = 1u << 0,
  kEliminationMismatch = 1u << 1,
  kSurvivorMismatch = 1u << 2,
  kEmptyMismatch = 1u << 3,
  kEdgeSizeOutOfRange = 1u << 4,
  kImminentLoss = 1u << 5,
  kMatchingShort = 1u << 6,
  kOpeningUnavailable = 1u << 7,
};
std::string describe_anomalies(std::uint32_t mask);

struct CaseResult {
  CaseSpec spec;
  std::vector<CellId> breaker;
  std::vector<int> eliminated;  // new eliminations per Breaker move
  int survivors = 0;
  int empty = 0;
  int matching_size = -1;  // -1 when matching was skipped
  int min_edge = 0;
  int max_edge = 0;
  std::uint32_t anomalies = 0;
  bool ok = false;
};

/// Total number of specs and per-depth option counts.
std::uint64_t case_count(CaseKind kind);
std::vector<int> depth_options(CaseKind kind);

/// Ordered Maker opening pairs (m1, m2) with m1, m2 != (4,4,4) that no
/// cube symmetry maps into the half cube together.
const std::vector<std::pair<CellId, CellId>>& residual_pairs(const OpeningBook& book);

/// Worker-owned pipeline: replay, build survivor hypergraph, doubled graph,
/// Hopcroft-Karp. Reuses every buffer between calls.
class CaseRunner {
 public:
  explicit CaseRunner(const OpeningBook& book);

  /// Decodes a spec index into Maker moves (lexicographic by cell id at every
  /// depth). Throws InvalidArgument for an out-of-range index.
  CaseSpec decode(CaseKind kind, std::uint64_t index);

  /// Plays the opening for spec and, unless skip_matching, runs the matcher.
  CaseResult run(const CaseSpec& spec, bool skip_matching = false);

  /// Position after the last run().
  const GameState& state() const { return state_; }
  const Hypergraph& hypergraph() const { return hypergraph_; }
  const DoubledBipartiteGraph& graph() const { return graph_; }
  const Matching& matching() const { return matcher_.matching(); }
  int phases() const { return matcher_.phases(); }

  /// Mid-game pairing for the position after the last successful run().
  PairingStrategy strategy() const;

 private:
  void reset();
  CellId nth_empty(std::uint64_t k) const;

  const OpeningBook& book_;
  GameState state_;
  Hypergraph hypergraph_;
  DoubledBipartiteGraph graph_;
  HopcroftKarp matcher_;
};

CaseResult run_case(const OpeningBook& book, const CaseSpec& spec);

struct Tally {
  std::uint64_t processed = 0;
  std::uint64_t ok = 0;
  std::map<int, std::uint64_t> survivors, empty, eliminated, matching_size, min_edge, max_edge;
  std::vector<CaseResult> failures;  // itemized, sorted by index at merge

  void add(const CaseResult& r);
  void merge(const Tally& other);
};

enum class BatchMode { Full, Sample };

struct BatchOptions {
  CaseKind kind = CaseKind::A;
  BatchMode mode = BatchMode::Sample;
  std::uint64_t sample_count = 100000;
  std::uint64_t seed = 1;
  int shards = 1;
  bool count_only = false;
  std::string checkpoint_path;  // empty: no checkpointing
  std::string per_case_path;    // empty: no per-case CSV rows
  std::uint64_t checkpoint_every = 250000;
  /// Pause each shard after this many specs in this invocation (0: no
  /// limit). A paused run is resumed from its checkpoint.
  std::uint64_t stop_after = 0;
  bool verbose = false;
};

struct Ledger {
  CaseKind kind = CaseKind::A;
  BatchMode mode = BatchMode::Sample;
  bool count_only = false;
  std::uint64_t seed = 0;
  std::uint64_t sample_count = 0;
  int shards = 1;
  std::uint64_t total_cases = 0;  // size of the spec index space
  std::uint64_t work_items = 0;   // specs this run covers
  std::vector<int> depth_options;
  /// Observed (min, max) option count at each depth; count-only runs only.
  std::vector<std::pair<int, int>> observed_options;
  Tally tally;
  bool resumed = false;
  double wall_seconds = 0;
  std::string started_at, finished_at;

  bool complete() const { return tally.processed == work_items; }
  bool success() const { return tally.failures.empty() && complete(); }
};

/// Seeded uniform sample of `count` distinct indices from [0, range), sorted.
std::vector<std::uint64_t> sample_indices(std::uint64_t range, std::uint64_t count, std::uint64_t seed);

Ledger run_batch(const BatchOptions& opts);

/// Runs the Residual kind over its full index space.
Ledger residual_case_sweep(const BatchOptions& opts);

/// JSON summary; timing fields live under "timing" so the rest is a
/// deterministic function of the options.
std::string ledger_json(const std::vector<Ledger>& ledgers, const Board& board);
/// "specIndex,caseKind,m1,m2,m3,m4,survivors,matchingSize,ok"
std::string csv_header();
std::string csv_row(const CaseResult& r, const Board& board);

}  // namespace ttt
