#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ttt {

/// Raised when a caller hands the library a value outside its domain
/// (bad board size, malformed cell text, cell on the wrong board, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using CellId = std::int32_t;
using LineId = std::int32_t;

/// A cell of the n^d grid, stored as 1-based coordinates.
class Cell {
 public:
  Cell() = default;
  explicit Cell(std::vector<int> coords) : coords_(std::move(coords)) {}
  Cell(std::initializer_list<int> coords) : coords_(coords) {}

  int dim() const { return static_cast<int>(coords_.size()); }
  int operator[](int i) const { return coords_[static_cast<std::size_t>(i)]; }
  int& operator[](int i) { return coords_[static_cast<std::size_t>(i)]; }
  std::span<const int> coords() const { return coords_; }

  /// "(x1,...,xd)"
  std::string to_string() const;
  /// Parses "(x1,...,xd)"; whitespace around tokens is allowed.
  static Cell parse(std::string_view text);

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;

 private:
  std::vector<int> coords_;
};

/// Per-coordinate step of a line, each in {-1, 0, +1}. Canonical directions
/// have +1 as their first nonzero delta.
struct Direction {
  std::vector<int> deltas;

  bool is_canonical() const;
  friend bool operator==(const Direction&, const Direction&) = default;
};

struct Line {
  LineId id = 0;
  Direction direction;
  std::vector<CellId> cells;  // n cells in walking order
};

/// Immutable geometry of the n^d board: cells, winning lines and the
/// cell -> line incidence index. Line ids are assigned by direction
/// (lexicographic over {-1,0,+1}^d) and then by start-cell id.
class Board {
 public:
  Board(int n, int d);

  int n() const { return n_; }
  int d() const { return d_; }
  int cell_count() const { return cell_count_; }
  int line_count() const { return static_cast<int>(lines_.size()); }

  const std::vector<Line>& lines() const { return lines_; }
  const Line& line(LineId id) const { return lines_[static_cast<std::size_t>(id)]; }

  std::span<const LineId> lines_through(CellId cell) const {
    const auto b = inc_offsets_[static_cast<std::size_t>(cell)];
    const auto e = inc_offsets_[static_cast<std::size_t>(cell) + 1];
    return {inc_data_.data() + b, static_cast<std::size_t>(e - b)};
  }

  bool contains(const Cell& c) const;
  CellId id_of(const Cell& c) const;  // throws InvalidArgument
  Cell cell_of(CellId id) const;      // throws InvalidArgument
  int coord(CellId id, int axis) const;

  int cell_degree(CellId id) const { return static_cast<int>(lines_through(id).size()); }
  int cell_degree(const Cell& c) const { return cell_degree(id_of(c)); }
  int max_degree() const;

  /// Line containing both cells, or -1. Two distinct lines share at most one
  /// cell, so the answer is unique.
  LineId line_through(CellId a, CellId b) const;
  /// Line whose cell set equals the given set, or -1.
  LineId find_line(std::span<const CellId> cells) const;

  /// The four corner-to-corner lines (A)-(D) of a cube, d == 3 only:
  ///   A: (1,1,1)..(n,n,n)   B: (1,n,1)..(n,1,n)
  ///   C: (n,1,1)..(1,n,n)   D: (n,n,1)..(1,1,n)
  std::array<LineId, 4> superdiagonals() const;

 private:
  int n_;
  int d_;
  int cell_count_;
  std::vector<int> strides_;
  std::vector<Line> lines_;
  std::vector<std::int32_t> inc_offsets_;
  std::vector<LineId> inc_data_;
};

using BoardPtr = std::shared_ptr<const Board>;

/// Validated construction; the returned board is safe to share.
BoardPtr enumerate_lines(int n, int d);

/// ((n+2)^d - n^d) / 2, computed in 64-bit.
std::int64_t expected_line_count(int n, int d);

/// Largest degree allowed for a cell: (3^d-1)/2 for odd n, 2^d-1 for even n.
int max_degree_formula(int n, int d);

/// Smallest n with n^d >= 2 * line_count(n, d): the cell budget a pre-game
/// pairing needs.
int pairing_feasible_min_n(int d);

}  // namespace ttt
