#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ttt/board.hpp"

namespace ttt {

/// Signed coordinate permutation of the n^d cube:
///   out[j] = flips[j] ? n + 1 - in[perm[j]] : in[perm[j]]
class Symmetry {
 public:
  Symmetry() = default;
  Symmetry(std::vector<int> perm, std::vector<bool> flips);

  static Symmetry identity(int d);
  /// All 2^d * d! elements; permutations in lexicographic order, flip masks
  /// counted in binary (bit j flips output coordinate j). Identity comes first.
  static std::vector<Symmetry> all(int d);

  int dim() const { return static_cast<int>(perm_.size()); }
  const std::vector<int>& perm() const { return perm_; }
  const std::vector<bool>& flips() const { return flips_; }
  bool is_identity() const;

  Cell apply(const Cell& cell, int n) const;
  CellId apply(const Board& board, CellId cell) const;

  /// (*this).then(other) is "apply *this, then other".
  Symmetry then(const Symmetry& other) const;
  Symmetry inverse() const;

  /// Image of every line id; a permutation of [0, line_count).
  std::vector<LineId> line_map(const Board& board) const;

  std::string to_string() const;

  friend bool operator==(const Symmetry&, const Symmetry&) = default;

 private:
  std::vector<int> perm_;
  std::vector<bool> flips_;
};

Cell apply_symmetry(const Symmetry& g, const Cell& cell, int n);

// Normalizations used by the 7^3 casework. They assume a 7x7x7 board.

struct CaseANormalization {
  Symmetry symmetry;  // pure coordinate permutation, fixes (4,4,4) and (5,5,5)
  Cell image;         // first coordinate <= second coordinate
};

/// Maps Maker's second move (after Maker (4,4,4), Breaker (5,5,5)) to x <= y.
/// Throws InvalidArgument for the two occupied opening cells.
CaseANormalization normalize_case_a(const Cell& m2);

struct CaseBNormalization {
  std::optional<Symmetry> symmetry;  // empty when no symmetry exists
  Cell image1;
  Cell image2;
  std::string failure;  // set when symmetry is empty
};

/// Finds the first symmetry (in Symmetry::all order) that puts both of
/// Maker's first two moves in the half cube x <= 4. All 48 symmetries fix
/// (4,4,4). When every axis separates the two cells strictly across 4 no
/// symmetry exists and a failure report is returned instead.
CaseBNormalization normalize_case_b(const Cell& m1, const Cell& m2);

/// Number of distinct normalized Maker second moves in case A (194 on 7^3).
int case_a_second_move_options();

}  // namespace ttt
