#include "ttt/symmetry.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ttt {

namespace {

const Cell kCenter{4, 4, 4};
const Cell kBreakerFirst{5, 5, 5};

void check_cube7(const Cell& c) {
  if (c.dim() != 3) throw InvalidArgument("expected a 7^3 cell, got " + c.to_string());
  for (int x : c.coords())
    if (x < 1 || x > 7) throw InvalidArgument("expected a 7^3 cell, got " + c.to_string());
}

}  // namespace

Symmetry::Symmetry(std::vector<int> perm, std::vector<bool> flips)
    : perm_(std::move(perm)), flips_(std::move(flips)) {
  if (perm_.size() != flips_.size()) throw InvalidArgument("symmetry perm/flip size mismatch");
  std::vector<int> sorted = perm_;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != static_cast<int>(i)) throw InvalidArgument("symmetry perm is not a permutation");
}

Symmetry Symmetry::identity(int d) {
  std::vector<int> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), 0);
  return Symmetry(std::move(perm), std::vector<bool>(static_cast<std::size_t>(d), false));
}

std::vector<Symmetry> Symmetry::all(int d) {
  std::vector<Symmetry> out;
  std::vector<int> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
      std::vector<bool> flips(static_cast<std::size_t>(d));
      for (int j = 0; j < d; ++j) flips[j] = (mask >> j) & 1u;
      out.emplace_back(perm, std::move(flips));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

bool Symmetry::is_identity() const { return *this == identity(dim()); }

Cell Symmetry::apply(const Cell& cell, int n) const {
  if (cell.dim() != dim()) throw InvalidArgument("symmetry/cell dimension mismatch");
  std::vector<int> out(perm_.size());
  for (std::size_t j = 0; j < perm_.size(); ++j) {
    int x = cell[perm_[j]];
    out[j] = flips_[j] ? n + 1 - x : x;
  }
  return Cell(std::move(out));
}

CellId Symmetry::apply(const Board& board, CellId cell) const {
  return board.id_of(apply(board.cell_of(cell), board.n()));
}

Symmetry Symmetry::then(const Symmetry& other) const {
  if (other.dim() != dim()) throw InvalidArgument("symmetry dimension mismatch");
  // other(this(x))[j] = F_o[j](this(x)[po[j]]) = F_o[j] ^ F_t[po[j]] applied to x[pt[po[j]]]
  std::vector<int> perm(perm_.size());
  std::vector<bool> flips(perm_.size());
  for (std::size_t j = 0; j < perm_.size(); ++j) {
    int k = other.perm_[j];
    perm[j] = perm_[k];
    flips[j] = other.flips_[j] != flips_[k];
  }
  return Symmetry(std::move(perm), std::move(flips));
}

Symmetry Symmetry::inverse() const {
  std::vector<int> perm(perm_.size());
  std::vector<bool> flips(perm_.size());
  for (std::size_t j = 0; j < perm_.size(); ++j) {
    perm[perm_[j]] = static_cast<int>(j);
    flips[perm_[j]] = flips_[j];
  }
  return Symmetry(std::move(perm), std::move(flips));
}

std::vector<LineId> Symmetry::line_map(const Board& board) const {
  std::vector<LineId> out(static_cast<std::size_t>(board.line_count()), -1);
  std::vector<CellId> image;
  for (const auto& line : board.lines()) {
    image.clear();
    for (CellId c : line.cells) image.push_back(apply(board, c));
    out[line.id] = board.find_line(image);
  }
  return out;
}

std::string Symmetry::to_string() const {
  std::string s = "[";
  for (std::size_t j = 0; j < perm_.size(); ++j) {
    if (j) s += ',';
    if (flips_[j]) s += '~';
    s += std::to_string(perm_[j] + 1);
  }
  return s + "]";
}

Cell apply_symmetry(const Symmetry& g, const Cell& cell, int n) { return g.apply(cell, n); }

CaseANormalization normalize_case_a(const Cell& m2) {
  check_cube7(m2);
  if (m2 == kCenter || m2 == kBreakerFirst)
    throw InvalidArgument("Maker's second move " + m2.to_string() + " is already occupied");
  if (m2[0] <= m2[1]) return {Symmetry::identity(3), m2};
  Symmetry swap({1, 0, 2}, {false, false, false});
  return {swap, swap.apply(m2, 7)};
}

CaseBNormalization normalize_case_b(const Cell& m1, const Cell& m2) {
  check_cube7(m1);
  check_cube7(m2);
  if (m1 == kCenter || m2 == kCenter || m1 == m2)
    throw InvalidArgument("Maker's opening cells must be distinct and differ from (4,4,4)");
  for (const auto& g : Symmetry::all(3)) {
    Cell a = g.apply(m1, 7);
    Cell b = g.apply(m2, 7);
    if (a[0] <= 4 && b[0] <= 4) return {g, std::move(a), std::move(b), {}};
  }
  return {std::nullopt, m1, m2,
          "no symmetry places both " + m1.to_string() + " and " + m2.to_string() +
              " in the half cube: every axis separates them across 4"};
}

int case_a_second_move_options() {
  int count = 0;
  for (int x = 1; x <= 7; ++x)
    for (int y = x; y <= 7; ++y)
      for (int z = 1; z <= 7; ++z) {
        Cell c{x, y, z};
        if (c != kCenter && c != kBreakerFirst) ++count;
      }
  return count;
}

}  // namespace ttt
