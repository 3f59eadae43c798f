#include "ttt/board.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace ttt {

namespace {

constexpr std::int64_t kMaxCells = std::int64_t{1} << 24;

}  // namespace

std::string Cell::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(coords_[i]);
  }
  out += ')';
  return out;
}

Cell Cell::parse(std::string_view text) {
  auto fail = [&] { return InvalidArgument("malformed cell '" + std::string(text) + "'"); };
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  if (i >= text.size() || text[i] != '(') throw fail();
  ++i;
  std::vector<int> coords;
  for (;;) {
    skip_ws();
    std::size_t start = i;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == start || (i == start + 1 && !std::isdigit(static_cast<unsigned char>(text[start]))))
      throw fail();
    coords.push_back(std::stoi(std::string(text.substr(start, i - start))));
    skip_ws();
    if (i >= text.size()) throw fail();
    if (text[i] == ',') {
      ++i;
      continue;
    }
    if (text[i] == ')') {
      ++i;
      break;
    }
    throw fail();
  }
  skip_ws();
  if (i != text.size()) throw fail();
  return Cell(std::move(coords));
}

bool Direction::is_canonical() const {
  for (int v : deltas) {
    if (v != 0) return v == 1;
  }
  return false;
}

std::int64_t expected_line_count(int n, int d) {
  std::int64_t a = 1, b = 1;
  for (int i = 0; i < d; ++i) {
    a *= n + 2;
    b *= n;
  }
  return (a - b) / 2;
}

int max_degree_formula(int n, int d) {
  int p = 1;
  if (n % 2 == 1) {
    for (int i = 0; i < d; ++i) p *= 3;
    return (p - 1) / 2;
  }
  for (int i = 0; i < d; ++i) p *= 2;
  return p - 1;
}

int pairing_feasible_min_n(int d) {
  if (d < 1) throw InvalidArgument("dimension must be >= 1");
  for (int n = 2;; ++n) {
    // 2 n^d >= (n+2)^d, exact while it fits in 128 bits.
    if (d * std::log2(static_cast<double>(n + 2)) < 120.0) {
      __int128 lhs = 2, rhs = 1;
      for (int i = 0; i < d; ++i) {
        lhs *= n;
        rhs *= n + 2;
      }
      if (lhs >= rhs) return n;
    } else if (d * std::log1p(2.0L / n) <= std::log(2.0L)) {
      return n;
    }
  }
}

Board::Board(int n, int d) : n_(n), d_(d) {
  if (n < 2) throw InvalidArgument("side length must be >= 2");
  if (d < 1) throw InvalidArgument("dimension must be >= 1");
  std::int64_t cells = 1;
  for (int i = 0; i < d; ++i) {
    cells *= n;
    if (cells > kMaxCells) throw InvalidArgument("board too large");
  }
  cell_count_ = static_cast<int>(cells);
  strides_.assign(static_cast<std::size_t>(d), 1);
  for (int i = d - 2; i >= 0; --i) strides_[i] = strides_[i + 1] * n;

  int dir_count = 1;
  for (int i = 0; i < d; ++i) dir_count *= 3;

  std::vector<int> coords(static_cast<std::size_t>(d));
  for (int code = 0; code < dir_count; ++code) {
    Direction dir;
    dir.deltas.resize(static_cast<std::size_t>(d));
    for (int i = d - 1, c = code; i >= 0; --i, c /= 3) dir.deltas[i] = c % 3 - 1;
    if (!dir.is_canonical()) continue;

    int step = 0;
    for (int i = 0; i < d; ++i) step += dir.deltas[i] * strides_[i];

    for (CellId start = 0; start < cell_count_; ++start) {
      bool ok = true;
      for (int i = 0; i < d && ok; ++i) {
        int x = coord(start, i);
        if (dir.deltas[i] == 1) ok = x == 1;
        else if (dir.deltas[i] == -1) ok = x == n;
      }
      if (!ok) continue;
      Line line;
      line.id = static_cast<LineId>(lines_.size());
      line.direction = dir;
      line.cells.resize(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k) line.cells[k] = start + k * step;
      lines_.push_back(std::move(line));
    }
  }

  std::vector<std::int32_t> degree(static_cast<std::size_t>(cell_count_), 0);
  for (const auto& line : lines_)
    for (CellId c : line.cells) ++degree[c];
  inc_offsets_.assign(static_cast<std::size_t>(cell_count_) + 1, 0);
  for (int c = 0; c < cell_count_; ++c) inc_offsets_[c + 1] = inc_offsets_[c] + degree[c];
  inc_data_.resize(static_cast<std::size_t>(inc_offsets_.back()));
  std::vector<std::int32_t> fill(inc_offsets_.begin(), inc_offsets_.end() - 1);
  for (const auto& line : lines_)
    for (CellId c : line.cells) inc_data_[fill[c]++] = line.id;
}

bool Board::contains(const Cell& c) const {
  if (c.dim() != d_) return false;
  for (int x : c.coords())
    if (x < 1 || x > n_) return false;
  return true;
}

CellId Board::id_of(const Cell& c) const {
  if (!contains(c)) {
    throw InvalidArgument("cell " + c.to_string() + " is not on the " + std::to_string(n_) + "^" +
                          std::to_string(d_) + " board");
  }
  CellId id = 0;
  for (int i = 0; i < d_; ++i) id += (c[i] - 1) * strides_[i];
  return id;
}

Cell Board::cell_of(CellId id) const {
  if (id < 0 || id >= cell_count_) throw InvalidArgument("cell id out of range: " + std::to_string(id));
  std::vector<int> coords(static_cast<std::size_t>(d_));
  for (int i = 0; i < d_; ++i) coords[i] = coord(id, i);
  return Cell(std::move(coords));
}

int Board::coord(CellId id, int axis) const { return id / strides_[axis] % n_ + 1; }

int Board::max_degree() const {
  int best = 0;
  for (CellId c = 0; c < cell_count_; ++c) best = std::max(best, cell_degree(c));
  return best;
}

LineId Board::line_through(CellId a, CellId b) const {
  if (a == b) return -1;
  auto la = lines_through(a);
  auto lb = lines_through(b);
  for (LineId x : la)
    for (LineId y : lb)
      if (x == y) return x;
  return -1;
}

LineId Board::find_line(std::span<const CellId> cells) const {
  if (cells.size() != static_cast<std::size_t>(n_)) return -1;
  LineId id = line_through(cells[0], cells[1]);
  if (id < 0) return -1;
  std::vector<CellId> want(cells.begin(), cells.end());
  std::vector<CellId> have = line(id).cells;
  std::sort(want.begin(), want.end());
  std::sort(have.begin(), have.end());
  return want == have ? id : -1;
}

std::array<LineId, 4> Board::superdiagonals() const {
  if (d_ != 3) throw InvalidArgument("superdiagonals are defined for d = 3 only");
  const int n = n_;
  auto walk = [&](auto&& at) {
    std::vector<CellId> cells;
    for (int k = 1; k <= n; ++k) cells.push_back(id_of(at(k)));
    LineId id = find_line(cells);
    if (id < 0) throw std::logic_error("superdiagonal missing from line table");
    return id;
  };
  return {
      walk([&](int k) { return Cell{k, k, k}; }),
      walk([&](int k) { return Cell{k, n + 1 - k, k}; }),
      walk([&](int k) { return Cell{n + 1 - k, k, k}; }),
      walk([&](int k) { return Cell{n + 1 - k, n + 1 - k, k}; }),
  };
}

BoardPtr enumerate_lines(int n, int d) { return std::make_shared<const Board>(n, d); }

}  // namespace ttt
