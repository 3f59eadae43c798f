#include "ttt/game_state.hpp"

#include <algorithm>
#include <sstream>

namespace ttt {

char player_letter(Player p) { return p == Player::Maker ? 'M' : 'B'; }

void Hypergraph::clear() {
  vertex_count = 0;
  vertex_cells.clear();
  line_ids.clear();
  edge_offsets.assign(1, 0);
  edge_vertices.clear();
}

void Hypergraph::add_edge(std::span<const std::int32_t> vertices, LineId line) {
  edge_vertices.insert(edge_vertices.end(), vertices.begin(), vertices.end());
  edge_offsets.push_back(static_cast<std::int32_t>(edge_vertices.size()));
  if (line >= 0) line_ids.push_back(line);
}

Hypergraph Hypergraph::from_edges(int vertex_count, const std::vector<std::vector<int>>& edges) {
  Hypergraph h;
  h.vertex_count = vertex_count;
  for (const auto& e : edges) {
    std::vector<std::int32_t> v(e.begin(), e.end());
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    for (int x : v)
      if (x < 0 || x >= vertex_count) throw InvalidArgument("hypergraph vertex out of range");
    h.add_edge(v);
  }
  return h;
}

GameState::GameState(BoardPtr board) : board_(std::move(board)) {
  if (!board_) throw InvalidArgument("GameState needs a board");
  const auto lines = static_cast<std::size_t>(board_->line_count());
  occ_.assign(static_cast<std::size_t>(board_->cell_count()), Occupancy::Empty);
  maker_.assign(lines, 0);
  breaker_.assign(lines, 0);
  empty_.assign(lines, static_cast<std::int16_t>(board_->n()));
  survivors_ = board_->line_count();
  history_.reserve(occ_.size());
}

void GameState::place(Player p, CellId c) {
  if (c < 0 || c >= board_->cell_count()) throw InvalidArgument("cell id out of range");
  if (occ_[c] != Occupancy::Empty)
    throw IllegalMove("cell " + board_->cell_of(c).to_string() + " is already occupied");
  occ_[c] = static_cast<Occupancy>(p);
  const int n = board_->n();
  for (LineId l : board_->lines_through(c)) {
    --empty_[l];
    if (p == Player::Maker) {
      if (++maker_[l] == n) ++maker_complete_;
    } else if (breaker_[l]++ == 0) {
      --survivors_;
    }
  }
  history_.push_back({p, c});
}

void GameState::undo() {
  if (history_.empty()) throw IllegalMove("nothing to undo");
  const Move m = history_.back();
  history_.pop_back();
  occ_[m.cell] = Occupancy::Empty;
  const int n = board_->n();
  for (LineId l : board_->lines_through(m.cell)) {
    ++empty_[l];
    if (m.player == Player::Maker) {
      if (maker_[l]-- == n) --maker_complete_;
    } else if (--breaker_[l] == 0) {
      ++survivors_;
    }
  }
}

CellId GameState::first_empty() const {
  auto it = std::find(occ_.begin(), occ_.end(), Occupancy::Empty);
  return it == occ_.end() ? -1 : static_cast<CellId>(it - occ_.begin());
}

bool GameState::counters_consistent() const {
  int survivors = 0, complete = 0;
  for (const auto& line : board_->lines()) {
    int m = 0, b = 0, e = 0;
    for (CellId c : line.cells) {
      switch (occ_[c]) {
        case Occupancy::Maker: ++m; break;
        case Occupancy::Breaker: ++b; break;
        case Occupancy::Empty: ++e; break;
      }
    }
    if (m != maker_[line.id] || b != breaker_[line.id] || e != empty_[line.id]) return false;
    if (m + b + e != board_->n()) return false;
    if (b == 0) ++survivors;
    if (m == board_->n()) ++complete;
  }
  const auto occupied = std::count_if(occ_.begin(), occ_.end(), [](Occupancy o) { return o != Occupancy::Empty; });
  return survivors == survivors_ && complete == maker_complete_ &&
         occupied == static_cast<std::ptrdiff_t>(history_.size());
}

Hypergraph GameState::surviving_hypergraph() const {
  Hypergraph h;
  surviving_hypergraph(h);
  return h;
}

void GameState::surviving_hypergraph(Hypergraph& out) const {
  out.clear();
  std::vector<std::int32_t> dense(occ_.size(), -1);
  for (CellId c = 0; c < board_->cell_count(); ++c) {
    if (occ_[c] == Occupancy::Empty) {
      dense[c] = out.vertex_count++;
      out.vertex_cells.push_back(c);
    }
  }
  out.line_ids.reserve(static_cast<std::size_t>(survivors_));
  for (const auto& line : board_->lines()) {
    if (breaker_[line.id] != 0) continue;
    for (CellId c : line.cells)
      if (dense[c] >= 0) out.edge_vertices.push_back(dense[c]);
    auto begin = out.edge_vertices.begin() + out.edge_offsets.back();
    std::sort(begin, out.edge_vertices.end());
    out.edge_offsets.push_back(static_cast<std::int32_t>(out.edge_vertices.size()));
    out.line_ids.push_back(line.id);
  }
}

std::string GameState::dump() const {
  std::ostringstream os;
  os << board_->n() << ' ' << board_->d() << '\n';
  for (const auto& m : history_)
    os << player_letter(m.player) << ' ' << board_->cell_of(m.cell).to_string() << '\n';
  return os.str();
}

void GameState::replay(std::istream& in, const std::string& stop_token) {
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) break;
    line = line.substr(first);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!stop_token.empty() && line == stop_token) break;
    if (line.size() < 3 || line[1] != ' ' || (line[0] != 'M' && line[0] != 'B'))
      throw InvalidArgument("malformed move line '" + line + "'");
    place(line[0] == 'M' ? Player::Maker : Player::Breaker, Cell::parse(line.substr(2)));
  }
}

GameState GameState::parse(std::istream& in) {
  std::string header;
  while (std::getline(in, header) && header.find_first_not_of(" \t\r") == std::string::npos) {
  }
  std::istringstream hs(header);
  int n = 0, d = 0;
  if (!(hs >> n >> d)) throw InvalidArgument("position header must be 'n d'");
  GameState s(enumerate_lines(n, d));
  s.replay(in);
  return s;
}

GameState GameState::parse(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

}  // namespace ttt
