#include "ttt/pairing.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace ttt {

const char* scope_name(PairingScope s) { return s == PairingScope::Pregame ? "pregame" : "midgame"; }

PairingStrategy::PairingStrategy(BoardPtr board, PairingScope scope, std::vector<Move> position,
                                 std::vector<CellPair> pairs, std::vector<CellId> free_cells)
    : board_(std::move(board)),
      scope_(scope),
      position_(std::move(position)),
      pairs_(std::move(pairs)),
      free_(std::move(free_cells)) {
  if (!board_) throw InvalidArgument("strategy needs a board");
  partner_.assign(static_cast<std::size_t>(board_->cell_count()), -1);
  pair_of_.assign(static_cast<std::size_t>(board_->cell_count()), -1);
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    const auto& p = pairs_[i];
    for (CellId c : {p.a, p.b})
      if (c < 0 || c >= board_->cell_count()) throw InvalidArgument("pair cell out of range");
    // Overlaps are left for verify_pairing to report; the first pair wins.
    if (pair_of_[p.a] < 0 && pair_of_[p.b] < 0 && p.a != p.b) {
      partner_[p.a] = p.b;
      partner_[p.b] = p.a;
      pair_of_[p.a] = pair_of_[p.b] = static_cast<std::int32_t>(i);
    }
  }
  std::sort(free_.begin(), free_.end());
}

GameState PairingStrategy::position_state() const {
  GameState s(board_);
  for (const auto& m : position_) s.place(m.player, m.cell);
  return s;
}

namespace {

bool same_occupancy(const GameState& a, const GameState& b) {
  if (a.board().cell_count() != b.board().cell_count()) return false;
  for (CellId c = 0; c < a.board().cell_count(); ++c)
    if (a.at(c) != b.at(c)) return false;
  return true;
}

PairingReport fail(PairingReport r, std::string why, LineId line = -1) {
  r.valid = false;
  r.reason = std::move(why);
  r.first_violated_line = line;
  return r;
}

}  // namespace

PairingReport verify_pairing(const Board& board, const GameState* position, const PairingStrategy& s) {
  PairingReport r;
  if (board.n() != s.board().n() || board.d() != s.board().d())
    return fail(r, "strategy was built for a different board");

  GameState recorded = s.position_state();
  if (s.scope() == PairingScope::Pregame && !s.position().empty())
    return fail(r, "pre-game strategy carries a position");
  const bool matches = position != nullptr ? same_occupancy(*position, recorded) : s.position().empty();
  if (!matches) return fail(r, "strategy was built for a different position");

  std::vector<char> in_scope(static_cast<std::size_t>(board.line_count()), 0);
  for (const auto& line : board.lines()) {
    in_scope[line.id] = s.scope() == PairingScope::Pregame || recorded.is_survivor(line.id);
    r.in_scope_lines += in_scope[line.id];
  }

  std::vector<char> used(static_cast<std::size_t>(board.cell_count()), 0);
  std::vector<int> pair_for_line(static_cast<std::size_t>(board.line_count()), -1);
  for (std::size_t i = 0; i < s.pairs().size(); ++i) {
    const auto& p = s.pairs()[i];
    const std::string label = "pair " + board.cell_of(p.a).to_string() + " " + board.cell_of(p.b).to_string();
    if (p.a == p.b) return fail(r, label + " repeats a cell");
    for (CellId c : {p.a, p.b}) {
      if (!recorded.is_empty(c)) return fail(r, label + " uses an occupied cell");
      if (used[c]) return fail(r, label + " overlaps another pair");
      used[c] = 1;
    }
    if (p.line < 0 || p.line >= board.line_count()) return fail(r, label + " has no valid line");
    const auto& cells = board.line(p.line).cells;
    const bool holds = std::find(cells.begin(), cells.end(), p.a) != cells.end() &&
                       std::find(cells.begin(), cells.end(), p.b) != cells.end();
    if (!holds) return fail(r, label + " is not on its assigned line", p.line);
    if (!in_scope[p.line]) return fail(r, label + " is assigned to a line outside the scope", p.line);
    if (pair_for_line[p.line] >= 0) return fail(r, "line " + std::to_string(p.line) + " has two pairs", p.line);
    pair_for_line[p.line] = static_cast<int>(i);
  }

  for (const auto& line : board.lines()) {
    if (!in_scope[line.id]) continue;
    if (pair_for_line[line.id] < 0) {
      std::string cells;
      for (CellId c : line.cells) cells += board.cell_of(c).to_string();
      return fail(r, "line " + std::to_string(line.id) + " " + cells + " holds no pair", line.id);
    }
    ++r.covered_lines;
  }

  std::vector<CellId> expected_free;
  for (CellId c = 0; c < board.cell_count(); ++c)
    if (recorded.is_empty(c) && !used[c]) expected_free.push_back(c);
  if (expected_free != s.free_cells()) return fail(r, "free-cell list does not match the unpaired Empty cells");

  r.valid = true;
  return r;
}

PairingReport verify_pairing(const PairingStrategy& s) {
  GameState position = s.position_state();
  return verify_pairing(s.board(), &position, s);
}

PairingStrategy strategy_from_matching(const GameState& state, const Hypergraph& h, const Matching& m) {
  DoubledBipartiteGraph g = build_doubled_graph(h);
  if (!is_x_perfect(g, m)) throw InvalidArgument("matching is not X-perfect; no pairing strategy");
  std::vector<CellPair> pairs;
  pairs.reserve(static_cast<std::size_t>(h.edge_count()));
  std::vector<char> paired(static_cast<std::size_t>(h.vertex_count), 0);
  for (int j = 0; j < h.edge_count(); ++j) {
    const int a = m.match_of_x[2 * j];
    const int b = m.match_of_x[2 * j + 1];
    paired[a] = paired[b] = 1;
    pairs.push_back({h.line_ids[j], h.vertex_cells[a], h.vertex_cells[b]});
  }
  std::vector<CellId> free_cells;
  for (int v = 0; v < h.vertex_count; ++v)
    if (!paired[v]) free_cells.push_back(h.vertex_cells[v]);
  return PairingStrategy(state.board_ptr(),
                         state.history().empty() ? PairingScope::Pregame : PairingScope::Midgame,
                         state.history(), std::move(pairs), std::move(free_cells));
}

PregameResult generate_pregame_pairing(int n, int d) {
  PregameResult r;
  GameState empty(enumerate_lines(n, d));
  r.lines = empty.board().line_count();
  r.cells = empty.board().cell_count();
  r.required = 2 * r.lines;
  Hypergraph h = empty.surviving_hypergraph();
  DoubledBipartiteGraph g = build_doubled_graph(h);
  Matching m = hopcroft_karp(g);
  r.matching_size = m.size;
  if (m.size != g.x_count) {
    r.reason = "maximum matching " + std::to_string(m.size) + " < " + std::to_string(g.x_count) +
               " (" + std::to_string(r.lines) + " lines need " + std::to_string(r.required) +
               " cells, board has " + std::to_string(r.cells) + ")";
    return r;
  }
  r.strategy = strategy_from_matching(empty, h, m);
  auto report = verify_pairing(*r.strategy);
  if (!report.valid) throw std::logic_error("generated pairing failed verification: " + report.reason);
  return r;
}

PairingStrategy extend_pairing_planar(const PairingStrategy& s) {
  if (s.board().d() != 2) throw InvalidArgument("planar extension needs a d = 2 pairing");
  if (s.scope() != PairingScope::Pregame) throw InvalidArgument("planar extension needs a pre-game pairing");
  auto report = verify_pairing(s);
  if (!report.valid) throw InvalidArgument("input pairing is invalid: " + report.reason);

  const Board& small = s.board();
  const int n = small.n() + 2;
  BoardPtr big = enumerate_lines(n, 2);
  auto shift = [&](CellId c) {
    Cell cell = small.cell_of(c);
    return big->id_of(Cell{cell[0] + 1, cell[1] + 1});
  };

  std::vector<CellPair> pairs;
  std::vector<char> used(static_cast<std::size_t>(big->cell_count()), 0);
  auto add = [&](CellId a, CellId b) {
    LineId l = big->line_through(a, b);
    if (l < 0) throw std::logic_error("extended pair is not collinear");
    pairs.push_back({l, a, b});
    used[a] = used[b] = 1;
  };
  for (const auto& p : s.pairs()) add(shift(p.a), shift(p.b));

  // Cells next to the midpoint of a border of length n: (h, h+2) for odd n,
  // (h, h+1) for even n, with h = n/2 rounded down.
  const int lo = n / 2;
  const int hi = n % 2 ? lo + 2 : lo + 1;
  add(big->id_of(Cell{1, lo}), big->id_of(Cell{1, hi}));
  add(big->id_of(Cell{n, lo}), big->id_of(Cell{n, hi}));
  add(big->id_of(Cell{lo, 1}), big->id_of(Cell{hi, 1}));
  add(big->id_of(Cell{lo, n}), big->id_of(Cell{hi, n}));

  std::vector<CellId> free_cells;
  for (CellId c = 0; c < big->cell_count(); ++c)
    if (!used[c]) free_cells.push_back(c);
  PairingStrategy out(big, PairingScope::Pregame, {}, std::move(pairs), std::move(free_cells));
  auto out_report = verify_pairing(out);
  if (!out_report.valid) throw std::logic_error("planar extension failed verification: " + out_report.reason);
  return out;
}

CellId breaker_response(const GameState& state, const PairingStrategy& s, CellId maker_move) {
  const CellId partner = s.partner_of(maker_move);
  if (partner >= 0 && state.is_empty(partner)) return partner;
  const CellId c = state.first_empty();
  if (c < 0) throw IllegalMove("board is full; Breaker has no move");
  return c;
}

MakerPolicy random_maker() {
  return [](const GameState& s, std::mt19937_64& rng) -> CellId {
    std::uniform_int_distribution<CellId> pick(0, s.board().cell_count() - 1);
    for (;;) {
      CellId c = pick(rng);
      if (s.is_empty(c)) return c;
    }
  };
}

MakerPolicy scripted_maker(std::vector<CellId> cells) {
  auto fallback = random_maker();
  return [cells = std::move(cells), fallback](const GameState& s, std::mt19937_64& rng) -> CellId {
    for (CellId c : cells)
      if (s.is_empty(c)) return c;
    return fallback(s, rng);
  };
}

GameRecord playout(GameState state, const PairingStrategy& s, const MakerPolicy& maker, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GameRecord rec;
  std::vector<char> in_scope(static_cast<std::size_t>(state.board().line_count()), 0);
  for (const auto& line : state.board().lines())
    in_scope[line.id] = s.scope() == PairingScope::Pregame || state.is_survivor(line.id);

  while (state.empty_count() > 0 && !state.maker_has_won()) {
    const CellId m = maker(state, rng);
    state.place(Player::Maker, m);
    rec.moves.push_back({Player::Maker, m});
    if (state.maker_has_won() || state.empty_count() == 0) break;
    const CellId b = breaker_response(state, s, m);
    state.place(Player::Breaker, b);
    rec.moves.push_back({Player::Breaker, b});
  }
  rec.maker_won = state.maker_has_won();
  rec.all_lines_blocked = true;
  for (const auto& line : state.board().lines())
    if (in_scope[line.id] && state.breaker_on(line.id) == 0) rec.all_lines_blocked = false;
  return rec;
}

std::string write_pairing(const PairingStrategy& s) {
  const Board& b = s.board();
  std::ostringstream os;
  os << b.n() << ' ' << b.d() << ' ' << scope_name(s.scope()) << '\n';
  if (s.scope() == PairingScope::Midgame) {
    os << "position\n" << s.position_state().dump() << "end\n";
  }
  for (const auto& p : s.pairs())
    os << p.line << ' ' << b.cell_of(p.a).to_string() << ' ' << b.cell_of(p.b).to_string() << '\n';
  os << "free:";
  for (CellId c : s.free_cells()) os << ' ' << b.cell_of(c).to_string();
  os << '\n';
  return os.str();
}

namespace {

std::vector<Cell> parse_cells(std::istream& ls) {
  std::vector<Cell> out;
  std::string tok;
  while (ls >> tok) out.push_back(Cell::parse(tok));
  return out;
}

}  // namespace

PairingStrategy read_pairing(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("empty pairing file");
  std::istringstream hs(line);
  int n = 0, d = 0;
  std::string scope_text;
  if (!(hs >> n >> d >> scope_text)) throw InvalidArgument("pairing header must be 'n d scope'");
  PairingScope scope;
  if (scope_text == "pregame") scope = PairingScope::Pregame;
  else if (scope_text == "midgame") scope = PairingScope::Midgame;
  else throw InvalidArgument("unknown pairing scope '" + scope_text + "'");

  BoardPtr board = enumerate_lines(n, d);
  std::vector<Move> position;
  std::vector<CellPair> pairs;
  std::vector<CellId> free_cells;
  bool saw_free = false;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line.rfind("position", 0) == 0) {
      std::string header;
      std::getline(in, header);
      std::istringstream ps(header);
      int pn = 0, pd = 0;
      if (!(ps >> pn >> pd) || pn != n || pd != d)
        throw InvalidArgument("position block header does not match the pairing board");
      GameState s(board);
      s.replay(in, "end");
      position = s.history();
      continue;
    }
    if (line.rfind("free:", 0) == 0) {
      std::istringstream ls(line.substr(5));
      for (const auto& c : parse_cells(ls)) free_cells.push_back(board->id_of(c));
      saw_free = true;
      continue;
    }
    std::istringstream ls(line);
    LineId id = 0;
    if (!(ls >> id)) throw InvalidArgument("malformed pair line '" + line + "'");
    auto cells = parse_cells(ls);
    if (cells.size() != 2) throw InvalidArgument("pair line needs two cells: '" + line + "'");
    pairs.push_back({id, board->id_of(cells[0]), board->id_of(cells[1])});
  }
  if (!saw_free) throw InvalidArgument("pairing file lacks a 'free:' line");
  return PairingStrategy(board, scope, std::move(position), std::move(pairs), std::move(free_cells));
}

PairingStrategy read_pairing_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  return read_pairing(in);
}

PairingStrategy parse_grid_pairing(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> row;
    std::string tok;
    while (ls >> tok) row.push_back(tok);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  const int n = static_cast<int>(rows.size());
  if (n < 2) throw InvalidArgument("grid fixture needs at least two rows");
  for (const auto& row : rows)
    if (static_cast<int>(row.size()) != n) throw InvalidArgument("grid fixture must be square");

  BoardPtr board = enumerate_lines(n, 2);
  std::vector<CellId> makers, breakers;
  std::map<std::string, std::vector<CellId>> labels;
  std::vector<CellId> free_cells;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::string& t = rows[i][j];
      const CellId c = board->id_of(Cell{i + 1, j + 1});
      if (t == "X") makers.push_back(c);
      else if (t == "O") breakers.push_back(c);
      else if (t == ".") free_cells.push_back(c);
      else labels[t].push_back(c);
    }
  }
  std::vector<Move> position;
  for (std::size_t k = 0; k < std::max(makers.size(), breakers.size()); ++k) {
    if (k < makers.size()) position.push_back({Player::Maker, makers[k]});
    if (k < breakers.size()) position.push_back({Player::Breaker, breakers[k]});
  }
  std::vector<std::pair<int, CellPair>> numbered;
  for (const auto& [label, cells] : labels) {
    if (cells.size() != 2) throw InvalidArgument("label '" + label + "' must appear exactly twice");
    int order = 0;
    try {
      order = std::stoi(label);
    } catch (const std::exception&) {
      order = static_cast<int>(numbered.size()) + 1000;
    }
    numbered.push_back({order, {board->line_through(cells[0], cells[1]), cells[0], cells[1]}});
  }
  std::stable_sort(numbered.begin(), numbered.end(), [](auto& a, auto& b) { return a.first < b.first; });
  std::vector<CellPair> pairs;
  for (auto& [order, p] : numbered) pairs.push_back(p);
  const PairingScope scope = position.empty() ? PairingScope::Pregame : PairingScope::Midgame;
  return PairingStrategy(board, scope, std::move(position), std::move(pairs), std::move(free_cells));
}

PairingStrategy parse_grid_pairing_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  return parse_grid_pairing(in);
}

}  // namespace ttt
