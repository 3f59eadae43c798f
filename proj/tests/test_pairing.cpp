#include "doctest.h"

#include <set>
#include <sstream>

#include "ttt/matching.hpp"
#include "ttt/pairing.hpp"

using namespace ttt;

namespace {

std::string fixture(const std::string& name) { return std::string(TTT_DATA_DIR) + "/pairings/" + name; }

void check_blocked(const GameState& end) {
  for (LineId l = 0; l < end.board().line_count(); ++l) CHECK(end.breaker_on(l) >= 1);
}

}  // namespace

TEST_CASE("planar fixtures verify") {
  const std::pair<const char*, int> cases[] = {{"planar_5x5.txt", 12}, {"planar_6x6.txt", 14}, {"planar_7x7.txt", 16}};
  for (auto [name, lines] : cases) {
    CAPTURE(name);
    auto s = parse_grid_pairing_file(fixture(name));
    CHECK(s.scope() == PairingScope::Pregame);
    auto r = verify_pairing(s);
    CHECK(r.valid);
    CHECK(r.covered_lines == lines);
    CHECK(r.in_scope_lines == lines);
    CHECK(s.pairs().size() == static_cast<std::size_t>(lines));
  }
  CHECK(parse_grid_pairing_file(fixture("planar_5x5.txt")).free_cells().size() == 1);
}

TEST_CASE("the 7x7 fixture encases the 5x5 one") {
  auto small = parse_grid_pairing_file(fixture("planar_5x5.txt"));
  auto big = parse_grid_pairing_file(fixture("planar_7x7.txt"));
  std::set<std::pair<Cell, Cell>> shifted, inner;
  auto shift = [](Cell c) {
    for (int i = 0; i < c.dim(); ++i) c[i] += 1;
    return c;
  };
  for (const auto& p : small.pairs()) shifted.insert({shift(small.board().cell_of(p.a)), shift(small.board().cell_of(p.b))});
  for (const auto& p : big.pairs()) {
    Cell a = big.board().cell_of(p.a), b = big.board().cell_of(p.b);
    bool border = false;
    for (const Cell& c : {a, b})
      for (int i = 0; i < 2; ++i) border = border || c[i] == 1 || c[i] == 7;
    if (!border) inner.insert({a, b});
  }
  CHECK(inner == shifted);
}

TEST_CASE("4x4 mid-game fixtures verify against their positions") {
  for (const char* name : {"pos4x4_corner.txt", "pos4x4_edge.txt", "pos4x4_interior.txt", "worked_4x4.txt"}) {
    CAPTURE(name);
    auto s = parse_grid_pairing_file(fixture(name));
    CHECK(s.scope() == PairingScope::Midgame);
    REQUIRE(s.position().size() == 2);
    CHECK(s.board().cell_of(s.position()[1].cell) == (std::string(name) == "worked_4x4.txt" ? Cell{3, 3} : Cell{2, 3}));
    auto pos = s.position_state();
    CHECK(pos.survivors_count() == 7);
    auto r = verify_pairing(s.board(), &pos, s);
    CHECK(r.valid);
    CHECK(r.covered_lines == 7);
    CHECK(s.pairs().size() == 7);
    CHECK(s.free_cells().empty());
  }
}

TEST_CASE("verification failures") {
  auto s = parse_grid_pairing_file(fixture("planar_6x6.txt"));
  // Drop pair 13.
  std::vector<CellPair> pairs(s.pairs().begin(), s.pairs().end());
  const CellPair removed = pairs[12];
  pairs.erase(pairs.begin() + 12);
  std::vector<CellId> free = s.free_cells();
  free.push_back(removed.a);
  free.push_back(removed.b);
  std::sort(free.begin(), free.end());
  PairingStrategy broken(s.board_ptr(), PairingScope::Pregame, {}, pairs, free);
  auto r = verify_pairing(broken);
  CHECK_FALSE(r.valid);
  CHECK(r.first_violated_line == removed.line);

  // A mid-game strategy refuses a different position.
  auto mid = parse_grid_pairing_file(fixture("pos4x4_corner.txt"));
  GameState other(mid.board_ptr());
  other.place(Player::Maker, Cell{1, 1});
  other.place(Player::Breaker, Cell{2, 3});
  CHECK_FALSE(verify_pairing(mid.board(), &other, mid).valid);
  CHECK_FALSE(verify_pairing(mid.board(), nullptr, mid).valid);

  // Pair on a cell of the pair that shares no line.
  auto b = enumerate_lines(5, 2);
  PairingStrategy nonsense(b, PairingScope::Pregame, {}, {{0, b->id_of({2, 2}), b->id_of({3, 4})}}, {});
  CHECK_FALSE(verify_pairing(nonsense).valid);
}

TEST_CASE("planar extension") {
  auto s5 = parse_grid_pairing_file(fixture("planar_5x5.txt"));
  auto s7 = extend_pairing_planar(s5);
  CHECK(s7.board().n() == 7);
  CHECK(verify_pairing(s7).valid);
  CHECK(s7.pairs().size() == 16);
  auto s9 = extend_pairing_planar(s7);
  CHECK(verify_pairing(s9).valid);
  CHECK(s9.pairs().size() == 20);
  auto s8 = extend_pairing_planar(parse_grid_pairing_file(fixture("planar_6x6.txt")));
  CHECK(verify_pairing(s8).valid);
  CHECK(verify_pairing(extend_pairing_planar(s8)).valid);
  CHECK_THROWS_AS(extend_pairing_planar(parse_grid_pairing_file(fixture("pos4x4_edge.txt"))), InvalidArgument);
  // New row pair sits next to the midpoint of the top row.
  CHECK(s7.partner_of(s7.board().id_of({1, 3})) == s7.board().id_of({1, 5}));
  CHECK(s8.partner_of(s8.board().id_of({1, 4})) == s8.board().id_of({1, 5}));
}

TEST_CASE("pre-game generation") {
  auto r8 = generate_pregame_pairing(8, 3);
  REQUIRE(r8.strategy);
  CHECK(r8.matching_size == 488);
  CHECK(r8.strategy->pairs().size() == 244);
  CHECK(verify_pairing(*r8.strategy).valid);
  auto r9 = generate_pregame_pairing(9, 3);
  REQUIRE(r9.strategy);
  CHECK(r9.matching_size == 602);
  auto r7 = generate_pregame_pairing(7, 3);
  CHECK_FALSE(r7.strategy);
  CHECK(r7.required == 386);
  CHECK(r7.matching_size < 386);
  CHECK_FALSE(r7.reason.empty());
  CHECK(generate_pregame_pairing(5, 2).strategy);
  CHECK_FALSE(generate_pregame_pairing(4, 2).strategy);
}

TEST_CASE("strategy from the worked 4x4 matching") {
  GameState s(enumerate_lines(4, 2));
  s.place(Player::Maker, Cell{2, 2});
  s.place(Player::Breaker, Cell{3, 3});
  auto h = s.surviving_hypergraph();
  auto m = hopcroft_karp(build_doubled_graph(h));
  auto strat = strategy_from_matching(s, h, m);
  CHECK(strat.pairs().size() == 7);
  CHECK(verify_pairing(s.board(), &s, strat).valid);
  Matching partial = m;
  partial.match_of_x[0] = Matching::kNone;
  partial.size -= 1;
  CHECK_THROWS_AS(strategy_from_matching(s, h, partial), InvalidArgument);
}

TEST_CASE("breaker response rules") {
  auto s = parse_grid_pairing_file(fixture("planar_5x5.txt"));
  const Board& b = s.board();
  GameState g(s.board_ptr());
  const CellId a = b.id_of({1, 1}), partner = b.id_of({5, 5});  // pair 2
  g.place(Player::Maker, a);
  CHECK(breaker_response(g, s, a) == partner);
  // Free cell: lowest Empty id.
  GameState f(s.board_ptr());
  f.place(Player::Maker, b.id_of({3, 3}));
  CHECK(breaker_response(f, s, b.id_of({3, 3})) == 0);
  // Partner already Breaker's.
  GameState p(s.board_ptr());
  p.place(Player::Maker, b.id_of({2, 2}));
  p.place(Player::Breaker, a);
  p.place(Player::Maker, partner);
  CHECK(breaker_response(p, s, partner) == b.id_of({1, 2}));

  GameState full(enumerate_lines(2, 1));
  full.place(Player::Maker, 0);
  full.place(Player::Breaker, 1);
  PairingStrategy tiny(full.board_ptr(), PairingScope::Pregame, {}, {}, {0, 1});
  CHECK_THROWS_AS(breaker_response(full, tiny, 0), IllegalMove);
}

TEST_CASE("soundness playouts") {
  auto s = parse_grid_pairing_file(fixture("planar_6x6.txt"));
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    GameRecord r = playout(GameState(s.board_ptr()), s, random_maker(), seed);
    REQUIRE_FALSE(r.maker_won);
    CHECK(r.all_lines_blocked);
    // Breaker never answers with an occupied cell or Maker's own move.
    GameState replay(s.board_ptr());
    for (const Move& m : r.moves) {
      REQUIRE(replay.is_empty(m.cell));
      replay.place(m.player, m.cell);
    }
    if (seed % 100 == 0) check_blocked(replay);
  }
  for (const char* name : {"pos4x4_corner.txt", "pos4x4_edge.txt", "pos4x4_interior.txt"}) {
    auto mid = parse_grid_pairing_file(fixture(name));
    for (std::uint64_t seed = 0; seed < 200; ++seed)
      REQUIRE_FALSE(playout(mid.position_state(), mid, random_maker(), seed).maker_won);
  }
}

TEST_CASE("corrupted pairing loses to a targeted script") {
  auto s = parse_grid_pairing_file(fixture("planar_6x6.txt"));
  std::vector<CellPair> pairs(s.pairs().begin(), s.pairs().end());
  // Pair 6 guards the bottom row, whose cells the fallback never reaches.
  const CellPair removed = pairs[5];
  pairs.erase(pairs.begin() + 5);
  PairingStrategy broken(s.board_ptr(), PairingScope::Pregame, {}, pairs, {});
  const auto& line = s.board().line(removed.line).cells;
  GameRecord r = playout(GameState(s.board_ptr()), broken, scripted_maker(line), 1);
  CHECK(r.maker_won);
}

TEST_CASE("pairing text format round trip") {
  auto s = generate_pregame_pairing(8, 3).strategy.value();
  std::istringstream in(write_pairing(s));
  auto back = read_pairing(in);
  CHECK(back.pairs().size() == s.pairs().size());
  for (std::size_t i = 0; i < s.pairs().size(); ++i) {
    CHECK(back.pairs()[i].a == s.pairs()[i].a);
    CHECK(back.pairs()[i].b == s.pairs()[i].b);
    CHECK(back.pairs()[i].line == s.pairs()[i].line);
  }
  CHECK(back.free_cells() == s.free_cells());

  auto mid = parse_grid_pairing_file(fixture("worked_4x4.txt"));
  const std::string text = write_pairing(mid);
  CHECK(text.rfind("4 2 midgame\n", 0) == 0);
  std::istringstream in2(text);
  auto mid2 = read_pairing(in2);
  CHECK(mid2.position() == mid.position());
  auto pos = mid2.position_state();
  CHECK(verify_pairing(mid2.board(), &pos, mid2).valid);
  CHECK(write_pairing(mid2) == text);

  std::istringstream junk("4 2 sideways\n");
  CHECK_THROWS(read_pairing(junk));
}
