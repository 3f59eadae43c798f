#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "ttt/prover.hpp"

using namespace ttt;

namespace {

const OpeningBook& book() {
  static OpeningBook b(enumerate_lines(7, 3));
  return b;
}

CellId id(const Cell& c) { return book().board().id_of(c); }

std::string without_timing(const std::string& js) {
  auto j = nlohmann::json::parse(js);
  j.erase("timing");
  return j.dump();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("ttt_test_" + name)).string();
}

}  // namespace

TEST_CASE("opening book cells") {
  CHECK(book().center() == id({4, 4, 4}));
  CHECK(book().corners()[0] == id({7, 1, 1}));
  CHECK(OpeningBook::opening_rounds(CaseKind::A) == 4);
  CHECK(OpeningBook::opening_rounds(CaseKind::B) == 3);
  CHECK(OpeningBook::expected_survivors(CaseKind::A) == 166);
  CHECK(OpeningBook::expected_survivors(CaseKind::B) == 168);
  CHECK(OpeningBook::expected_empty(CaseKind::A) == 335);
  CHECK(OpeningBook::expected_empty(CaseKind::B) == 337);
  CHECK_THROWS_AS(OpeningBook(enumerate_lines(6, 3)), InvalidArgument);
}

TEST_CASE("case A replies") {
  GameState s(book().board_ptr());
  s.place(Player::Maker, Cell{4, 4, 4});
  CHECK(breaker_opening_case_a(book(), s) == id({5, 5, 5}));
  CHECK(OpeningBook::newly_eliminated(s, id({5, 5, 5})) == 7);
  s.place(Player::Breaker, Cell{5, 5, 5});
  s.place(Player::Maker, Cell{1, 7, 7});
  CHECK(breaker_opening_case_a(book(), s) == id({6, 2, 6}));
  s.place(Player::Breaker, Cell{6, 2, 6});
  s.place(Player::Maker, Cell{7, 1, 1});
  // (7,1,1) is taken, so the next corner.
  CHECK(breaker_opening_case_a(book(), s) == id({7, 7, 1}));
  s.place(Player::Breaker, Cell{7, 7, 1});
  s.place(Player::Maker, Cell{3, 3, 3});
  const CellId fourth = breaker_opening_case_a(book(), s);
  REQUIRE(fourth >= 0);
  // (7,7,1) lies on D, so the fourth reply is on C with six new eliminations.
  const auto& c_line = book().board().line(book().superdiagonals()[2]).cells;
  CHECK(std::find(c_line.begin(), c_line.end(), fourth) != c_line.end());
  CHECK(OpeningBook::newly_eliminated(s, fourth) == 6);
  s.place(Player::Breaker, fourth);
  CHECK(breaker_opening_case_a(book(), s) == -1);  // opening over
}

TEST_CASE("case B replies") {
  GameState s(book().board_ptr());
  s.place(Player::Maker, Cell{1, 2, 3});
  CHECK(breaker_opening_case_b(book(), s) == id({4, 4, 4}));
  s.place(Player::Breaker, Cell{4, 4, 4});
  s.place(Player::Maker, Cell{6, 2, 6});
  CHECK(breaker_opening_case_b(book(), s) == id({5, 5, 5}));
  s.place(Player::Breaker, Cell{5, 5, 5});
  s.place(Player::Maker, Cell{2, 2, 2});
  CHECK(breaker_opening_case_b(book(), s) == id({7, 1, 7}));
}

TEST_CASE("index space sizes") {
  CHECK(case_count(CaseKind::A) == 22163142);
  CHECK(case_count(CaseKind::B) == 12824370);
  CHECK(residual_pairs(book()).size() == 5832);
  CHECK(case_count(CaseKind::Residual) == 5832ull * 339);
  for (auto [m1, m2] : residual_pairs(book())) {
    const Cell a = book().board().cell_of(m1), b = book().board().cell_of(m2);
    for (int i = 0; i < 3; ++i) CHECK((a[i] - 4) * (b[i] - 4) < 0);
  }
}

TEST_CASE("decode") {
  CaseRunner r(book());
  auto first = r.decode(CaseKind::A, 0);
  REQUIRE(first.maker.size() == 4);
  CHECK(first.maker[0] == book().center());
  CHECK(first.maker[1] == 0);  // (1,1,1)
  CHECK(first.maker[2] == 1);  // lowest Empty: (1,1,2)
  CHECK(first.maker[3] == 2);
  auto last = r.decode(CaseKind::A, case_count(CaseKind::A) - 1);
  CHECK(last.maker[1] == id({7, 7, 7}));
  auto b0 = r.decode(CaseKind::B, 0);
  CHECK(b0.maker[0] == 0);
  CHECK(b0.maker[1] == 1);
  CHECK_THROWS_AS(r.decode(CaseKind::B, case_count(CaseKind::B)), InvalidArgument);

  std::set<std::vector<CellId>> seen;
  for (std::uint64_t i = 0; i < 2000; ++i) {
    auto spec = r.decode(CaseKind::B, i * 6411 % case_count(CaseKind::B));
    for (CellId m : {spec.maker[0], spec.maker[1]}) CHECK(book().board().coord(m, 0) <= 4);
    seen.insert(spec.maker);
  }
  CHECK(seen.size() == 2000);
}

TEST_CASE("single cases and their strategies") {
  CaseRunner r(book());
  for (std::uint64_t i : {0ull, 123456ull, 22163141ull}) {
    auto res = r.run(r.decode(CaseKind::A, i));
    CHECK(res.ok);
    CHECK(res.survivors == 166);
    CHECK(res.empty == 335);
    CHECK(res.matching_size == 332);
    CHECK(res.eliminated == std::vector<int>{7, 7, 7, 6});
    CHECK(res.min_edge >= 3);
    CHECK(res.max_edge <= 7);
    auto s = r.strategy();
    CHECK(s.pairs().size() == 166);
    CHECK(s.free_cells().size() == 3);
    CHECK(verify_pairing(s.board(), &r.state(), s).valid);
  }
  auto res = r.run(r.decode(CaseKind::B, 9999));
  CHECK(res.ok);
  CHECK(res.matching_size == 336);
  CHECK(r.strategy().pairs().size() == 168);
  CHECK(r.strategy().free_cells().size() == 1);

  auto resid = r.run(r.decode(CaseKind::Residual, 777));
  CHECK(resid.ok);
  CHECK(resid.survivors == 168);
}

TEST_CASE("anomalies are reported, not thrown") {
  CaseRunner r(book());
  CaseSpec bad{CaseKind::A, 0, {book().center(), book().center(), 1, 2}};
  auto res = r.run(bad);
  CHECK_FALSE(res.ok);
  CHECK((res.anomalies & kIllegalSpec) != 0);
  CaseSpec wrong_half{CaseKind::A, 0, {book().center(), id({6, 2, 3}), 1, 2}};
  CHECK((r.run(wrong_half).anomalies & kIllegalSpec) != 0);
  CaseSpec short_spec{CaseKind::B, 0, {1}};
  CHECK((r.run(short_spec).anomalies & kIllegalSpec) != 0);
  CHECK(describe_anomalies(kIllegalSpec | kMatchingShort) == "illegal-spec|matching-short");
}

TEST_CASE("sampling") {
  auto a = sample_indices(1000, 100, 7);
  CHECK(a == sample_indices(1000, 100, 7));
  CHECK(a != sample_indices(1000, 100, 8));
  CHECK(a.size() == 100);
  CHECK(std::set<std::uint64_t>(a.begin(), a.end()).size() == 100);
  CHECK(std::is_sorted(a.begin(), a.end()));
  CHECK(a.back() < 1000);
  CHECK(sample_indices(5, 5, 1) == std::vector<std::uint64_t>{0, 1, 2, 3, 4});
  CHECK_THROWS_AS(sample_indices(5, 6, 1), InvalidArgument);
  // Every index is reachable: a crude uniformity check over many seeds.
  std::vector<int> hits(20);
  for (std::uint64_t s = 0; s < 2000; ++s)
    for (auto v : sample_indices(20, 5, s)) ++hits[v];
  for (int h : hits) CHECK(h > 350);  // expectation 500
}

TEST_CASE("batch runs are deterministic across shard counts") {
  BatchOptions o;
  o.kind = CaseKind::B;
  o.sample_count = 600;
  o.seed = 42;
  auto one = run_batch(o);
  o.shards = 3;
  auto three = run_batch(o);
  CHECK(one.success());
  CHECK(one.tally.processed == 600);
  CHECK(one.tally.survivors.at(168) == 600);
  const Board& b = book().board();
  auto j1 = nlohmann::json::parse(ledger_json({one}, b));
  auto j3 = nlohmann::json::parse(ledger_json({three}, b));
  j1.erase("timing");
  j3.erase("timing");
  j1["cases"][0].erase("shards");
  j3["cases"][0].erase("shards");
  CHECK(j1 == j3);
  o.shards = 1;
  CHECK(without_timing(ledger_json({one}, b)) == without_timing(ledger_json({run_batch(o)}, b)));
}

TEST_CASE("checkpointed run resumes to the uninterrupted result") {
  const std::string ck = temp_path("ck.json"), csv_a = temp_path("a.csv"), csv_b = temp_path("b.csv");
  std::filesystem::remove(ck);
  BatchOptions o;
  o.kind = CaseKind::A;
  o.sample_count = 500;
  o.seed = 9;
  o.shards = 2;
  o.per_case_path = csv_a;
  auto straight = run_batch(o);
  REQUIRE(straight.success());

  o.per_case_path = csv_b;
  o.checkpoint_path = ck;
  o.checkpoint_every = 40;
  o.stop_after = 110;
  auto paused = run_batch(o);
  CHECK_FALSE(paused.complete());
  CHECK(paused.tally.processed == 220);
  CHECK(std::filesystem::exists(ck));
  o.stop_after = 0;
  auto resumed = run_batch(o);
  CHECK(resumed.resumed);
  CHECK(resumed.success());
  CHECK(resumed.tally.processed == 500);
  CHECK(resumed.tally.survivors == straight.tally.survivors);
  CHECK(resumed.tally.matching_size == straight.tally.matching_size);
  CHECK(slurp(csv_a) == slurp(csv_b));

  const std::string rows = slurp(csv_a);
  CHECK(rows.rfind(csv_header(), 0) == 0);
  CHECK(std::count(rows.begin(), rows.end(), '\n') == 501);

  // A checkpoint from different options is refused.
  o.seed = 10;
  CHECK_THROWS(run_batch(o));
  for (const auto& p : {ck, csv_a, csv_b}) std::filesystem::remove(p);
}

TEST_CASE("count-only enumeration of the residual openings") {
  BatchOptions o;
  o.kind = CaseKind::Residual;
  o.count_only = true;
  auto l = run_batch(o);
  CHECK(l.tally.processed == 1977048);
  CHECK(l.success());
  REQUIRE(l.observed_options.size() == 2);
  CHECK(l.observed_options[0] == std::pair{5832, 5832});
  CHECK(l.observed_options[1] == std::pair{339, 339});
  CHECK(l.tally.eliminated.at(25) == 1977048);
}

TEST_CASE("ledger and csv formats") {
  CaseRunner r(book());
  auto res = r.run(r.decode(CaseKind::A, 5));
  const std::string row = csv_row(res, book().board());
  CHECK(row == "5,A,\"(4,4,4)\",\"(1,1,1)\",\"(1,1,2)\",\"(1,2,1)\",166,332,1\n");
  CHECK(csv_header() == "specIndex,caseKind,m1,m2,m3,m4,survivors,matchingSize,ok\n");

  BatchOptions o;
  o.kind = CaseKind::A;
  o.sample_count = 50;
  auto j = nlohmann::json::parse(ledger_json({run_batch(o)}, book().board()));
  CHECK(j["success"] == true);
  CHECK(j["cases"][0]["caseKind"] == "A");
  CHECK(j["cases"][0]["tally"]["matchingSize"]["332"] == 50);
  CHECK(j.contains("timing"));
}
