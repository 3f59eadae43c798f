#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <random>

#include "json.hpp"
#include "ttt/bigamy.hpp"
#include "ttt/prover.hpp"

using namespace ttt;

namespace {

GameState worked_4x4(const Cell& x, const Cell& o) {
  GameState s(enumerate_lines(4, 2));
  s.place(Player::Maker, x);
  s.place(Player::Breaker, o);
  return s;
}

Hypergraph random_hypergraph(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> ec(1, 10), vc(2, 20);
  const int edges = ec(rng), vertices = vc(rng);
  std::uniform_int_distribution<int> sz(1, std::min(6, vertices)), v(0, vertices - 1);
  std::vector<std::vector<int>> list;
  for (int j = 0; j < edges; ++j) {
    std::vector<int> e;
    const int k = sz(rng);
    while (static_cast<int>(e.size()) < k) {
      const int x = v(rng);
      if (std::find(e.begin(), e.end(), x) == e.end()) e.push_back(x);
    }
    list.push_back(e);
  }
  return Hypergraph::from_edges(vertices, list);
}

}  // namespace

TEST_CASE("union sizes") {
  auto s = worked_4x4({2, 2}, {3, 3});
  auto h = s.surviving_hypergraph();
  CHECK(union_size(h, {0, 1, 2, 3, 4, 5, 6}) == 14);
  CHECK(union_size(h, {}) == 0);
  for (int j = 0; j < h.edge_count(); ++j) CHECK(union_size(h, {j}) == h.edge_size(j));
  CHECK_THROWS_AS(union_size(h, {7}), InvalidArgument);
}

TEST_CASE("crude bound") {
  CHECK(crude_lower_bound(3, 3) == 6);
  CHECK(crude_lower_bound(1, 3) == 3);
  CHECK(crude_lower_bound(7, 3) == 0);
  CHECK(crude_lower_bound(0, 3) == 0);
  CHECK_THROWS_AS(crude_lower_bound(-1, 3), InvalidArgument);
}

TEST_CASE("inclusion-exclusion") {
  auto disjoint = Hypergraph::from_edges(8, {{0, 1, 2, 3}, {4, 5, 6, 7}});
  CHECK(inclusion_exclusion_size(disjoint, {0, 1}) == 8);

  std::mt19937_64 rng(3);
  const auto b = enumerate_lines(4, 2);
  for (const Cell& x : {Cell{1, 1}, Cell{1, 2}, Cell{2, 2}}) {
    GameState s(b);
    s.place(Player::Maker, x);
    s.place(Player::Breaker, Cell{3, 3});
    auto h = s.surviving_hypergraph();
    for (unsigned mask = 0; mask < (1u << h.edge_count()); ++mask) {
      std::vector<int> fam;
      for (int j = 0; j < h.edge_count(); ++j)
        if (mask >> j & 1) fam.push_back(j);
      CHECK(inclusion_exclusion_size(h, fam, b.get()) == union_size(h, fam));
    }
  }
  // Full empty board of 4^2: still degree <= 3.
  GameState empty(b);
  auto all = empty.surviving_hypergraph();
  std::vector<int> every(static_cast<std::size_t>(all.edge_count()));
  std::iota(every.begin(), every.end(), 0);
  CHECK(inclusion_exclusion_size(all, every, b.get()) == 16);

  GameState cube(enumerate_lines(7, 3));
  auto hc = cube.surviving_hypergraph();
  std::vector<int> through_center;
  for (LineId l : cube.board().lines_through(cube.board().id_of({4, 4, 4}))) through_center.push_back(l);
  CHECK_THROWS_AS(inclusion_exclusion_size(hc, through_center, &cube.board()), InvalidArgument);

  auto star = Hypergraph::from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  CHECK_THROWS_AS(inclusion_exclusion_size(star, {0, 1, 2, 3}), InvalidArgument);
  CHECK(inclusion_exclusion_size(star, {0, 1, 2}) == 4);
}

TEST_CASE("crude bound under almost-disjoint edges") {
  std::mt19937_64 rng(11);
  GameState s(enumerate_lines(6, 3));
  auto h = s.surviving_hypergraph();
  for (int t = 0; t < 300; ++t) {
    const int m = std::uniform_int_distribution<int>(1, 30)(rng);
    std::vector<int> fam(static_cast<std::size_t>(h.edge_count()));
    std::iota(fam.begin(), fam.end(), 0);
    std::shuffle(fam.begin(), fam.end(), rng);
    fam.resize(static_cast<std::size_t>(m));
    CHECK(crude_lower_bound(m, 6) <= union_size(h, fam));
    // Monotone in the family.
    std::vector<int> smaller(fam.begin(), fam.end() - 1);
    CHECK(union_size(h, smaller) <= union_size(h, fam));
  }
}

TEST_CASE("4x4 openings pass every subfamily") {
  for (const Cell& x : {Cell{4, 1}, Cell{3, 1}, Cell{3, 2}}) {
    auto h = worked_4x4(x, {2, 3}).surviving_hypergraph();
    auto r = exhaustive_bigamy_check(h);
    CHECK(r.holds);
    CHECK(r.families_checked == 127);
    auto hall = hall_equivalence_check(h);
    CHECK(hall.agree);
    CHECK(hall.x_perfect);
    CHECK(hall.matching_size == 14);
  }
}

TEST_CASE("forced violations") {
  auto dup = Hypergraph::from_edges(2, {{0, 1}, {0, 1}});
  auto r = exhaustive_bigamy_check(dup);
  CHECK_FALSE(r.holds);
  CHECK(r.violator == std::vector<int>{0, 1});
  CHECK(r.violator_union == 2);
  auto hall = hall_equivalence_check(dup);
  CHECK(hall.agree);
  CHECK_FALSE(hall.bigamy_holds);
  CHECK_FALSE(hall.x_perfect);

  // Smallest violator first, then lexicographic.
  auto h = Hypergraph::from_edges(6, {{0, 1, 2, 3}, {4}, {4, 5}, {0, 1}});
  auto v = exhaustive_bigamy_check(h);
  CHECK(v.violator == std::vector<int>{1});

  CHECK(exhaustive_bigamy_check(Hypergraph::from_edges(3, {{0, 1}})).holds);

  std::vector<std::vector<int>> many(26, std::vector<int>{0, 1});
  CHECK_THROWS_AS(exhaustive_bigamy_check(Hypergraph::from_edges(2, many)), InvalidArgument);
}

TEST_CASE("union condition and X-perfect matching agree") {
  std::mt19937_64 rng(777);
  int negatives = 0;
  for (int t = 0; t < 200; ++t) {
    auto h = random_hypergraph(rng);
    auto r = hall_equivalence_check(h);
    CAPTURE(t);
    CHECK(r.agree);
    negatives += !r.bigamy_holds;
  }
  // Both outcomes are exercised.
  CHECK(negatives > 10);
  CHECK(negatives < 190);
}

TEST_CASE("probing a 7^3 opening") {
  OpeningBook book(enumerate_lines(7, 3));
  CaseRunner runner(book);
  auto res = runner.run(runner.decode(CaseKind::A, 4242), true);
  REQUIRE(res.ok);
  auto rep = probe_7cube(runner.state(), {1, 40, 166, 500}, 200, 5);
  CHECK(rep.edges == 166);
  REQUIRE(rep.sizes.size() == 4);
  CHECK(rep.sizes[0].violations == 0);
  CHECK(rep.sizes[0].min_ratio >= 1.5);
  CHECK(rep.sizes[2].violations == 0);
  CHECK(rep.sizes[2].witness_union == 335);
  CHECK(rep.sizes[3].samples == 0);
  auto j = nlohmann::json::parse(probe_report_json(rep));
  CHECK(j["sizes"][2]["witnessUnion"] == 335);
  CHECK(j["exhaustive"] == false);
  auto again = probe_7cube(runner.state(), {1, 40, 166, 500}, 200, 5);
  CHECK(again.sizes[1].witness == rep.sizes[1].witness);
}
