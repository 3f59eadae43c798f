#include "doctest.h"

#include <algorithm>
#include <set>

#include "ttt/board.hpp"

using namespace ttt;

namespace {

// Independent line oracle: walk every (start, direction) pair and keep the
// ones that run exactly n cells inside the box. Each line is found from
// both ends.
std::set<std::vector<CellId>> oracle_lines(int n, int d) {
  std::vector<int> stride(d, 1);
  for (int i = d - 2; i >= 0; --i) stride[i] = stride[i + 1] * n;
  int cells = 1;
  for (int i = 0; i < d; ++i) cells *= n;
  int dirs = 1;
  for (int i = 0; i < d; ++i) dirs *= 3;
  std::set<std::vector<CellId>> out;
  for (int start = 0; start < cells; ++start) {
    std::vector<int> x(d);
    for (int i = 0; i < d; ++i) x[i] = start / stride[i] % n;
    for (int code = 0; code < dirs; ++code) {
      std::vector<int> delta(d);
      bool zero = true;
      for (int i = 0, c = code; i < d; ++i, c /= 3) {
        delta[i] = c % 3 - 1;
        zero = zero && delta[i] == 0;
      }
      if (zero) continue;
      std::vector<CellId> line;
      bool inside = true;
      for (int k = 0; k < n && inside; ++k) {
        int id = 0;
        for (int i = 0; i < d; ++i) {
          const int v = x[i] + k * delta[i];
          if (v < 0 || v >= n) inside = false;
          id += v * stride[i];
        }
        line.push_back(id);
      }
      if (!inside) continue;
      std::sort(line.begin(), line.end());
      out.insert(line);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("line enumeration matches the formula and the walk oracle") {
  for (int d = 1; d <= 4; ++d) {
    for (int n = 2; n <= 9; ++n) {
      CAPTURE(n);
      CAPTURE(d);
      auto b = enumerate_lines(n, d);
      CHECK(b->line_count() == expected_line_count(n, d));
      auto oracle = oracle_lines(n, d);
      REQUIRE(oracle.size() == static_cast<std::size_t>(b->line_count()));
      std::set<std::vector<CellId>> mine;
      for (const auto& l : b->lines()) {
        auto cells = l.cells;
        std::sort(cells.begin(), cells.end());
        mine.insert(cells);
      }
      CHECK(mine == oracle);
    }
  }
}

TEST_CASE("known line counts") {
  CHECK(enumerate_lines(7, 3)->line_count() == 193);
  CHECK(enumerate_lines(8, 3)->line_count() == 244);
  CHECK(enumerate_lines(3, 2)->line_count() == 8);
  CHECK(enumerate_lines(4, 2)->line_count() == 10);
  CHECK(expected_line_count(9, 3) == 301);
}

TEST_CASE("degrees") {
  auto b = enumerate_lines(7, 3);
  CHECK(b->cell_degree(Cell{4, 4, 4}) == 13);
  for (LineId l : b->superdiagonals())
    for (CellId c : b->line(l).cells)
      if (c != b->id_of({4, 4, 4})) CHECK(b->cell_degree(c) == 7);
  CHECK(enumerate_lines(6, 3)->max_degree() == 7);

  for (int d = 1; d <= 4; ++d)
    for (int n = 2; n <= 8; ++n) {
      auto g = enumerate_lines(n, d);
      CAPTURE(n);
      CAPTURE(d);
      CHECK(g->max_degree() == max_degree_formula(n, d));
      int degree_sum = 0, at_max = 0;
      for (CellId c = 0; c < g->cell_count(); ++c) {
        degree_sum += g->cell_degree(c);
        at_max += g->cell_degree(c) == g->max_degree();
      }
      CHECK(degree_sum == n * g->line_count());
      // Odd boards attain the maximum only at the center.
      if (n % 2 == 1 && n >= 3 && d >= 2) CHECK(at_max == 1);
    }
}

TEST_CASE("lines are almost disjoint and canonical") {
  for (auto [n, d] : {std::pair{4, 3}, {5, 2}, {7, 3}}) {
    auto b = enumerate_lines(n, d);
    for (const auto& l : b->lines()) {
      CHECK(l.direction.is_canonical());
      CHECK(static_cast<int>(l.cells.size()) == n);
      std::set<CellId> s(l.cells.begin(), l.cells.end());
      CHECK(s.size() == l.cells.size());
    }
    std::vector<int> shared(static_cast<std::size_t>(b->line_count()));
    for (LineId a = 0; a < b->line_count(); ++a) {
      std::fill(shared.begin(), shared.end(), 0);
      for (CellId c : b->line(a).cells)
        for (LineId o : b->lines_through(c)) ++shared[o];
      for (LineId o = 0; o < b->line_count(); ++o)
        if (o != a) CHECK(shared[o] <= 1);
    }
  }
}

TEST_CASE("ids, cells and lookups") {
  auto b = enumerate_lines(7, 3);
  for (CellId c = 0; c < b->cell_count(); ++c) CHECK(b->id_of(b->cell_of(c)) == c);
  CHECK(b->id_of({1, 1, 1}) == 0);
  CHECK(b->id_of({1, 1, 2}) == 1);
  CHECK(b->id_of({2, 1, 1}) == 49);
  CHECK(Cell::parse(" ( 6, 2 ,6 )") == Cell{6, 2, 6});
  CHECK(Cell{6, 2, 6}.to_string() == "(6,2,6)");
  CHECK_THROWS_AS(Cell::parse("(1,2"), InvalidArgument);
  CHECK_THROWS_AS(Cell::parse("1,2,3"), InvalidArgument);
  CHECK_THROWS_AS(b->id_of({0, 1, 1}), InvalidArgument);
  CHECK_THROWS_AS(b->id_of({1, 1}), InvalidArgument);
  CHECK_THROWS_AS(b->cell_of(343), InvalidArgument);
  CHECK_FALSE(b->contains({8, 1, 1}));

  const LineId diag = b->line_through(b->id_of({1, 1, 1}), b->id_of({7, 7, 7}));
  REQUIRE(diag >= 0);
  CHECK(diag == b->superdiagonals()[0]);
  CHECK(b->find_line(b->line(diag).cells) == diag);
  CHECK(b->line_through(b->id_of({1, 1, 1}), b->id_of({2, 3, 1})) == -1);
  std::vector<CellId> partial(b->line(diag).cells.begin(), b->line(diag).cells.begin() + 3);
  CHECK(b->find_line(partial) == -1);

  const auto sd = b->superdiagonals();
  CHECK(b->line(sd[1]).cells.front() == b->id_of({1, 7, 1}));
  std::set<CellId> ends;
  for (LineId l : sd) {
    ends.insert(b->line(l).cells.front());
    ends.insert(b->line(l).cells.back());
  }
  CHECK(ends.size() == 8);  // the eight corners
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(enumerate_lines(1, 3), InvalidArgument);
  CHECK_THROWS_AS(enumerate_lines(3, 0), InvalidArgument);
  CHECK_THROWS_AS(enumerate_lines(40, 5), InvalidArgument);
  CHECK_THROWS_AS(enumerate_lines(4, 2)->superdiagonals(), InvalidArgument);
}

TEST_CASE("pre-game pairing cell budget") {
  CHECK(pairing_feasible_min_n(2) == 5);
  CHECK(pairing_feasible_min_n(3) == 8);
  for (int d = 1; d <= 6; ++d) {
    const int n = pairing_feasible_min_n(d);
    std::int64_t cells = 1;
    for (int i = 0; i < d; ++i) cells *= n;
    CHECK(cells >= 2 * expected_line_count(n, d));
    if (n > 2) {
      std::int64_t smaller = 1;
      for (int i = 0; i < d; ++i) smaller *= n - 1;
      CHECK(smaller < 2 * expected_line_count(n - 1, d));
    }
  }
}
