#include "ttt/prover.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "json.hpp"
#include "ttt/symmetry.hpp"

namespace ttt {

using nlohmann::json;

char case_letter(CaseKind k) {
  switch (k) {
    case CaseKind::A: return 'A';
    case CaseKind::B: return 'B';
    case CaseKind::Residual: return 'R';
  }
  return '?';
}

CaseKind parse_case_kind(const std::string& s) {
  if (s == "a" || s == "A") return CaseKind::A;
  if (s == "b" || s == "B") return CaseKind::B;
  if (s == "r" || s == "R" || s == "residual") return CaseKind::Residual;
  throw InvalidArgument("unknown case kind '" + s + "'");
}

// ---------------------------------------------------------------------------
// Openings

OpeningBook::OpeningBook(BoardPtr board) : board_(std::move(board)) {
  if (!board_ || board_->n() != 7 || board_->d() != 3)
    throw InvalidArgument("the opening book is defined for the 7^3 board");
  const Board& b = *board_;
  center_ = b.id_of({4, 4, 4});
  c555_ = b.id_of({5, 5, 5});
  c626_ = b.id_of({6, 2, 6});
  c717_ = b.id_of({7, 1, 7});
  corners_ = {b.id_of({7, 1, 1}), b.id_of({1, 7, 7}), b.id_of({7, 7, 1}), b.id_of({1, 1, 7})};
  superdiagonals_ = b.superdiagonals();
  for (int k = 0; k < 4; ++k) {
    diag_cells_[k] = b.line(superdiagonals_[k]).cells;
    std::sort(diag_cells_[k].begin(), diag_cells_[k].end());
  }
}

int OpeningBook::newly_eliminated(const GameState& s, CellId c) {
  int count = 0;
  for (LineId l : s.board().lines_through(c)) count += s.is_survivor(l);
  return count;
}

CellId OpeningBook::first_on_diagonal_eliminating(const GameState& s, int diag, int want) const {
  for (CellId c : diag_cells_[diag])
    if (s.is_empty(c) && newly_eliminated(s, c) == want) return c;
  return -1;
}

std::vector<int> OpeningBook::expected_eliminations(CaseKind kind) {
  if (kind == CaseKind::A) return {7, 7, 7, 6};
  return {13, 6, 6};
}

CellId OpeningBook::breaker_move(CaseKind kind, const GameState& s) const {
  const auto& h = s.history();
  if (h.empty() || h.size() % 2 == 0 || h.back().player != Player::Maker) return -1;
  const int k = static_cast<int>(h.size() + 1) / 2;
  auto empty_or_none = [&](CellId c) { return s.is_empty(c) ? c : -1; };

  if (kind == CaseKind::A) {
    switch (k) {
      case 1: return empty_or_none(c555_);
      case 2: return empty_or_none(c626_);
      case 3:
        for (CellId c : corners_)
          if (s.is_empty(c)) return c;
        return -1;
      case 4: {
        // Third move sat on (C) or (D); the fourth goes on the other one.
        const CellId third = h[5].cell;
        const int other = (third == corners_[0] || third == corners_[1]) ? 3 : 2;
        return first_on_diagonal_eliminating(s, other, 6);
      }
      default: return -1;
    }
  }

  switch (k) {
    case 1: return empty_or_none(center_);
    case 2:
      if (s.is_empty(c555_) || kind == CaseKind::B) return empty_or_none(c555_);
      return first_on_diagonal_eliminating(s, 0, 6);
    case 3:
      if (kind == CaseKind::B) {
        if (s.is_empty(c626_)) return c626_;
        return empty_or_none(c717_);
      }
      for (CellId c : {c626_, c717_})
        if (s.is_empty(c) && newly_eliminated(s, c) == 6) return c;
      return first_on_diagonal_eliminating(s, 1, 6);
    default: return -1;
  }
}

CellId breaker_opening_case_a(const OpeningBook& book, const GameState& s) {
  return book.breaker_move(CaseKind::A, s);
}

CellId breaker_opening_case_b(const OpeningBook& book, const GameState& s) {
  return book.breaker_move(CaseKind::B, s);
}

std::string describe_anomalies(std::uint32_t mask) {
  static const std::pair<std::uint32_t, const char*> names[] = {
      {kIllegalSpec, "illegal-spec"},
      {kEliminationMismatch, "elimination-mismatch"},
      {kSurvivorMismatch, "survivor-mismatch"},
      {kEmptyMismatch, "empty-mismatch"},
      {kEdgeSizeOutOfRange, "edge-size-out-of-range"},
      {kImminentLoss, "imminent-loss"},
      {kMatchingShort, "matching-short"},
      {kOpeningUnavailable, "opening-unavailable"},
  };
  std::string out;
  for (auto [bit, name] : names) {
    if (mask & bit) {
      if (!out.empty()) out += '|';
      out += name;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

std::vector<CellId> filtered_cells(const Board& b, auto&& keep) {
  std::vector<CellId> out;
  for (CellId c = 0; c < b.cell_count(); ++c)
    if (keep(c)) out.push_back(c);
  return out;
}

std::vector<CellId> case_a_second_moves(const OpeningBook& book) {
  const Board& b = book.board();
  return filtered_cells(b, [&](CellId c) {
    return b.coord(c, 0) <= b.coord(c, 1) && c != book.center() && c != book.c555();
  });
}

std::vector<CellId> half_cube(const OpeningBook& book) {
  const Board& b = book.board();
  return filtered_cells(b, [&](CellId c) { return b.coord(c, 0) <= 4 && c != book.center(); });
}

}  // namespace

std::uint64_t case_count(CaseKind kind) {
  std::uint64_t total = 1;
  for (int v : depth_options(kind)) total *= static_cast<std::uint64_t>(v);
  return total;
}

std::vector<int> depth_options(CaseKind kind) {
  switch (kind) {
    case CaseKind::A: return {194, 339, 337};
    case CaseKind::B: return {195, 194, 339};
    case CaseKind::Residual: return {5832, 339};
  }
  return {};
}

const std::vector<std::pair<CellId, CellId>>& residual_pairs(const OpeningBook& book) {
  static std::once_flag once;
  static std::vector<std::pair<CellId, CellId>> pairs;
  std::call_once(once, [&] {
    const Board& b = book.board();
    for (CellId m1 = 0; m1 < b.cell_count(); ++m1) {
      if (m1 == book.center()) continue;
      for (CellId m2 = 0; m2 < b.cell_count(); ++m2) {
        if (m2 == book.center() || m2 == m1) continue;
        if (!normalize_case_b(b.cell_of(m1), b.cell_of(m2)).symmetry) pairs.emplace_back(m1, m2);
      }
    }
  });
  return pairs;
}

// ---------------------------------------------------------------------------
// Case runner

CaseRunner::CaseRunner(const OpeningBook& book) : book_(book), state_(book.board_ptr()) {}

void CaseRunner::reset() {
  while (!state_.history().empty()) state_.undo();
}

CellId CaseRunner::nth_empty(std::uint64_t k) const {
  for (CellId c = 0; c < state_.board().cell_count(); ++c) {
    if (state_.is_empty(c)) {
      if (k == 0) return c;
      --k;
    }
  }
  throw InvalidArgument("spec index out of range");
}

CaseSpec CaseRunner::decode(CaseKind kind, std::uint64_t index) {
  if (index >= case_count(kind)) throw InvalidArgument("spec index out of range");
  static thread_local std::vector<CellId> a_second, b_half;
  if (a_second.empty()) {
    a_second = case_a_second_moves(book_);
    b_half = half_cube(book_);
  }
  const auto opts = depth_options(kind);
  CaseSpec spec{kind, index, {}};
  reset();
  auto maker = [&](CellId c) {
    spec.maker.push_back(c);
    state_.place(Player::Maker, c);
    CellId b = book_.breaker_move(kind, state_);
    if (b < 0) b = state_.first_empty();
    state_.place(Player::Breaker, b);
  };

  if (kind == CaseKind::A) {
    const auto i4 = index % 337, i3 = index / 337 % 339, i2 = index / (337 * 339);
    maker(book_.center());
    maker(a_second[i2]);
    maker(nth_empty(i3));
    spec.maker.push_back(nth_empty(i4));
  } else if (kind == CaseKind::B) {
    const auto i3 = index % 339, i2 = index / 339 % 194, i1 = index / (339 * 194);
    const CellId m1 = b_half[i1];
    maker(m1);
    std::uint64_t seen = 0;
    for (CellId c : b_half) {
      if (c == m1) continue;
      if (seen++ == i2) {
        maker(c);
        break;
      }
    }
    spec.maker.push_back(nth_empty(i3));
  } else {
    const auto& pairs = residual_pairs(book_);
    const auto i3 = index % 339, ip = index / 339;
    maker(pairs[ip].first);
    maker(pairs[ip].second);
    spec.maker.push_back(nth_empty(i3));
  }
  reset();
  return spec;
}

CaseResult CaseRunner::run(const CaseSpec& spec, bool skip_matching) {
  CaseResult r;
  r.spec = spec;
  reset();
  const Board& b = state_.board();
  const auto rounds = static_cast<std::size_t>(OpeningBook::opening_rounds(spec.kind));
  if (spec.maker.size() != rounds) {
    r.anomalies |= kIllegalSpec;
    return r;
  }
  switch (spec.kind) {
    case CaseKind::A:
      if (spec.maker[0] != book_.center() || b.coord(spec.maker[1], 0) > b.coord(spec.maker[1], 1))
        r.anomalies |= kIllegalSpec;
      break;
    case CaseKind::B:
      if (spec.maker[0] == book_.center() || b.coord(spec.maker[0], 0) > 4 || b.coord(spec.maker[1], 0) > 4)
        r.anomalies |= kIllegalSpec;
      break;
    case CaseKind::Residual:
      if (spec.maker[0] == book_.center()) r.anomalies |= kIllegalSpec;
      break;
  }

  for (CellId m : spec.maker) {
    if (m < 0 || m >= b.cell_count() || !state_.is_empty(m)) {
      r.anomalies |= kIllegalSpec;
      return r;
    }
    state_.place(Player::Maker, m);
    CellId reply = book_.breaker_move(spec.kind, state_);
    if (reply < 0 || !state_.is_empty(reply)) {
      r.anomalies |= kOpeningUnavailable;
      reply = state_.first_empty();
    }
    r.eliminated.push_back(OpeningBook::newly_eliminated(state_, reply));
    r.breaker.push_back(reply);
    state_.place(Player::Breaker, reply);
  }

  if (r.eliminated != OpeningBook::expected_eliminations(spec.kind)) r.anomalies |= kEliminationMismatch;
  r.survivors = state_.survivors_count();
  r.empty = state_.empty_count();
  if (r.survivors != OpeningBook::expected_survivors(spec.kind)) r.anomalies |= kSurvivorMismatch;
  if (r.empty != OpeningBook::expected_empty(spec.kind)) r.anomalies |= kEmptyMismatch;

  if (!skip_matching) {
    state_.surviving_hypergraph(hypergraph_);
    r.min_edge = b.n();
    r.max_edge = 0;
    const int low = b.n() - static_cast<int>(rounds);
    for (int j = 0; j < hypergraph_.edge_count(); ++j) {
      const int size = hypergraph_.edge_size(j);
      r.min_edge = std::min(r.min_edge, size);
      r.max_edge = std::max(r.max_edge, size);
      if (size < low || size > b.n()) r.anomalies |= kEdgeSizeOutOfRange;
      // A 3-cell edge means all four Maker moves lie on that survivor.
      if (size == 3 && state_.maker_on(hypergraph_.line_ids[j]) != 4) r.anomalies |= kEdgeSizeOutOfRange;
      if (state_.maker_on(hypergraph_.line_ids[j]) >= b.n() - 1) r.anomalies |= kImminentLoss;
    }
    if (hypergraph_.edge_count() == 0) {
      r.matching_size = 0;
    } else {
      build_doubled_graph(hypergraph_, graph_);
      r.matching_size = matcher_.solve(graph_).size;
    }
    if (r.matching_size != 2 * r.survivors) r.anomalies |= kMatchingShort;
  }
  r.ok = r.anomalies == 0;
  return r;
}

PairingStrategy CaseRunner::strategy() const {
  return strategy_from_matching(state_, hypergraph_, matcher_.matching());
}

CaseResult run_case(const OpeningBook& book, const CaseSpec& spec) {
  CaseRunner runner(book);
  return runner.run(spec);
}

// ---------------------------------------------------------------------------
// Tally

void Tally::add(const CaseResult& r) {
  ++processed;
  if (r.ok) ++ok;
  ++survivors[r.survivors];
  ++empty[r.empty];
  int elim = 0;
  for (int e : r.eliminated) elim += e;
  ++eliminated[elim];
  if (r.matching_size >= 0) {
    ++matching_size[r.matching_size];
    ++min_edge[r.min_edge];
    ++max_edge[r.max_edge];
  }
  if (!r.ok) failures.push_back(r);
}

void Tally::merge(const Tally& o) {
  processed += o.processed;
  ok += o.ok;
  auto add_map = [](auto& into, const auto& from) {
    for (auto [k, v] : from) into[k] += v;
  };
  add_map(survivors, o.survivors);
  add_map(empty, o.empty);
  add_map(eliminated, o.eliminated);
  add_map(matching_size, o.matching_size);
  add_map(min_edge, o.min_edge);
  add_map(max_edge, o.max_edge);
  failures.insert(failures.end(), o.failures.begin(), o.failures.end());
  std::sort(failures.begin(), failures.end(),
            [](const CaseResult& a, const CaseResult& b) { return a.spec.index < b.spec.index; });
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json histogram_json(const std::map<int, std::uint64_t>& h) {
  json j = json::object();
  for (auto [k, v] : h) j[std::to_string(k)] = v;
  return j;
}

std::map<int, std::uint64_t> histogram_from(const json& j) {
  std::map<int, std::uint64_t> h;
  for (auto it = j.begin(); it != j.end(); ++it) h[std::stoi(it.key())] = it.value().get<std::uint64_t>();
  return h;
}

json cells_json(const Board& b, const std::vector<CellId>& cells) {
  json a = json::array();
  for (CellId c : cells) a.push_back(b.cell_of(c).to_string());
  return a;
}

json result_json(const CaseResult& r, const Board& b) {
  return json{{"specIndex", r.spec.index},
              {"caseKind", std::string(1, case_letter(r.spec.kind))},
              {"maker", cells_json(b, r.spec.maker)},
              {"breaker", cells_json(b, r.breaker)},
              {"eliminated", r.eliminated},
              {"survivors", r.survivors},
              {"empty", r.empty},
              {"matchingSize", r.matching_size},
              {"anomalies", describe_anomalies(r.anomalies)},
              {"anomalyMask", r.anomalies}};
}

CaseResult result_from(const json& j, const Board& b) {
  CaseResult r;
  r.spec.index = j.at("specIndex").get<std::uint64_t>();
  r.spec.kind = parse_case_kind(j.at("caseKind").get<std::string>());
  for (const auto& c : j.at("maker")) r.spec.maker.push_back(b.id_of(Cell::parse(c.get<std::string>())));
  for (const auto& c : j.at("breaker")) r.breaker.push_back(b.id_of(Cell::parse(c.get<std::string>())));
  r.eliminated = j.at("eliminated").get<std::vector<int>>();
  r.survivors = j.at("survivors");
  r.empty = j.at("empty");
  r.matching_size = j.at("matchingSize");
  r.anomalies = j.at("anomalyMask");
  r.ok = false;
  return r;
}

json tally_json(const Tally& t, const Board& b) {
  json failures = json::array();
  for (const auto& f : t.failures) failures.push_back(result_json(f, b));
  return json{{"processed", t.processed},
              {"ok", t.ok},
              {"survivors", histogram_json(t.survivors)},
              {"empty", histogram_json(t.empty)},
              {"eliminated", histogram_json(t.eliminated)},
              {"matchingSize", histogram_json(t.matching_size)},
              {"minEdgeSize", histogram_json(t.min_edge)},
              {"maxEdgeSize", histogram_json(t.max_edge)},
              {"failures", failures}};
}

Tally tally_from(const json& j, const Board& b) {
  Tally t;
  t.processed = j.at("processed");
  t.ok = j.at("ok");
  t.survivors = histogram_from(j.at("survivors"));
  t.empty = histogram_from(j.at("empty"));
  t.eliminated = histogram_from(j.at("eliminated"));
  t.matching_size = histogram_from(j.at("matchingSize"));
  t.min_edge = histogram_from(j.at("minEdgeSize"));
  t.max_edge = histogram_from(j.at("maxEdgeSize"));
  for (const auto& f : j.at("failures")) t.failures.push_back(result_from(f, b));
  return t;
}

std::string now_iso() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

const char* mode_name(BatchMode m) { return m == BatchMode::Full ? "full" : "sample"; }

}  // namespace

std::string csv_header() { return "specIndex,caseKind,m1,m2,m3,m4,survivors,matchingSize,ok\n"; }

std::string csv_row(const CaseResult& r, const Board& b) {
  std::string row = std::to_string(r.spec.index) + ',' + case_letter(r.spec.kind);
  for (std::size_t k = 0; k < 4; ++k) {
    row += ',';
    if (k < r.spec.maker.size()) row += '"' + b.cell_of(r.spec.maker[k]).to_string() + '"';
  }
  row += ',' + std::to_string(r.survivors) + ',' + std::to_string(r.matching_size) + ',' + (r.ok ? "1" : "0");
  row += '\n';
  return row;
}

std::string ledger_json(const std::vector<Ledger>& ledgers, const Board& board) {
  json cases = json::array();
  json timing = json::array();
  bool success = true;
  for (const auto& l : ledgers) {
    json obs = json::array();
    for (auto [lo, hi] : l.observed_options) obs.push_back({lo, hi});
    cases.push_back(json{{"caseKind", std::string(1, case_letter(l.kind))},
                         {"mode", mode_name(l.mode)},
                         {"countOnly", l.count_only},
                         {"seed", l.seed},
                         {"sampleCount", l.sample_count},
                         {"shards", l.shards},
                         {"totalCases", l.total_cases},
                         {"workItems", l.work_items},
                         {"depthOptions", l.depth_options},
                         {"observedOptions", obs},
                         {"tally", tally_json(l.tally, board)},
                         {"failureCount", l.tally.failures.size()},
                         {"complete", l.complete()},
                         {"success", l.success()}});
    timing.push_back(json{{"caseKind", std::string(1, case_letter(l.kind))},
                          {"startedAt", l.started_at},
                          {"finishedAt", l.finished_at},
                          {"wallSeconds", l.wall_seconds},
                          {"resumed", l.resumed}});
    success = success && l.success();
  }
  json out{{"board", "7^3"}, {"success", success}, {"cases", cases}, {"timing", timing}};
  return out.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Batch

std::vector<std::uint64_t> sample_indices(std::uint64_t range, std::uint64_t count, std::uint64_t seed) {
  if (count > range) throw InvalidArgument("sample larger than the index space");
  // Floyd's algorithm: uniform without replacement.
  std::mt19937_64 rng(seed);
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(count) * 2);
  for (std::uint64_t j = range - count; j < range; ++j) {
    std::uniform_int_distribution<std::uint64_t> pick(0, j);
    const std::uint64_t t = pick(rng);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

/// Depth-first enumeration with undo; checks option counts and the
/// elimination arithmetic of every leaf without matching.
Ledger count_enumeration(const OpeningBook& book, const BatchOptions& opts) {
  Ledger l;
  l.kind = opts.kind;
  l.count_only = true;
  l.mode = BatchMode::Full;
  l.total_cases = case_count(opts.kind);
  l.work_items = l.total_cases;
  l.depth_options = depth_options(opts.kind);
  l.observed_options.assign(l.depth_options.size(), {1 << 30, 0});

  const Board& b = book.board();
  GameState s(book.board_ptr());
  std::vector<int> elim;
  auto observe = [&](std::size_t depth, int count) {
    auto& [lo, hi] = l.observed_options[depth];
    lo = std::min(lo, count);
    hi = std::max(hi, count);
  };
  auto breaker = [&]() -> std::uint32_t {
    CellId r = book.breaker_move(opts.kind, s);
    std::uint32_t bad = 0;
    if (r < 0 || !s.is_empty(r)) {
      bad = kOpeningUnavailable;
      r = s.first_empty();
    }
    elim.push_back(OpeningBook::newly_eliminated(s, r));
    s.place(Player::Breaker, r);
    return bad;
  };
  auto unbreak = [&] {
    s.undo();
    elim.pop_back();
  };
  const auto expected = OpeningBook::expected_eliminations(opts.kind);
  std::uint64_t index = 0;
  CaseResult leaf;
  leaf.spec.kind = opts.kind;
  auto finish_leaf = [&](std::uint32_t bad, const std::vector<CellId>& maker) {
    leaf.spec.index = index++;
    leaf.anomalies = bad;
    leaf.eliminated = elim;
    leaf.survivors = s.survivors_count();
    leaf.empty = s.empty_count();
    if (elim != expected) leaf.anomalies |= kEliminationMismatch;
    if (leaf.survivors != OpeningBook::expected_survivors(opts.kind)) leaf.anomalies |= kSurvivorMismatch;
    if (leaf.empty != OpeningBook::expected_empty(opts.kind)) leaf.anomalies |= kEmptyMismatch;
    leaf.ok = leaf.anomalies == 0;
    if (!leaf.ok) {
      leaf.spec.maker = maker;
      leaf.breaker.clear();
      for (const auto& m : s.history())
        if (m.player == Player::Breaker) leaf.breaker.push_back(m.cell);
    }
    l.tally.add(leaf);
  };

  std::vector<CellId> maker;
  auto play_maker = [&](CellId c) {
    s.place(Player::Maker, c);
    maker.push_back(c);
  };
  auto unplay_maker = [&] {
    s.undo();
    maker.pop_back();
  };
  // Innermost depth: every Empty cell, then Breaker's last opening reply.
  auto last_depth = [&](std::size_t depth, std::uint32_t bad) {
    int options = 0;
    for (CellId c = 0; c < b.cell_count(); ++c) {
      if (!s.is_empty(c)) continue;
      ++options;
      play_maker(c);
      const std::uint32_t b_bad = breaker();
      finish_leaf(bad | b_bad, maker);
      unbreak();
      unplay_maker();
    }
    observe(depth, options);
  };

  if (opts.kind == CaseKind::A) {
    play_maker(book.center());
    std::uint32_t bad1 = breaker();
    int options2 = 0;
    for (CellId m2 = 0; m2 < b.cell_count(); ++m2) {
      if (!s.is_empty(m2) || b.coord(m2, 0) > b.coord(m2, 1)) continue;
      ++options2;
      play_maker(m2);
      std::uint32_t bad2 = bad1 | breaker();
      int options3 = 0;
      for (CellId m3 = 0; m3 < b.cell_count(); ++m3) {
        if (!s.is_empty(m3)) continue;
        ++options3;
        play_maker(m3);
        std::uint32_t bad3 = bad2 | breaker();
        last_depth(2, bad3);
        unbreak();
        unplay_maker();
      }
      observe(1, options3);
      unbreak();
      unplay_maker();
    }
    observe(0, options2);
  } else if (opts.kind == CaseKind::B) {
    int options1 = 0;
    for (CellId m1 = 0; m1 < b.cell_count(); ++m1) {
      if (!s.is_empty(m1) || b.coord(m1, 0) > 4 || m1 == book.center()) continue;
      ++options1;
      play_maker(m1);
      std::uint32_t bad1 = breaker();
      int options2 = 0;
      for (CellId m2 = 0; m2 < b.cell_count(); ++m2) {
        if (!s.is_empty(m2) || b.coord(m2, 0) > 4) continue;
        ++options2;
        play_maker(m2);
        std::uint32_t bad2 = bad1 | breaker();
        last_depth(2, bad2);
        unbreak();
        unplay_maker();
      }
      observe(1, options2);
      unbreak();
      unplay_maker();
    }
    observe(0, options1);
  } else {
    const auto& pairs = residual_pairs(book);
    observe(0, static_cast<int>(pairs.size()));
    for (auto [m1, m2] : pairs) {
      play_maker(m1);
      std::uint32_t bad = breaker();
      play_maker(m2);
      bad |= breaker();
      last_depth(1, bad);
      unbreak();
      unplay_maker();
      unbreak();
      unplay_maker();
    }
  }
  return l;
}

struct ShardState {
  std::uint64_t begin = 0, end = 0, cursor = 0;
  std::uint64_t csv_bytes = 0;
  Tally tally;
};

std::string part_path(const std::string& base, int shard) { return base + ".part" + std::to_string(shard); }

json checkpoint_header(const BatchOptions& o, std::uint64_t work_items) {
  return json{{"caseKind", std::string(1, case_letter(o.kind))},
              {"mode", mode_name(o.mode)},
              {"seed", o.mode == BatchMode::Sample ? o.seed : 0},
              {"sampleCount", o.mode == BatchMode::Sample ? o.sample_count : 0},
              {"shards", o.shards},
              {"workItems", work_items},
              {"perCase", !o.per_case_path.empty()}};
}

void write_checkpoint(const std::string& path, const json& header, const std::vector<ShardState>& shards,
                      const Board& b) {
  json j = header;
  json arr = json::array();
  for (const auto& s : shards)
    arr.push_back(json{{"begin", s.begin},
                       {"end", s.end},
                       {"cursor", s.cursor},
                       {"csvBytes", s.csv_bytes},
                       {"tally", tally_json(s.tally, b)}});
  j["shard"] = arr;
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write checkpoint " + tmp);
    out << j.dump() << '\n';
    if (!out) throw std::runtime_error("failed writing checkpoint " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

Ledger run_batch(const BatchOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string started = now_iso();
  OpeningBook book(enumerate_lines(7, 3));
  const Board& board = book.board();

  if (opts.count_only) {
    Ledger l = count_enumeration(book, opts);
    l.seed = 0;
    l.shards = 1;
    l.started_at = started;
    l.finished_at = now_iso();
    l.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return l;
  }

  const std::uint64_t range = case_count(opts.kind);
  std::vector<std::uint64_t> sample;
  if (opts.mode == BatchMode::Sample) sample = sample_indices(range, std::min(opts.sample_count, range), opts.seed);
  const std::uint64_t work = opts.mode == BatchMode::Full ? range : sample.size();
  auto work_index = [&](std::uint64_t pos) { return opts.mode == BatchMode::Full ? pos : sample[pos]; };

  const int shard_count = std::max(1, opts.shards);
  std::vector<ShardState> shards(static_cast<std::size_t>(shard_count));
  for (int k = 0; k < shard_count; ++k) {
    shards[k].begin = work * static_cast<std::uint64_t>(k) / static_cast<std::uint64_t>(shard_count);
    shards[k].end = work * static_cast<std::uint64_t>(k + 1) / static_cast<std::uint64_t>(shard_count);
    shards[k].cursor = shards[k].begin;
  }

  Ledger l;
  l.kind = opts.kind;
  l.mode = opts.mode;
  l.seed = opts.mode == BatchMode::Sample ? opts.seed : 0;
  l.sample_count = opts.mode == BatchMode::Sample ? work : 0;
  l.shards = shard_count;
  l.total_cases = range;
  l.work_items = work;
  l.depth_options = depth_options(opts.kind);
  l.started_at = started;

  const json header = checkpoint_header(opts, work);
  if (!opts.checkpoint_path.empty() && std::filesystem::exists(opts.checkpoint_path)) {
    std::ifstream in(opts.checkpoint_path);
    json saved;
    try {
      in >> saved;
    } catch (const json::exception& e) {
      throw std::runtime_error("unreadable checkpoint " + opts.checkpoint_path + ": " + e.what());
    }
    json saved_header = saved;
    saved_header.erase("shard");
    if (saved_header != header)
      throw std::runtime_error("checkpoint " + opts.checkpoint_path + " was written with different options");
    for (int k = 0; k < shard_count; ++k) {
      const auto& s = saved.at("shard").at(static_cast<std::size_t>(k));
      shards[k].cursor = s.at("cursor");
      shards[k].csv_bytes = s.at("csvBytes");
      shards[k].tally = tally_from(s.at("tally"), board);
    }
    l.resumed = true;
  }

  std::mutex checkpoint_mutex;
  std::vector<ShardState> snapshot = shards;
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&](int k) {
    try {
      ShardState& sh = shards[k];
      CaseRunner runner(book);
      std::ofstream csv;
      if (!opts.per_case_path.empty()) {
        const std::string part = part_path(opts.per_case_path, k);
        if (l.resumed && std::filesystem::exists(part)) std::filesystem::resize_file(part, sh.csv_bytes);
        else if (!l.resumed || sh.csv_bytes == 0) std::ofstream(part, std::ios::trunc);
        csv.open(part, std::ios::app | std::ios::binary);
        if (!csv) throw std::runtime_error("cannot open " + part);
      }
      auto save = [&] {
        if (csv.is_open()) {
          csv.flush();
          sh.csv_bytes = static_cast<std::uint64_t>(csv.tellp());
        }
        if (opts.checkpoint_path.empty()) return;
        std::lock_guard lock(checkpoint_mutex);
        snapshot[k] = sh;
        write_checkpoint(opts.checkpoint_path, header, snapshot, board);
      };
      std::uint64_t since = 0, done = 0;
      while (sh.cursor < sh.end && (opts.stop_after == 0 || done++ < opts.stop_after)) {
        const CaseSpec spec = runner.decode(opts.kind, work_index(sh.cursor));
        const CaseResult r = runner.run(spec);
        sh.tally.add(r);
        if (csv.is_open()) csv << csv_row(r, board);
        ++sh.cursor;
        if (++since == opts.checkpoint_every) {
          since = 0;
          save();
          if (opts.verbose) {
            std::lock_guard lock(failure_mutex);
            std::cerr << "[shard " << k << "] " << sh.cursor - sh.begin << "/" << sh.end - sh.begin
                      << " failures=" << sh.tally.failures.size() << "\n";
          }
        }
      }
      save();
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  if (shard_count == 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    for (int k = 0; k < shard_count; ++k) threads.emplace_back(worker, k);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (const auto& sh : shards) l.tally.merge(sh.tally);

  const bool complete = std::all_of(shards.begin(), shards.end(), [](const ShardState& s) { return s.cursor == s.end; });
  if (complete && !opts.per_case_path.empty()) {
    std::ofstream out(opts.per_case_path, std::ios::trunc | std::ios::binary);
    out << csv_header();
    for (int k = 0; k < shard_count; ++k) {
      const std::string part = part_path(opts.per_case_path, k);
      std::ifstream in(part, std::ios::binary);
      out << in.rdbuf();
      in.close();
      std::filesystem::remove(part);
    }
    if (!out) throw std::runtime_error("failed writing " + opts.per_case_path);
  }

  l.finished_at = now_iso();
  l.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return l;
}

Ledger residual_case_sweep(const BatchOptions& opts) {
  BatchOptions o = opts;
  o.kind = CaseKind::Residual;
  return run_batch(o);
}

}  // namespace ttt
