#include "ttt/danger.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

namespace ttt {

double DyadicDanger::value() const { return std::ldexp(static_cast<double>(numerator), -scale); }

std::string DyadicDanger::fraction() const {
  std::uint64_t p = numerator;
  int k = scale;
  while (k > 0 && p % 2 == 0 && p != 0) {
    p /= 2;
    --k;
  }
  if (p == 0) return "0";
  if (k == 0) return std::to_string(p);
  return std::to_string(p) + "/" + std::to_string(std::uint64_t{1} << k);
}

namespace {

std::uint64_t line_weight(const GameState& s, LineId l) {
  return std::uint64_t{1} << (s.board().n() - s.empty_on(l));
}

CellId argmax_danger(const GameState& s) {
  CellId best = -1;
  std::uint64_t best_value = 0;
  for (CellId c = 0; c < s.board().cell_count(); ++c) {
    if (!s.is_empty(c)) continue;
    const std::uint64_t v = danger_through(s, c).numerator;
    if (best < 0 || v > best_value) {
      best = c;
      best_value = v;
    }
  }
  if (best < 0) throw IllegalMove("board is full");
  return best;
}

CellId center_cell(const Board& b) {
  std::vector<int> coords(static_cast<std::size_t>(b.d()), (b.n() + 1) / 2);
  return b.id_of(Cell(std::move(coords)));
}

}  // namespace

DyadicDanger total_danger(const GameState& s) {
  DyadicDanger d{0, s.board().n()};
  for (LineId l = 0; l < s.board().line_count(); ++l)
    if (s.is_survivor(l)) d.numerator += line_weight(s, l);
  return d;
}

DyadicDanger danger_through(const GameState& s, CellId c) {
  DyadicDanger d{0, s.board().n()};
  for (LineId l : s.board().lines_through(c))
    if (s.is_survivor(l)) d.numerator += line_weight(s, l);
  return d;
}

CellId greedy_maker(const GameState& s) { return argmax_danger(s); }
CellId greedy_breaker(const GameState& s) { return argmax_danger(s); }

DangerTrace simulate(int n, int d, const SimulationOptions& opts) {
  return simulate_from(GameState(enumerate_lines(n, d)), opts);
}

DangerTrace simulate_from(GameState state, const SimulationOptions& opts) {
  DangerTrace t;
  std::mt19937_64 rng(opts.seed);
  DyadicDanger current = total_danger(state);
  t.entries.push_back({0, std::nullopt, -1, current});
  t.after_maker.push_back(current);
  if (current.below_one()) t.first_below_one = 0;

  int round = 0;
  while (state.empty_count() > 0 && (opts.max_rounds == 0 || round < opts.max_rounds)) {
    ++round;
    CellId m;
    if (opts.maker == MakerMode::Greedy) {
      m = greedy_maker(state);
    } else if (round == 1 && opts.center_first && state.board().n() % 2 == 1 &&
               state.is_empty(center_cell(state.board()))) {
      m = center_cell(state.board());
    } else {
      std::uniform_int_distribution<CellId> pick(0, state.board().cell_count() - 1);
      do {
        m = pick(rng);
      } while (!state.is_empty(m));
    }
    current.numerator += danger_through(state, m).numerator;
    state.place(Player::Maker, m);
    if (current != total_danger(state)) t.consistent = false;
    t.entries.push_back({round, Player::Maker, m, current});
    t.after_maker.push_back(current);
    if (!t.first_below_one && current.below_one()) t.first_below_one = round;
    if (state.maker_has_won()) t.maker_won = true;
    if (state.empty_count() == 0) break;

    const CellId b = greedy_breaker(state);
    current.numerator -= danger_through(state, b).numerator;
    state.place(Player::Breaker, b);
    if (current != total_danger(state)) t.consistent = false;
    t.entries.push_back({round, Player::Breaker, b, current});
  }
  return t;
}

EsCondition es_condition(int n, int d) {
  BoardPtr board = enumerate_lines(n, d);
  EsCondition e;
  e.delta = board->max_degree();
  e.lines = board->line_count();
  e.threshold = std::int64_t{1} << n;
  e.holds = e.delta + e.lines < e.threshold;
  return e;
}

void write_trace_csv(std::ostream& out, const Board& board, const DangerTrace& t) {
  out << "i,mover,cell,numerator,scale,danger\n";
  for (const auto& e : t.entries) {
    out << e.round << ',';
    out << (e.mover ? std::string(1, player_letter(*e.mover)) : std::string("-")) << ',';
    out << (e.cell >= 0 ? '"' + board.cell_of(e.cell).to_string() + '"' : std::string("-")) << ',';
    out << e.danger.numerator << ',' << e.danger.scale << ',' << std::setprecision(10) << e.danger.value()
        << '\n';
  }
}

void write_trace_series(std::ostream& out, const DangerTrace& t) {
  for (std::size_t i = 0; i < t.after_maker.size(); ++i)
    out << i << ' ' << std::setprecision(10) << t.after_maker[i].value() << '\n';
}

void write_trace_svg(std::ostream& out, const DangerTrace& t, const std::string& title) {
  const double width = 640, height = 400, left = 60, right = 20, top = 40, bottom = 50;
  const double plot_w = width - left - right, plot_h = height - top - bottom;
  const auto count = t.after_maker.size();
  double ymax = 1.0;
  for (const auto& d : t.after_maker) ymax = std::max(ymax, d.value());
  ymax *= 1.05;
  const double xmax = std::max<double>(1.0, static_cast<double>(count) - 1);
  auto px = [&](double i) { return left + plot_w * i / xmax; };
  auto py = [&](double v) { return top + plot_h * (1.0 - v / ymax); };

  out << std::fixed << std::setprecision(2);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title << "</text>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
      << top + plot_h << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << py(1.0) << "\" x2=\"" << left + plot_w << "\" y2=\"" << py(1.0)
      << "\" stroke=\"red\" stroke-dasharray=\"4,4\"/>\n";
  out << "<text x=\"" << left - 5 << "\" y=\"" << py(1.0) + 4 << "\" text-anchor=\"end\">1</text>\n";
  out << "<text x=\"" << left - 5 << "\" y=\"" << py(ymax) + 12 << "\" text-anchor=\"end\">"
      << std::setprecision(1) << ymax << "</text>\n"
      << std::setprecision(2);
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">move i</text>\n";
  out << "<text x=\"" << left + plot_w << "\" y=\"" << top + plot_h + 15 << "\" text-anchor=\"end\">"
      << count - 1 << "</text>\n";
  out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < count; ++i) out << px(static_cast<double>(i)) << ',' << py(t.after_maker[i].value()) << ' ';
  out << "\"/>\n";
  if (t.first_below_one) {
    const double x = px(*t.first_below_one);
    out << "<line x1=\"" << x << "\" y1=\"" << top << "\" x2=\"" << x << "\" y2=\"" << top + plot_h
        << "\" stroke=\"gray\" stroke-dasharray=\"2,3\"/>\n";
    out << "<text x=\"" << x + 4 << "\" y=\"" << top + 12 << "\">i = " << *t.first_below_one << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace ttt
