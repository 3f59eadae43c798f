// ttt: command-line front end for the Maker-Breaker n^d toolkit.

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ttt/bigamy.hpp"
#include "ttt/danger.hpp"
#include "ttt/matching.hpp"
#include "ttt/pairing.hpp"
#include "ttt/play_service.hpp"
#include "ttt/prover.hpp"

using namespace ttt;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

std::string grouped(std::uint64_t v) {
  std::string s = std::to_string(v);
  for (int i = static_cast<int>(s.size()) - 3; i > 0; i -= 3) s.insert(static_cast<std::size_t>(i), ",");
  return s;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << text;
}

/// Pairing files come either in the "n d scope" text form or as grids.
PairingStrategy load_pairing(const std::string& path) {
  const std::string text = slurp(path);
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream tok(line);
    std::vector<std::string> words;
    for (std::string w; tok >> w;) words.push_back(w);
    if (words.empty()) continue;
    std::istringstream in(text);
    if (words.size() == 3 && (words[2] == "pregame" || words[2] == "midgame")) return read_pairing(in);
    return parse_grid_pairing(in);
  }
  throw InvalidArgument(path + " is empty");
}

GameState load_position(const std::string& path) { return GameState::parse(slurp(path)); }

PlayServer* g_server = nullptr;
void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maker-Breaker n^d tic-tac-toe analysis"};
  app.require_subcommand(1);

  // lines
  auto* lines = app.add_subcommand("lines", "count winning lines");
  int ln = 7, ld = 3;
  bool degrees = false;
  lines->add_option("--n", ln, "side length")->required();
  lines->add_option("--d", ld, "dimension")->required();
  lines->add_flag("--degrees", degrees, "print the cell degree histogram");

  // pairing
  auto* pairing = app.add_subcommand("pairing", "pairing strategies");
  pairing->require_subcommand(1);
  auto* pgen = pairing->add_subcommand("gen", "generate a pre-game pairing from a matching");
  int pn = 8, pd = 3;
  std::string pout;
  pgen->add_option("--n", pn)->required();
  pgen->add_option("--d", pd)->required();
  pgen->add_option("--out", pout, "output file");
  auto* pverify = pairing->add_subcommand("verify", "verify a pairing file");
  std::string pfile;
  pverify->add_option("file", pfile)->required();
  auto* pextend = pairing->add_subcommand("extend", "extend a planar pairing to the next odd/even size");
  std::string efile, eout;
  pextend->add_option("file", efile)->required();
  pextend->add_option("--out", eout)->required();

  // prove
  auto* prove = app.add_subcommand("prove", "7^3 casework: openings, matchings, pairings");
  std::string pcase = "both", pmode = "sample", checkpoint, ledger;
  std::uint64_t count = 100000, seed = 1;
  int shards = 1;
  bool per_case = false, count_only = false, verbose = false;
  prove->add_option("--case", pcase, "a | b | both")->check(CLI::IsMember({"a", "b", "both"}));
  prove->add_option("--mode", pmode, "full | sample")->check(CLI::IsMember({"full", "sample"}));
  prove->add_option("--count", count, "samples per case kind");
  prove->add_option("--seed", seed, "sampling seed");
  prove->add_option("--shards", shards, "worker threads")->check(CLI::PositiveNumber);
  prove->add_option("--checkpoint", checkpoint, "checkpoint file prefix (resumes when present)");
  prove->add_option("--ledger", ledger, "ledger JSON output");
  prove->add_flag("--per-case", per_case, "also write one CSV row per configuration");
  prove->add_flag("--count-only", count_only, "enumerate without matching");
  prove->add_flag("-v,--verbose", verbose, "progress on stderr");
  auto* residual = prove->add_subcommand("residual", "openings with no half-cube normalization");
  std::string rledger;
  residual->add_option("--ledger", rledger, "ledger JSON output");

  // danger
  auto* danger = app.add_subcommand("danger", "danger potential");
  danger->require_subcommand(1);
  auto* dsim = danger->add_subcommand("sim", "greedy Breaker simulation");
  int dn = 7, dd = 3;
  std::string dmaker = "greedy", dout, dplot, dseries;
  std::uint64_t dseed = 1;
  dsim->add_option("--n", dn)->required();
  dsim->add_option("--d", dd)->required();
  dsim->add_option("--maker", dmaker)->check(CLI::IsMember({"greedy", "random"}));
  dsim->add_option("--seed", dseed);
  dsim->add_option("--out", dout, "trace CSV");
  dsim->add_option("--series", dseries, "two-column (i, D_i) file");
  dsim->add_option("--plot", dplot, "SVG chart of D_i");
  auto* des = danger->add_subcommand("es", "greedy-win condition: max degree + lines < 2^n");
  int en = 8, ed = 3;
  des->add_option("--n", en)->required();
  des->add_option("--d", ed)->required();

  // bigamy
  auto* bigamy = app.add_subcommand("bigamy", "union-size condition on survivor families");
  bigamy->require_subcommand(1);
  auto* bcheck = bigamy->add_subcommand("check", "exhaustive check of every subfamily");
  std::string bfile;
  bcheck->add_option("position", bfile)->required();
  auto* bprobe = bigamy->add_subcommand("probe", "random subfamilies of a position");
  std::string prfile, prout;
  std::vector<int> sizes{1, 2, 5, 10, 20, 50, 100, 166};
  std::uint64_t samples = 1000, prseed = 1;
  bprobe->add_option("position", prfile)->required();
  bprobe->add_option("--sizes", sizes)->delimiter(',');
  bprobe->add_option("--samples", samples);
  bprobe->add_option("--seed", prseed);
  bprobe->add_option("--out", prout, "report JSON (default stdout)");

  // play
  auto* play = app.add_subcommand("play", "interactive play service");
  play->require_subcommand(1);
  auto* serve = play->add_subcommand("serve", "start the HTTP API");
  int port = 8080;
  std::string host = "127.0.0.1";
  serve->add_option("--port", port);
  serve->add_option("--host", host);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*lines) {
      auto b = enumerate_lines(ln, ld);
      std::cout << b->line_count() << "\n";
      if (degrees) {
        std::map<int, int> hist;
        for (CellId c = 0; c < b->cell_count(); ++c) ++hist[b->cell_degree(c)];
        for (auto [deg, cnt] : hist) std::cout << "degree " << deg << ": " << cnt << " cells\n";
      }
      return kOk;
    }

    if (*pgen) {
      auto r = generate_pregame_pairing(pn, pd);
      std::cout << pn << "^" << pd << ": " << r.lines << " lines, " << r.cells << " cells, matching "
                << r.matching_size << " of " << r.required << "\n";
      if (!r.strategy) {
        std::cout << "no pre-game pairing: " << r.reason << "\n";
        return kFailed;
      }
      if (!pout.empty()) write_file(pout, write_pairing(*r.strategy));
      return kOk;
    }
    if (*pverify) {
      auto s = load_pairing(pfile);
      std::optional<GameState> pos;
      if (s.scope() == PairingScope::Midgame) pos = s.position_state();
      auto r = verify_pairing(s.board(), pos ? &*pos : nullptr, s);
      std::cout << (r.valid ? "valid" : "invalid") << ": " << r.covered_lines << "/" << r.in_scope_lines
                << " lines covered, " << s.pairs().size() << " pairs, " << s.free_cells().size() << " free";
      if (!r.valid) std::cout << " (" << r.reason << ")";
      std::cout << "\n";
      return r.valid ? kOk : kFailed;
    }
    if (*pextend) {
      auto big = extend_pairing_planar(load_pairing(efile));
      auto r = verify_pairing(big);
      write_file(eout, write_pairing(big));
      std::cout << big.board().n() << "^2 extension " << (r.valid ? "valid" : "invalid") << ": "
                << r.covered_lines << "/" << r.in_scope_lines << " lines covered\n";
      return r.valid ? kOk : kFailed;
    }

    if (*residual) {
      BatchOptions o;
      o.kind = CaseKind::Residual;
      o.mode = BatchMode::Full;
      o.shards = shards;
      o.verbose = verbose;
      auto l = residual_case_sweep(o);
      std::cout << "case R: " << grouped(l.tally.processed) << " configurations, " << grouped(l.tally.ok) << " ok, "
                << l.tally.failures.size() << " failures\n";
      if (!rledger.empty()) write_file(rledger, ledger_json({l}, *enumerate_lines(7, 3)));
      return l.success() ? kOk : kFailed;
    }
    if (*prove) {
      std::vector<CaseKind> kinds;
      if (pcase != "b") kinds.push_back(CaseKind::A);
      if (pcase != "a") kinds.push_back(CaseKind::B);
      std::vector<Ledger> ledgers;
      bool ok = true;
      for (CaseKind k : kinds) {
        BatchOptions o;
        o.kind = k;
        o.mode = pmode == "full" ? BatchMode::Full : BatchMode::Sample;
        o.sample_count = count;
        o.seed = seed;
        o.shards = shards;
        o.count_only = count_only;
        o.verbose = verbose;
        const std::string tag(1, case_letter(k));
        if (!checkpoint.empty() && !count_only) o.checkpoint_path = checkpoint + "." + tag + ".json";
        if (per_case && !count_only) {
          std::string base = ledger.empty() ? "prove" : ledger;
          if (base.size() > 5 && base.ends_with(".json")) base.resize(base.size() - 5);
          o.per_case_path = base + "-" + tag + ".csv";
        }
        Ledger l = run_batch(o);
        std::cout << "case " << tag << ": " << grouped(l.tally.processed) << " configurations";
        if (count_only) {
          std::cout << " (options per depth";
          const char* sep = " ";
          for (auto [lo, hi] : l.observed_options) {
            std::cout << sep << lo;
            if (hi != lo) std::cout << ".." << hi;
            sep = "/";
          }
          std::cout << ")";
        }
        std::cout << ", " << grouped(l.tally.ok) << " ok, " << l.tally.failures.size() << " failures";
        if (!count_only) {
          std::cout << "; matching sizes";
          for (auto [m, c] : l.tally.matching_size) std::cout << " " << m << "x" << grouped(c);
        }
        std::cout << "\n";
        for (std::size_t i = 0; i < l.tally.failures.size() && i < 10; ++i) {
          const auto& f = l.tally.failures[i];
          std::cout << "  failure " << f.spec.index << ": " << describe_anomalies(f.anomalies) << "\n";
        }
        ok = ok && l.success();
        ledgers.push_back(std::move(l));
      }
      if (!ledger.empty()) write_file(ledger, ledger_json(ledgers, *enumerate_lines(7, 3)));
      return ok ? kOk : kFailed;
    }

    if (*dsim) {
      SimulationOptions o;
      o.maker = dmaker == "greedy" ? MakerMode::Greedy : MakerMode::Random;
      o.seed = dseed;
      auto t = simulate(dn, dd, o);
      auto b = enumerate_lines(dn, dd);
      std::cout << "D_0 = " << t.after_maker.front().fraction() << "\n";
      if (t.first_below_one)
        std::cout << "first i with D_i < 1: " << *t.first_below_one << " (D_i = "
                  << t.after_maker[static_cast<std::size_t>(*t.first_below_one)].fraction() << ")\n";
      else
        std::cout << "D_i never drops below 1\n";
      std::cout << "maker " << (t.maker_won ? "won" : "did not win") << "\n";
      if (!dout.empty()) {
        std::ofstream out(dout);
        write_trace_csv(out, *b, t);
      }
      if (!dseries.empty()) {
        std::ofstream out(dseries);
        write_trace_series(out, t);
      }
      if (!dplot.empty()) {
        std::ofstream out(dplot);
        write_trace_svg(out, t, "D_i on " + std::to_string(dn) + "^" + std::to_string(dd));
      }
      return t.consistent ? kOk : kFailed;
    }
    if (*des) {
      auto e = es_condition(en, ed);
      std::cout << e.delta << " + " << e.lines << " < " << e.threshold << ": " << (e.holds ? "holds" : "fails") << "\n";
      return kOk;
    }

    if (*bcheck) {
      auto state = load_position(bfile);
      auto h = state.surviving_hypergraph();
      auto r = hall_equivalence_check(h);
      auto big = exhaustive_bigamy_check(h);
      std::cout << h.edge_count() << " survivors, " << h.vertex_count << " empty cells; " << big.families_checked
                << " subfamilies checked: " << (big.holds ? "holds" : "violated") << "\n";
      if (!big.holds) {
        std::cout << "violating family (edge ids):";
        for (int e : big.violator) std::cout << " " << e;
        std::cout << "; union " << big.violator_union << " < " << 2 * big.violator.size() << "\n";
      }
      std::cout << "matching " << r.matching_size << " of " << r.required << "; "
                << (r.agree ? "agrees" : "DISAGREES") << " with the union condition\n";
      return big.holds && r.agree ? kOk : kFailed;
    }
    if (*bprobe) {
      auto state = load_position(prfile);
      auto rep = probe_7cube(state, sizes, samples, prseed);
      const std::string js = probe_report_json(rep);
      if (prout.empty()) std::cout << js;
      else write_file(prout, js);
      return kOk;
    }

    if (*serve) {
      PlayService service;
      PlayServer server(service);
      const int bound = server.bind(host, port);
      if (bound < 0) {
        std::cerr << "cannot bind " << host << ":" << port << "\n";
        return kFailed;
      }
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "listening on http://" << host << ":" << bound << "\n" << std::flush;
      server.listen();
      g_server = nullptr;
      return kOk;
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}
