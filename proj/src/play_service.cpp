#include "ttt/play_service.hpp"

#include <random>

#include "httplib.h"
#include "json.hpp"
#include "ttt/danger.hpp"
#include "ttt/matching.hpp"

namespace ttt {

using nlohmann::json;

const char* engine_mode_name(EngineMode m) {
  switch (m) {
    case EngineMode::PrescribedPairing: return "prescribed-pairing";
    case EngineMode::PregamePairing: return "pregame-pairing";
    case EngineMode::DangerGreedy: return "danger-greedy";
  }
  return "?";
}

std::optional<EngineMode> parse_engine_mode(const std::string& s) {
  for (auto m : {EngineMode::PrescribedPairing, EngineMode::PregamePairing, EngineMode::DangerGreedy})
    if (s == engine_mode_name(m)) return m;
  return std::nullopt;
}

const char* session_status_name(SessionStatus s) {
  switch (s) {
    case SessionStatus::InProgress: return "in-progress";
    case SessionStatus::MakerWon: return "maker-won";
    case SessionStatus::BoardFull: return "board-full";
  }
  return "?";
}

// ---------------------------------------------------------------------------

Session::Session(std::string id, BoardPtr board, EngineMode mode, std::optional<PairingStrategy> pregame)
    : id_(std::move(id)), mode_(mode), state_(board), strategy_(std::move(pregame)) {
  if (mode_ == EngineMode::PrescribedPairing) {
    book_.emplace(board);
    to_canonical_ = Symmetry::identity(3);
  }
  if (mode_ == EngineMode::PregamePairing && !strategy_)
    throw InvalidArgument("pregame mode needs a pairing");
}

CellId Session::to_real(CellId canonical) const {
  return to_canonical_.inverse().apply(state_.board(), canonical);
}

CellId Session::play(CellId maker) {
  if (status_ != SessionStatus::InProgress) throw IllegalMove("game is over");
  state_.place(Player::Maker, maker);
  if (state_.maker_has_won()) {
    status_ = SessionStatus::MakerWon;
    return -1;
  }
  if (state_.empty_count() == 0) {
    status_ = SessionStatus::BoardFull;
    return -1;
  }

  CellId reply = -1;
  switch (mode_) {
    case EngineMode::PregamePairing: reply = breaker_response(state_, *strategy_, maker); break;
    case EngineMode::DangerGreedy: reply = greedy_breaker(state_); break;
    case EngineMode::PrescribedPairing: reply = prescribed_reply(maker); break;
  }
  state_.place(Player::Breaker, reply);

  if (mode_ == EngineMode::PrescribedPairing && !strategy_ && !fell_back_ && kind_ &&
      static_cast<int>(state_.history().size()) == 2 * OpeningBook::opening_rounds(*kind_))
    form_strategy();
  if (state_.empty_count() == 0) status_ = SessionStatus::BoardFull;
  return reply;
}

CellId Session::prescribed_reply(CellId maker) {
  if (strategy_) return breaker_response(state_, *strategy_, maker);
  if (fell_back_) return greedy_breaker(state_);

  const Board& b = state_.board();
  const int round = static_cast<int>(state_.history().size() + 1) / 2;
  if (round == 1) {
    kind_ = maker == book_->center() ? CaseKind::A : CaseKind::B;
    canonical_.emplace(state_.board_ptr());
    canonical_->place(Player::Maker, maker);
  } else if (round == 2) {
    if (*kind_ == CaseKind::A) {
      to_canonical_ = normalize_case_a(b.cell_of(maker)).symmetry;
    } else {
      const auto& h = state_.history();
      auto norm = normalize_case_b(b.cell_of(h[0].cell), b.cell_of(maker));
      if (norm.symmetry) {
        to_canonical_ = *norm.symmetry;
      } else {
        kind_ = CaseKind::Residual;
        to_canonical_ = Symmetry::identity(3);
      }
    }
    canonical_.emplace(state_.board_ptr());
    for (const Move& m : state_.history()) canonical_->place(m.player, to_canonical_.apply(b, m.cell));
  } else {
    canonical_->place(Player::Maker, to_canonical_.apply(b, maker));
  }

  const CellId c = book_->breaker_move(*kind_, *canonical_);
  if (c < 0 || !canonical_->is_empty(c)) {
    fell_back_ = true;
    return greedy_breaker(state_);
  }
  canonical_->place(Player::Breaker, c);
  return to_real(c);
}

void Session::form_strategy() {
  const Hypergraph h = state_.surviving_hypergraph();
  if (h.edge_count() == 0) {
    fell_back_ = true;
    return;
  }
  const auto g = build_doubled_graph(h);
  const Matching m = hopcroft_karp(g);
  if (m.size != g.x_count) {
    fell_back_ = true;
    return;
  }
  PairingStrategy s = strategy_from_matching(state_, h, m);
  const auto report = verify_pairing(s.board(), &state_, s);
  if (!report.valid) throw std::logic_error("session pairing failed verification: " + report.reason);
  strategy_ = std::move(s);
}

// ---------------------------------------------------------------------------

namespace {

ServiceResponse error(int status, const std::string& message) {
  return {status, json{{"error", message}}.dump()};
}

json cell_json(const Board& b, CellId c) {
  if (c < 0) return nullptr;
  const Cell cell = b.cell_of(c);
  return std::vector<int>(cell.coords().begin(), cell.coords().end());
}

json danger_json(const GameState& s) {
  const auto d = total_danger(s);
  return json{{"numerator", d.numerator}, {"scale", d.scale}};
}

json state_json(Session& s) {
  const GameState& st = s.state();
  const Board& b = st.board();
  json moves = json::array();
  for (const Move& m : st.history())
    moves.push_back({{"player", m.player == Player::Maker ? "maker" : "breaker"}, {"cell", cell_json(b, m.cell)}});
  std::string grid(static_cast<std::size_t>(b.cell_count()), '.');
  for (const Move& m : st.history()) grid[static_cast<std::size_t>(m.cell)] = m.player == Player::Maker ? 'X' : 'O';
  const auto kind = s.opening_kind();
  return json{{"id", s.id()},
              {"n", b.n()},
              {"d", b.d()},
              {"engineMode", engine_mode_name(s.mode())},
              {"status", session_status_name(s.status())},
              {"survivors", st.survivors_count()},
              {"emptyCount", st.empty_count()},
              {"danger", danger_json(st)},
              {"moves", moves},
              {"board", grid},
              {"strategyFormed", s.strategy().has_value()},
              {"openingCase", kind ? json(std::string(1, case_letter(*kind))) : json(nullptr)},
              {"fallback", s.fell_back()}};
}

std::optional<json> parse_body(const std::string& body) {
  try {
    json j = json::parse(body);
    if (!j.is_object()) return std::nullopt;
    return j;
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

}  // namespace

PlayService::PlayService() : salt_(std::random_device{}()) {}

std::size_t PlayService::session_count() {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

std::shared_ptr<Session> PlayService::find(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::optional<PairingStrategy> PlayService::pregame_for(int n, int d) {
  {
    std::lock_guard lock(mutex_);
    auto it = pregame_cache_.find({n, d});
    if (it != pregame_cache_.end()) return it->second;
  }
  auto r = generate_pregame_pairing(n, d);
  std::lock_guard lock(mutex_);
  pregame_cache_.emplace(std::pair{n, d}, r.strategy);
  return r.strategy;
}

ServiceResponse PlayService::create_game(const std::string& body) {
  const auto j = parse_body(body);
  if (!j) return error(400, "body must be a JSON object");
  if (!j->contains("n") || !j->contains("d") || !(*j)["n"].is_number_integer() || !(*j)["d"].is_number_integer())
    return error(400, "n and d are required integers");
  const int n = (*j)["n"], d = (*j)["d"];
  if (n < 2 || n > 9 || d < 1 || d > 3) return error(400, "supported boards are 2 <= n <= 9, 1 <= d <= 3");

  std::optional<EngineMode> mode;
  if (j->contains("engineMode") && !(*j)["engineMode"].is_null()) {
    if (!(*j)["engineMode"].is_string()) return error(400, "engineMode must be a string");
    mode = parse_engine_mode((*j)["engineMode"].get<std::string>());
    if (!mode) return error(400, "unknown engineMode");
  }
  const bool cube7 = n == 7 && d == 3;
  if (mode == EngineMode::PrescribedPairing && !cube7) return error(400, "prescribed-pairing is only defined for 7^3");

  std::optional<PairingStrategy> pregame;
  if (!mode || mode == EngineMode::PregamePairing) {
    if (!(cube7 && !mode)) pregame = pregame_for(n, d);
    if (mode == EngineMode::PregamePairing && !pregame)
      return error(400, "this board has no pre-game pairing");
    if (!mode) mode = cube7 ? EngineMode::PrescribedPairing : pregame ? EngineMode::PregamePairing : EngineMode::DangerGreedy;
  }
  if (*mode != EngineMode::PregamePairing) pregame.reset();

  std::shared_ptr<Session> s;
  {
    std::lock_guard lock(mutex_);
    std::mt19937_64 mix(salt_ ^ next_id_);
    char buf[40];
    std::snprintf(buf, sizeof buf, "g%llu-%08llx", static_cast<unsigned long long>(next_id_),
                  static_cast<unsigned long long>(mix() & 0xffffffffu));
    ++next_id_;
    s = std::make_shared<Session>(buf, enumerate_lines(n, d), *mode, std::move(pregame));
    sessions_[s->id()] = s;
  }
  std::lock_guard lock(s->mutex());
  return {201, json{{"id", s->id()}, {"state", state_json(*s)}}.dump()};
}

ServiceResponse PlayService::post_move(const std::string& id, const std::string& body) {
  auto s = find(id);
  if (!s) return error(404, "unknown session");
  const auto j = parse_body(body);
  if (!j || !j->contains("cell") || !(*j)["cell"].is_array()) return error(400, "body must be {\"cell\": [..]}");

  std::lock_guard lock(s->mutex());
  const Board& b = s->state().board();
  std::vector<int> coords;
  for (const auto& v : (*j)["cell"]) {
    if (!v.is_number_integer()) return error(400, "cell coordinates must be integers");
    coords.push_back(v.get<int>());
  }
  const Cell cell(coords);
  if (!b.contains(cell)) return error(400, "cell " + cell.to_string() + " is not on the board");
  const CellId c = b.id_of(cell);
  if (s->status() != SessionStatus::InProgress) return error(409, "game is over");
  if (!s->state().is_empty(c)) return error(409, "cell " + cell.to_string() + " is occupied");

  json partner = nullptr;
  if (s->strategy()) partner = cell_json(b, s->strategy()->partner_of(c));
  const CellId reply = s->play(c);
  json out{{"makerMove", cell_json(b, c)},
           {"breakerMove", cell_json(b, reply)},
           {"survivors", s->state().survivors_count()},
           {"danger", danger_json(s->state())},
           {"status", session_status_name(s->status())},
           {"strategyFormed", s->strategy().has_value()}};
  if (!partner.is_null()) out["pairPartner"] = partner;
  return {200, out.dump()};
}

ServiceResponse PlayService::get_game(const std::string& id) {
  auto s = find(id);
  if (!s) return error(404, "unknown session");
  std::lock_guard lock(s->mutex());
  return {200, state_json(*s).dump()};
}

ServiceResponse PlayService::get_strategy(const std::string& id) {
  auto s = find(id);
  if (!s) return error(404, "unknown session");
  std::lock_guard lock(s->mutex());
  if (!s->strategy()) return error(404, "pairing not yet formed");
  const PairingStrategy& p = *s->strategy();
  const Board& b = p.board();
  json pairs = json::array();
  for (const auto& cp : p.pairs())
    pairs.push_back({{"line", cp.line}, {"a", cell_json(b, cp.a)}, {"b", cell_json(b, cp.b)}});
  json free = json::array();
  for (CellId c : p.free_cells()) free.push_back(cell_json(b, c));
  return {200, json{{"scope", scope_name(p.scope())},
                    {"formedAfterMoves", p.position().size()},
                    {"pairs", pairs},
                    {"free", free}}
                   .dump()};
}

// ---------------------------------------------------------------------------

struct PlayServer::Impl {
  PlayService& service;
  httplib::Server server;
  explicit Impl(PlayService& s) : service(s) {}
};

PlayServer::PlayServer(PlayService& service) : impl_(std::make_unique<Impl>(service)) {
  auto& svr = impl_->server;
  auto& svc = impl_->service;
  svr.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                           {"Access-Control-Allow-Headers", "Content-Type"}});
  auto send = [](httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  svr.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  svr.Post("/games", [&svc, send](const httplib::Request& req, httplib::Response& res) {
    send(res, svc.create_game(req.body));
  });
  svr.Post(R"(/games/([^/]+)/moves)", [&svc, send](const httplib::Request& req, httplib::Response& res) {
    send(res, svc.post_move(req.matches[1], req.body));
  });
  svr.Get(R"(/games/([^/]+)/strategy)", [&svc, send](const httplib::Request& req, httplib::Response& res) {
    send(res, svc.get_strategy(req.matches[1]));
  });
  svr.Get(R"(/games/([^/]+))", [&svc, send](const httplib::Request& req, httplib::Response& res) {
    send(res, svc.get_game(req.matches[1]));
  });
  svr.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string what = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    res.status = 500;
    res.set_content(json{{"error", what}}.dump(), "application/json");
  });
}

PlayServer::~PlayServer() { stop(); }

int PlayServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

void PlayServer::listen() { impl_->server.listen_after_bind(); }

void PlayServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace ttt
