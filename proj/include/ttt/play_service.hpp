#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "ttt/game_state.hpp"
#include "ttt/pairing.hpp"
#include "ttt/prover.hpp"
#include "ttt/symmetry.hpp"

namespace ttt {

enum class EngineMode { PrescribedPairing, PregamePairing, DangerGreedy };

const char* engine_mode_name(EngineMode m);
std::optional<EngineMode> parse_engine_mode(const std::string& s);

enum class SessionStatus { InProgress, MakerWon, BoardFull };
const char* session_status_name(SessionStatus s);

struct ServiceResponse {
  int status = 200;
  std::string body;  // JSON
};

/// A human (Maker) against the engine (Breaker).
///
/// In prescribed mode on 7^3 the engine keeps a symmetry that maps the real
/// board onto the normalized openings and answers through it; once the
/// opening is over it builds a pairing from the survivor matching.
class Session {
 public:
  Session(std::string id, BoardPtr board, EngineMode mode, std::optional<PairingStrategy> pregame);

  const std::string& id() const { return id_; }
  EngineMode mode() const { return mode_; }
  SessionStatus status() const { return status_; }
  const GameState& state() const { return state_; }
  const std::optional<PairingStrategy>& strategy() const { return strategy_; }
  std::optional<CaseKind> opening_kind() const { return kind_; }
  bool fell_back() const { return fell_back_; }

  /// Applies a Maker move and the engine's reply; returns the reply or -1
  /// when the game ended on Maker's move. Throws IllegalMove if the cell is
  /// occupied or the game is over.
  CellId play(CellId maker);

  std::mutex& mutex() { return mutex_; }

 private:
  CellId prescribed_reply(CellId maker);
  void form_strategy();
  CellId to_real(CellId canonical) const;

  std::string id_;
  EngineMode mode_;
  GameState state_;
  SessionStatus status_ = SessionStatus::InProgress;
  std::optional<PairingStrategy> strategy_;
  std::optional<OpeningBook> book_;
  std::optional<CaseKind> kind_;
  Symmetry to_canonical_;
  std::optional<GameState> canonical_;
  bool fell_back_ = false;
  std::mutex mutex_;
};

/// Transport-independent handlers for the play API. Bodies are JSON; cells
/// travel as coordinate arrays.
class PlayService {
 public:
  PlayService();

  ServiceResponse create_game(const std::string& body);
  ServiceResponse post_move(const std::string& id, const std::string& body);
  ServiceResponse get_game(const std::string& id);
  ServiceResponse get_strategy(const std::string& id);

  std::size_t session_count();

 private:
  std::shared_ptr<Session> find(const std::string& id);
  std::optional<PairingStrategy> pregame_for(int n, int d);

  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::map<std::pair<int, int>, std::optional<PairingStrategy>> pregame_cache_;
  std::uint64_t next_id_ = 1;
  std::uint64_t salt_;
};

/// HTTP front end over PlayService (cpp-httplib).
class PlayServer {
 public:
  explicit PlayServer(PlayService& service);
  ~PlayServer();

  /// Binds host:port (port 0 picks a free one) and returns the bound port,
  /// or -1 on failure.
  int bind(const std::string& host, int port);
  /// Blocks until stop() is called.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ttt
