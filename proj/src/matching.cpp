#include "ttt/matching.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_map>

namespace ttt {

namespace {

constexpr std::int32_t kInf = std::numeric_limits<std::int32_t>::max();

}  // namespace

bool BipartiteGraph::has_edge(int x, int y) const {
  auto nb = neighbors(x);
  return std::find(nb.begin(), nb.end(), y) != nb.end();
}

void BipartiteGraph::clear(int y) {
  x_count = 0;
  y_count = y;
  offsets.assign(1, 0);
  adjacency.clear();
}

void BipartiteGraph::add_x(std::span<const std::int32_t> nb) {
  for (int y : nb)
    if (y < 0 || y >= y_count) throw InvalidArgument("bipartite neighbor out of range");
  adjacency.insert(adjacency.end(), nb.begin(), nb.end());
  offsets.push_back(static_cast<std::int32_t>(adjacency.size()));
  ++x_count;
}

BipartiteGraph BipartiteGraph::from_lists(int y_count, const std::vector<std::vector<int>>& adj) {
  BipartiteGraph g;
  g.clear(y_count);
  for (const auto& list : adj) {
    std::vector<std::int32_t> nb(list.begin(), list.end());
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    g.add_x(nb);
  }
  return g;
}

DoubledBipartiteGraph build_doubled_graph(const Hypergraph& h) {
  DoubledBipartiteGraph g;
  build_doubled_graph(h, g);
  return g;
}

void build_doubled_graph(const Hypergraph& h, DoubledBipartiteGraph& out) {
  if (h.edge_count() == 0) throw InvalidArgument("cannot build a doubled graph from an empty hypergraph");
  out.clear(h.vertex_count);
  out.adjacency.reserve(2 * h.edge_vertices.size());
  for (int j = 0; j < h.edge_count(); ++j) {
    auto e = h.edge(j);
    out.add_x(e);
    out.add_x(e);
  }
}

bool Matching::is_valid_for(const BipartiteGraph& g) const {
  if (match_of_x.size() != static_cast<std::size_t>(g.x_count)) return false;
  if (match_of_y.size() != static_cast<std::size_t>(g.y_count)) return false;
  int matched = 0;
  for (int x = 0; x < g.x_count; ++x) {
    int y = match_of_x[x];
    if (y == kNone) continue;
    if (y < 0 || y >= g.y_count || match_of_y[y] != x || !g.has_edge(x, y)) return false;
    ++matched;
  }
  int matched_y = 0;
  for (int y = 0; y < g.y_count; ++y) {
    int x = match_of_y[y];
    if (x == kNone) continue;
    if (x < 0 || x >= g.x_count || match_of_x[x] != y) return false;
    ++matched_y;
  }
  return matched == size && matched_y == size;
}

const Matching& HopcroftKarp::solve(const BipartiteGraph& g) {
  m_.match_of_x.assign(static_cast<std::size_t>(g.x_count), Matching::kNone);
  m_.match_of_y.assign(static_cast<std::size_t>(g.y_count), Matching::kNone);
  m_.size = 0;
  phases_ = 0;

  for (int x = 0; x < g.x_count; ++x) {
    for (int y : g.neighbors(x)) {
      if (m_.match_of_y[y] == Matching::kNone) {
        m_.match_of_x[x] = y;
        m_.match_of_y[y] = x;
        ++m_.size;
        break;
      }
    }
  }
  greedy_size_ = m_.size;

  dist_.resize(static_cast<std::size_t>(g.x_count));
  cursor_.resize(static_cast<std::size_t>(g.x_count));
  while (m_.size < std::min(g.x_count, g.y_count) && bfs(g)) {
    ++phases_;
    for (int x = 0; x < g.x_count; ++x) cursor_[x] = g.offsets[x];
    int gained = 0;
    for (int x = 0; x < g.x_count; ++x)
      if (m_.match_of_x[x] == Matching::kNone && dfs(g, x)) ++gained;
    m_.size += gained;
    if (gained == 0) break;
  }
  return m_;
}

bool HopcroftKarp::bfs(const BipartiteGraph& g) {
  queue_.clear();
  for (int x = 0; x < g.x_count; ++x) {
    if (m_.match_of_x[x] == Matching::kNone) {
      dist_[x] = 0;
      queue_.push_back(x);
    } else {
      dist_[x] = kInf;
    }
  }
  limit_ = kInf;
  for (std::size_t head = 0; head < queue_.size(); ++head) {
    const int x = queue_[head];
    if (dist_[x] >= limit_) break;
    for (int y : g.neighbors(x)) {
      const int next = m_.match_of_y[y];
      if (next == Matching::kNone) {
        if (limit_ == kInf) limit_ = dist_[x] + 1;
      } else if (dist_[next] == kInf) {
        dist_[next] = dist_[x] + 1;
        queue_.push_back(next);
      }
    }
  }
  return limit_ != kInf;
}

bool HopcroftKarp::dfs(const BipartiteGraph& g, int x) {
  const int end = g.offsets[x + 1];
  for (auto& i = cursor_[x]; i < end; ++i) {
    const int y = g.adjacency[i];
    const int next = m_.match_of_y[y];
    bool augment = false;
    if (next == Matching::kNone) {
      augment = dist_[x] + 1 == limit_;
    } else if (dist_[next] == dist_[x] + 1 && dist_[next] < limit_) {
      augment = dfs(g, next);
    }
    if (augment) {
      m_.match_of_x[x] = y;
      m_.match_of_y[y] = x;
      ++i;
      return true;
    }
  }
  dist_[x] = kInf;
  return false;
}

Matching hopcroft_karp(const BipartiteGraph& g) {
  HopcroftKarp hk;
  return hk.solve(g);
}

int brute_force_matching(const BipartiteGraph& g) {
  if (g.x_count + g.y_count > 24) throw InvalidArgument("brute-force matching is limited to 24 nodes");
  // Walk the larger side in order; each node either stays unmatched or takes
  // an unused partner from the smaller side, whose used set is the mask.
  const bool walk_x = g.x_count >= g.y_count;
  const int walk = walk_x ? g.x_count : g.y_count;
  const int small = walk_x ? g.y_count : g.x_count;
  std::vector<std::vector<int>> partners(static_cast<std::size_t>(walk));
  for (int x = 0; x < g.x_count; ++x) {
    for (int y : g.neighbors(x)) {
      if (walk_x) partners[x].push_back(y);
      else partners[y].push_back(x);
    }
  }
  const std::size_t masks = std::size_t{1} << small;
  std::vector<std::int8_t> memo(static_cast<std::size_t>(walk + 1) * masks, -1);
  auto solve = [&](auto&& self, int i, std::uint32_t used) -> int {
    if (i == walk) return 0;
    auto& slot = memo[static_cast<std::size_t>(i) * masks + used];
    if (slot >= 0) return slot;
    int best = self(self, i + 1, used);
    for (int p : partners[i])
      if (!(used >> p & 1u)) best = std::max(best, 1 + self(self, i + 1, used | (1u << p)));
    slot = static_cast<std::int8_t>(best);
    return best;
  };
  return solve(solve, 0, 0);
}

bool is_x_perfect(const BipartiteGraph& g, const Matching& m) {
  if (!m.is_valid_for(g)) throw InvalidArgument("matching is inconsistent with the graph");
  return m.size == g.x_count;
}

void write_matching_dump(std::ostream& out, const Hypergraph& h, const Matching& m) {
  for (std::size_t x = 0; x < m.match_of_x.size(); ++x) {
    const int y = m.match_of_x[x];
    long cell = y;
    if (y >= 0 && !h.vertex_cells.empty()) cell = h.vertex_cells[y];
    out << x / 2 << ' ' << x % 2 + 1 << ' ' << cell << '\n';
  }
}

Matching read_matching_dump(std::istream& in, const Hypergraph& h) {
  Matching m;
  m.match_of_x.assign(static_cast<std::size_t>(2 * h.edge_count()), Matching::kNone);
  m.match_of_y.assign(static_cast<std::size_t>(h.vertex_count), Matching::kNone);
  std::unordered_map<long, int> dense;
  for (int v = 0; v < static_cast<int>(h.vertex_cells.size()); ++v) dense[h.vertex_cells[v]] = v;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    long edge = 0, copy = 0, cell = 0;
    if (!(ls >> edge >> copy >> cell) || edge < 0 || edge >= h.edge_count() || (copy != 1 && copy != 2))
      throw InvalidArgument("malformed matching dump line '" + line + "'");
    if (cell < 0) continue;
    int y = static_cast<int>(cell);
    if (!h.vertex_cells.empty()) {
      auto it = dense.find(cell);
      if (it == dense.end()) throw InvalidArgument("matching dump names a cell outside the hypergraph");
      y = it->second;
    }
    if (y < 0 || y >= h.vertex_count) throw InvalidArgument("matching dump vertex out of range");
    const auto x = static_cast<std::size_t>(2 * edge + copy - 1);
    if (m.match_of_x[x] != Matching::kNone || m.match_of_y[y] != Matching::kNone)
      throw InvalidArgument("matching dump assigns a node twice");
    m.match_of_x[x] = y;
    m.match_of_y[y] = static_cast<std::int32_t>(x);
    ++m.size;
  }
  return m;
}

}  // namespace ttt
