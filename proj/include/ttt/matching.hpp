#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "ttt/game_state.hpp"

namespace ttt {

/// Bipartite graph with adjacency from the X side, stored CSR-style.
struct BipartiteGraph {
  int x_count = 0;
  int y_count = 0;
  std::vector<std::int32_t> offsets{0};
  std::vector<std::int32_t> adjacency;

  std::span<const std::int32_t> neighbors(int x) const {
    return {adjacency.data() + offsets[x], static_cast<std::size_t>(offsets[x + 1] - offsets[x])};
  }
  int edge_count() const { return static_cast<int>(adjacency.size()); }
  bool has_edge(int x, int y) const;

  void clear(int y);
  /// Appends one X node; neighbors must lie in [0, y_count).
  void add_x(std::span<const std::int32_t> neighbors);
  static BipartiteGraph from_lists(int y_count, const std::vector<std::vector<int>>& adj);
};

/// Two X nodes per hypergraph edge (2j and 2j+1 both adjacent to edge j's
/// vertices) and one Y node per hypergraph vertex.
struct DoubledBipartiteGraph : BipartiteGraph {
  int origin_edge(int x) const { return x / 2; }
};

/// Throws InvalidArgument for a hypergraph without edges.
DoubledBipartiteGraph build_doubled_graph(const Hypergraph& h);
/// Buffer-reusing variant for batch callers.
void build_doubled_graph(const Hypergraph& h, DoubledBipartiteGraph& out);

struct Matching {
  static constexpr std::int32_t kNone = -1;
  std::vector<std::int32_t> match_of_x;
  std::vector<std::int32_t> match_of_y;
  int size = 0;

  /// Mutual consistency, adjacency membership and size bookkeeping.
  bool is_valid_for(const BipartiteGraph& g) const;
};

/// Maximum-cardinality matching by Hopcroft-Karp.
///
/// Starts from a greedy matching (each X node takes its first free
/// neighbor), then runs phases: BFS layering from the free X nodes up to the
/// first layer that reaches a free Y node, followed by a DFS that extracts a
/// maximal set of vertex-disjoint shortest augmenting paths. Neighbors are
/// always scanned in adjacency order, so the result is a deterministic
/// function of the input. Buffers persist across calls to solve().
class HopcroftKarp {
 public:
  const Matching& solve(const BipartiteGraph& g);
  const Matching& matching() const { return m_; }
  /// Augmenting phases run by the last solve() (the greedy pass excluded).
  int phases() const { return phases_; }
  /// Size after the greedy initialization of the last solve().
  int greedy_size() const { return greedy_size_; }

 private:
  bool bfs(const BipartiteGraph& g);
  bool dfs(const BipartiteGraph& g, int x);

  Matching m_;
  std::vector<std::int32_t> dist_;
  std::vector<std::int32_t> queue_;
  std::vector<std::int32_t> cursor_;
  std::int32_t limit_ = 0;
  int phases_ = 0;
  int greedy_size_ = 0;
};

Matching hopcroft_karp(const BipartiteGraph& g);

/// Exact maximum matching size by exhaustive search over injective partial
/// assignments (memoized on the set of used nodes of the smaller side).
/// Requires x_count + y_count <= 24.
int brute_force_matching(const BipartiteGraph& g);

/// Throws InvalidArgument when m is not a consistent matching of g.
bool is_x_perfect(const BipartiteGraph& g, const Matching& m);

/// One line "edgeId copy cellId" per X node of the doubled graph (copy is 1
/// or 2; cellId is the board cell id when h carries cells, the dense vertex
/// id otherwise). Unmatched X nodes are written with cellId -1.
void write_matching_dump(std::ostream& out, const Hypergraph& h, const Matching& m);
Matching read_matching_dump(std::istream& in, const Hypergraph& h);

}  // namespace ttt
