#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ttt/game_state.hpp"

namespace ttt {

/// Cardinality of the union of the listed edges. Throws InvalidArgument for
/// an unknown edge id.
int union_size(const Hypergraph& h, const std::vector<int>& family);

/// min_edge * m - m(m-1)/2; a lower bound on the union when edges pairwise
/// share at most one vertex.
std::int64_t crude_lower_bound(std::int64_t m, std::int64_t min_edge);

/// Inclusion-exclusion truncated after triple intersections.
///
/// With a board, every vertex of the family must map to a cell lying on at
/// most three lines of that board. Without one, no vertex may lie on more
/// than three edges of the family. Throws InvalidArgument otherwise.
std::int64_t inclusion_exclusion_size(const Hypergraph& h, const std::vector<int>& family,
                                      const Board* board = nullptr);

constexpr int kMaxExhaustiveEdges = 25;

struct BigamyResult {
  bool holds = true;
  std::uint64_t families_checked = 0;
  std::vector<int> violator;  // empty when holds
  int violator_union = 0;
};

/// Checks |union| >= 2|G| for every nonempty subfamily, by size then
/// lexicographically, stopping at the first violator.
BigamyResult exhaustive_bigamy_check(const Hypergraph& h);

struct HallReport {
  bool bigamy_holds = false;
  bool x_perfect = false;
  bool agree = false;
  int matching_size = 0;
  int required = 0;
  std::vector<int> witness;
};

HallReport hall_equivalence_check(const Hypergraph& h);

struct ProbeSize {
  int size = 0;
  std::uint64_t samples = 0;
  std::uint64_t violations = 0;
  double min_ratio = 0;  // union / (2|G|)
  std::vector<int> witness;  // lowest-ratio family seen
  int witness_union = 0;
};

struct ProbeReport {
  int edges = 0;
  int vertices = 0;
  std::uint64_t seed = 0;
  std::vector<ProbeSize> sizes;
};

/// Random subfamilies of the survivor hypergraph of a 7^3 position.
/// Sizes above the edge count are reported with zero samples.
ProbeReport probe_7cube(const GameState& state, const std::vector<int>& sizes, std::uint64_t samples,
                        std::uint64_t seed);

std::string probe_report_json(const ProbeReport& r);

}  // namespace ttt
