#include "ttt/bigamy.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "json.hpp"
#include "ttt/matching.hpp"

namespace ttt {

namespace {

void check_family(const Hypergraph& h, const std::vector<int>& family) {
  for (int e : family)
    if (e < 0 || e >= h.edge_count()) throw InvalidArgument("unknown edge id " + std::to_string(e));
}

using Mask = std::vector<std::uint64_t>;

std::vector<Mask> edge_masks(const Hypergraph& h) {
  const std::size_t words = (static_cast<std::size_t>(h.vertex_count) + 63) / 64;
  std::vector<Mask> masks(static_cast<std::size_t>(h.edge_count()), Mask(words, 0));
  for (int j = 0; j < h.edge_count(); ++j)
    for (int v : h.edge(j)) masks[j][static_cast<std::size_t>(v) / 64] |= 1ull << (v % 64);
  return masks;
}

int popcount(const Mask& m) {
  int c = 0;
  for (auto w : m) c += __builtin_popcountll(w);
  return c;
}

}  // namespace

int union_size(const Hypergraph& h, const std::vector<int>& family) {
  check_family(h, family);
  std::vector<char> seen(static_cast<std::size_t>(h.vertex_count), 0);
  int count = 0;
  for (int e : family)
    for (int v : h.edge(e))
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
      }
  return count;
}

std::int64_t crude_lower_bound(std::int64_t m, std::int64_t min_edge) {
  if (m < 0) throw InvalidArgument("family size must be nonnegative");
  return min_edge * m - m * (m - 1) / 2;
}

std::int64_t inclusion_exclusion_size(const Hypergraph& h, const std::vector<int>& family, const Board* board) {
  check_family(h, family);
  std::vector<int> mult(static_cast<std::size_t>(h.vertex_count), 0);
  for (int e : family)
    for (int v : h.edge(e)) ++mult[v];
  for (int v = 0; v < h.vertex_count; ++v) {
    if (mult[v] == 0) continue;
    if (board) {
      if (h.vertex_cells.empty()) throw InvalidArgument("hypergraph carries no cell ids");
      const CellId c = h.vertex_cells[v];
      if (board->cell_degree(c) > 3)
        throw InvalidArgument("cell " + board->cell_of(c).to_string() + " lies on " +
                              std::to_string(board->cell_degree(c)) + " lines; expansion past triples needed");
    } else if (mult[v] > 3) {
      throw InvalidArgument("vertex " + std::to_string(v) + " lies on more than three edges");
    }
  }

  auto inter = [&](std::span<const std::int32_t> a, std::span<const std::int32_t> b) {
    std::vector<std::int32_t> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
  };
  std::int64_t singles = 0, pairs = 0, triples = 0;
  const std::size_t m = family.size();
  for (std::size_t i = 0; i < m; ++i) {
    singles += h.edge_size(family[i]);
    for (std::size_t j = i + 1; j < m; ++j) {
      const auto ij = inter(h.edge(family[i]), h.edge(family[j]));
      pairs += static_cast<std::int64_t>(ij.size());
      if (ij.empty()) continue;
      for (std::size_t k = j + 1; k < m; ++k)
        triples += static_cast<std::int64_t>(inter(ij, h.edge(family[k])).size());
    }
  }
  return singles - pairs + triples;
}

BigamyResult exhaustive_bigamy_check(const Hypergraph& h) {
  const int m = h.edge_count();
  if (m > kMaxExhaustiveEdges)
    throw InvalidArgument("hypergraph has " + std::to_string(m) + " edges; exhaustive limit is " +
                          std::to_string(kMaxExhaustiveEdges));
  const auto masks = edge_masks(h);
  const std::size_t words = (static_cast<std::size_t>(h.vertex_count) + 63) / 64;
  BigamyResult res;

  std::vector<int> pick;
  std::vector<Mask> acc;
  // Lexicographic k-subsets with running unions; returns true on violation.
  auto search = [&](auto&& self, int k, int from) -> bool {
    const int depth = static_cast<int>(pick.size());
    if (depth == k) {
      ++res.families_checked;
      const int u = popcount(acc[depth]);
      if (u < 2 * k) {
        res.holds = false;
        res.violator = pick;
        res.violator_union = u;
        return true;
      }
      return false;
    }
    for (int e = from; e <= m - (k - depth); ++e) {
      pick.push_back(e);
      for (std::size_t w = 0; w < words; ++w) acc[depth + 1][w] = acc[depth][w] | masks[e][w];
      const bool stop = self(self, k, e + 1);
      pick.pop_back();
      if (stop) return true;
    }
    return false;
  };
  for (int k = 1; k <= m; ++k) {
    acc.assign(static_cast<std::size_t>(k) + 1, Mask(words, 0));
    if (search(search, k, 0)) break;
  }
  return res;
}

HallReport hall_equivalence_check(const Hypergraph& h) {
  HallReport r;
  const auto big = exhaustive_bigamy_check(h);
  r.bigamy_holds = big.holds;
  r.witness = big.violator;
  r.required = 2 * h.edge_count();
  if (h.edge_count() == 0) {
    r.x_perfect = true;
  } else {
    const auto g = build_doubled_graph(h);
    r.matching_size = hopcroft_karp(g).size;
    r.x_perfect = r.matching_size == r.required;
  }
  r.agree = r.bigamy_holds == r.x_perfect;
  return r;
}

ProbeReport probe_7cube(const GameState& state, const std::vector<int>& sizes, std::uint64_t samples,
                        std::uint64_t seed) {
  const Hypergraph h = state.surviving_hypergraph();
  const auto masks = edge_masks(h);
  ProbeReport rep;
  rep.edges = h.edge_count();
  rep.vertices = h.vertex_count;
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  std::vector<int> order(static_cast<std::size_t>(h.edge_count()));
  for (int k : sizes) {
    ProbeSize ps;
    ps.size = k;
    if (k <= 0 || k > h.edge_count()) {
      rep.sizes.push_back(ps);
      continue;
    }
    ps.min_ratio = 1e300;
    for (std::uint64_t s = 0; s < samples; ++s) {
      std::iota(order.begin(), order.end(), 0);
      for (int i = 0; i < k; ++i) {
        std::uniform_int_distribution<int> pick(i, h.edge_count() - 1);
        std::swap(order[i], order[pick(rng)]);
      }
      Mask acc(masks.empty() ? 0 : masks[0].size(), 0);
      for (int i = 0; i < k; ++i)
        for (std::size_t w = 0; w < acc.size(); ++w) acc[w] |= masks[order[i]][w];
      const int u = popcount(acc);
      ++ps.samples;
      if (u < 2 * k) ++ps.violations;
      const double ratio = static_cast<double>(u) / (2.0 * k);
      if (ratio < ps.min_ratio) {
        ps.min_ratio = ratio;
        ps.witness.assign(order.begin(), order.begin() + k);
        std::sort(ps.witness.begin(), ps.witness.end());
        ps.witness_union = u;
      }
    }
    rep.sizes.push_back(ps);
  }
  return rep;
}

std::string probe_report_json(const ProbeReport& r) {
  using nlohmann::json;
  json sizes = json::array();
  for (const auto& s : r.sizes)
    sizes.push_back(json{{"size", s.size},
                         {"samples", s.samples},
                         {"violations", s.violations},
                         {"minRatio", s.samples ? json(s.min_ratio) : json(nullptr)},
                         {"witnessUnion", s.witness_union},
                         {"witness", s.witness}});
  json out{{"edges", r.edges},
           {"vertices", r.vertices},
           {"seed", r.seed},
           {"exhaustive", false},
           {"sizes", sizes}};
  return out.dump(2) + "\n";
}

}  // namespace ttt
