#pragma once

// Brute-force MWIS over every subset of the alive vertices. Shares nothing
// with the solvers under test beyond the Graph accessors.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "udgred/graph.hpp"

namespace udgred::testing {

struct OracleResult {
  Weight weight = 0;
  /// lexicographically smallest optimum (sorted ids)
  std::vector<VertexId> set;
};

inline OracleResult brute_force_mwis(const Graph& g) {
  const std::vector<VertexId> ids = g.alive_vertices();
  const std::size_t n = ids.size();
  if (n > 24) throw std::invalid_argument("oracle limited to 24 vertices");
  std::vector<std::vector<char>> edge(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) edge[i][j] = g.has_edge(ids[i], ids[j]) ? 1 : 0;

  OracleResult best;
  bool have = false;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<VertexId> members;
    Weight w = 0;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (!(mask >> i & 1)) continue;
      for (std::size_t j = 0; j < i; ++j)
        if ((mask >> j & 1) && edge[i][j]) ok = false;
      members.push_back(ids[i]);
      w += g.weight(ids[i]);
    }
    if (!ok) continue;
    if (!have || w > best.weight || (w == best.weight && members < best.set)) {
      best = {w, members};
      have = true;
    }
  }
  return best;
}

inline Weight mwis(const Graph& g) { return brute_force_mwis(g).weight; }

}  // namespace udgred::testing
