#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "udgred/graph.hpp"
#include "udgred/rng.hpp"

namespace udgred {

class empty_instance_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One random unit-disk instance on an L x L grid with lattice spacing 1.
struct InstanceSpec {
  int L = 2;
  double rho = 1.0;
  int rb_sq = 1;  ///< squared blockade radius in lattice units
  Weight weight_max = 1;
  std::uint64_t geometry_seed = 0;
  std::uint64_t weight_seed = 0;

  void validate() const {
    if (L < 2) throw usage_error("grid size L must be at least 2");
    if (!(rho > 0.0 && rho <= 1.0)) throw usage_error("density must lie in (0, 1]");
    if (rb_sq < 1) throw usage_error("squared blockade radius must be positive");
    if (weight_max < 1) throw usage_error("weight_max must be at least 1");
  }

  std::size_t num_sites() const { return static_cast<std::size_t>(L) * static_cast<std::size_t>(L); }
  std::size_t num_atoms() const {
    return static_cast<std::size_t>(std::llround(rho * static_cast<double>(num_sites())));
  }
};

/// Lattice offsets (dx, dy) != (0, 0) with dx^2 + dy^2 <= rb_sq.
inline std::vector<Coord> blockade_offsets(int rb_sq) {
  std::vector<Coord> out;
  const int r = static_cast<int>(std::sqrt(static_cast<double>(rb_sq))) + 1;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx)
      if ((dx != 0 || dy != 0) && dx * dx + dy * dy <= rb_sq) out.push_back({dx, dy});
  return out;
}

/// Places round(rho L^2) atoms on distinct sites (partial Fisher-Yates over the
/// row-major site list) and connects every pair within the blockade radius.
/// Vertex ids follow row-major site order; all weights are 1.
inline Graph generate_geometry(const InstanceSpec& spec) {
  spec.validate();
  const std::size_t sites = spec.num_sites();
  const std::size_t k = spec.num_atoms();
  if (k == 0) throw empty_instance_error("density too low: round(rho*L^2) = 0");

  std::vector<std::uint32_t> order(sites);
  std::iota(order.begin(), order.end(), 0u);
  Xoshiro256 rng(spec.geometry_seed);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(sites - i));
    std::swap(order[i], order[j]);
  }
  order.resize(k);
  std::sort(order.begin(), order.end());

  Graph g;
  std::vector<std::int64_t> occupant(sites, -1);
  for (std::uint32_t site : order) {
    const Coord c{static_cast<std::int32_t>(site % spec.L), static_cast<std::int32_t>(site / spec.L)};
    occupant[site] = g.add_vertex(1, c);
  }
  const auto offsets = blockade_offsets(spec.rb_sq);
  for (VertexId v = 0; v < g.capacity(); ++v) {
    const Coord c = *g.coord(v);
    for (const Coord& d : offsets) {
      const int x = c.x + d.x;
      const int y = c.y + d.y;
      if (x < 0 || y < 0 || x >= spec.L || y >= spec.L) continue;
      const std::int64_t u = occupant[static_cast<std::size_t>(y) * spec.L + x];
      if (u > static_cast<std::int64_t>(v)) g.add_edge(v, static_cast<VertexId>(u));
    }
  }
  return g;
}

/// Draws i.i.d. integer weights uniform on [1, weight_max], one per alive
/// vertex in ascending id order.
inline Graph assign_weights(Graph g, Weight weight_max, std::uint64_t weight_seed) {
  if (weight_max < 1) throw usage_error("weight_max must be at least 1");
  Xoshiro256 rng(weight_seed);
  for (VertexId v : g.alive_vertices())
    g.set_weight(v, 1 + static_cast<Weight>(rng.below(static_cast<std::uint64_t>(weight_max))));
  return g;
}

inline Graph generate_instance(const InstanceSpec& spec) {
  return assign_weights(generate_geometry(spec), spec.weight_max, spec.weight_seed);
}

}  // namespace udgred
