#include <gtest/gtest.h>

#include <cmath>

#include "udgred/graph_json.hpp"
#include "udgred/rng.hpp"
#include "udgred/udg_gen.hpp"

namespace udgred {
namespace {

// Reference values below were produced by an independent Python transcription
// of SplitMix64 / xoshiro256** / Lemire bounded draws.

TEST(Rng, SplitMixMatchesReferenceStream) {
  const std::uint64_t seed = 1234567;
  EXPECT_EQ(splitmix64_mix(seed), 6457827717110365317ull);
  EXPECT_EQ(splitmix64_mix(seed + 0x9E3779B97F4A7C15ull), 3203168211198807973ull);
  EXPECT_EQ(splitmix64_mix(seed + 2 * 0x9E3779B97F4A7C15ull), 9817491932198370423ull);
}

TEST(Rng, XoshiroMatchesReference) {
  Xoshiro256 rng(42);
  EXPECT_EQ(rng(), 1546998764402558742ull);
  EXPECT_EQ(rng(), 6990951692964543102ull);
  EXPECT_EQ(rng(), 12544586762248559009ull);
  EXPECT_EQ(rng(), 17057574109182124193ull);
}

TEST(Rng, BoundedDrawsMatchReference) {
  Xoshiro256 rng(7);
  const std::vector<std::uint64_t> expected = {7, 2, 8, 9, 9, 8, 0, 1, 4, 1};
  for (auto e : expected) EXPECT_EQ(rng.below(10), e);
  EXPECT_EQ(derive_seed(5, {1, 2, 3}), 509334991330530573ull);
}

TEST(GenerateGeometry, SiteSelectionMatchesReference) {
  const Graph g = generate_geometry({4, 0.5, 1, 1, 11, 0});
  std::vector<int> sites;
  for (VertexId v = 0; v < g.capacity(); ++v) sites.push_back(g.coord(v)->y * 4 + g.coord(v)->x);
  EXPECT_EQ(sites, (std::vector<int>{0, 1, 2, 3, 5, 8, 11, 15}));
}

TEST(GenerateGeometry, VertexCountIsRoundedDensity) {
  const Graph g = generate_geometry({20, 0.7, 9, 1, 3, 0});
  EXPECT_EQ(g.num_alive(), 280u);
  for (VertexId v = 0; v < g.capacity(); ++v) EXPECT_EQ(g.weight(v), 1);
}

TEST(GenerateGeometry, FullTwoByTwoIsFourCycle) {
  const Graph g = generate_geometry({2, 1.0, 1, 1, 0, 0});
  EXPECT_EQ(g.num_alive(), 4u);
  EXPECT_EQ(g.num_edges(), 4u);
  for (VertexId v = 0; v < 4; ++v) EXPECT_EQ(g.degree(v), 2u);
  EXPECT_FALSE(g.has_edge(0, 3));  // diagonal sqrt(2) > 1
}

std::size_t lattice_points_within(int rb_sq) {
  std::size_t count = 0;
  for (int dx = -10; dx <= 10; ++dx)
    for (int dy = -10; dy <= 10; ++dy)
      if ((dx || dy) && dx * dx + dy * dy <= rb_sq) ++count;
  return count;
}

TEST(GenerateGeometry, CenterDegreeFingerprint) {
  const std::vector<int> radii = {1, 2, 4, 5, 8, 9};
  const std::vector<std::size_t> expected = {4, 8, 12, 20, 24, 28};
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const Graph g = generate_geometry({21, 1.0, radii[i], 1, 0, 0});
    const VertexId center = 10 * 21 + 10;
    EXPECT_EQ(g.degree(center), expected[i]) << "rb_sq=" << radii[i];
    EXPECT_EQ(lattice_points_within(radii[i]), expected[i]);
  }
}

TEST(GenerateGeometry, EmptyInstanceError) {
  EXPECT_THROW(generate_geometry({2, 0.1, 1, 1, 0, 0}), empty_instance_error);
}

TEST(GenerateGeometry, InvalidSpecIsUsageError) {
  EXPECT_THROW(generate_geometry({1, 0.5, 1, 1, 0, 0}), usage_error);
  EXPECT_THROW(generate_geometry({4, 0.0, 1, 1, 0, 0}), usage_error);
  EXPECT_THROW(generate_geometry({4, 1.5, 1, 1, 0, 0}), usage_error);
  EXPECT_THROW(generate_geometry({4, 0.5, 0, 1, 0, 0}), usage_error);
}

TEST(GenerateGeometry, UnitDiskPropertyFullAudit) {
  for (int rb_sq : {1, 2, 4, 5, 8, 9, 13}) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const Graph g = generate_geometry({15, 0.6, rb_sq, 1, seed, 0});
      g.audit();
      EXPECT_EQ(g.num_alive(), 135u);
      for (VertexId u = 0; u < g.capacity(); ++u) {
        for (VertexId v = u + 1; v < g.capacity(); ++v) {
          const auto a = *g.coord(u);
          const auto b = *g.coord(v);
          ASSERT_FALSE(a == b);
          const int d2 = (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y);
          ASSERT_EQ(g.has_edge(u, v), d2 <= rb_sq);
        }
      }
    }
  }
}

TEST(GenerateGeometry, EdgesMonotoneInRadius) {
  const std::vector<int> radii = {1, 2, 4, 5, 8, 9};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
      const Graph small = generate_geometry({12, 0.8, radii[i], 1, seed, 0});
      const Graph large = generate_geometry({12, 0.8, radii[i + 1], 1, seed, 0});
      ASSERT_EQ(small.num_alive(), large.num_alive());
      for (VertexId v = 0; v < small.capacity(); ++v)
        for (VertexId u : small.adj(v)) ASSERT_TRUE(large.has_edge(u, v));
      EXPECT_LT(small.num_edges(), large.num_edges());
    }
  }
}

TEST(AssignWeights, UnweightedLeavesOnes) {
  const Graph g = assign_weights(generate_geometry({6, 0.5, 2, 1, 1, 0}), 1, 12345);
  for (VertexId v : g.alive_vertices()) EXPECT_EQ(g.weight(v), 1);
}

TEST(AssignWeights, UniformMomentsForW10) {
  const Graph base(10000);
  const Graph g = assign_weights(base, 10, 2024);
  double sum = 0;
  for (VertexId v : g.alive_vertices()) {
    ASSERT_GE(g.weight(v), 1);
    ASSERT_LE(g.weight(v), 10);
    sum += static_cast<double>(g.weight(v));
  }
  // mean 5.5, variance (10^2 - 1) / 12 = 8.25 per draw
  const double sigma = std::sqrt(8.25 / 10000.0);
  EXPECT_NEAR(sum / 10000.0, 5.5, 3 * sigma);
}

TEST(AssignWeights, DeterministicInSeed) {
  const Graph geo = generate_geometry({8, 0.7, 4, 1, 9, 0});
  const Graph a = assign_weights(geo, 100, 77);
  const Graph b = assign_weights(geo, 100, 77);
  const Graph c = assign_weights(geo, 100, 78);
  bool differs = false;
  for (VertexId v : geo.alive_vertices()) {
    EXPECT_EQ(a.weight(v), b.weight(v));
    differs |= a.weight(v) != c.weight(v);
  }
  EXPECT_TRUE(differs);
  EXPECT_THROW(assign_weights(geo, 0, 1), usage_error);
}

TEST(GenerateInstance, JsonExportIsReproducible) {
  const InstanceSpec spec{10, 0.75, 5, 10, 31, 32};
  const std::string a = graph_to_json(generate_instance(spec)).dump();
  const std::string b = graph_to_json(generate_instance(spec)).dump();
  EXPECT_EQ(a, b);
  const GraphDocument back = graph_from_json(json::parse(a));
  EXPECT_EQ(graph_to_json(back.graph).dump(), a);
}

}  // namespace
}  // namespace udgred
