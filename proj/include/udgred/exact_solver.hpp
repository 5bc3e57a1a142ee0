#pragma once

#include <bit>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "udgred/graph.hpp"

namespace udgred {

class budget_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolveBudget {
  std::size_t max_vertices_exhaustive = 20;
  std::uint64_t max_nodes_bnb = 50'000'000;
  std::optional<std::chrono::milliseconds> time_limit;
};

enum class SolveStatus { optimal, budget_exceeded };

inline const char* to_string(SolveStatus s) {
  return s == SolveStatus::optimal ? "optimal" : "budget_exceeded";
}

struct SolveResult {
  VertexSet set;
  Weight weight = 0;
  SolveStatus status = SolveStatus::optimal;
  std::uint64_t nodes = 0;
};

namespace detail {

class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t n) : words_((n + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i >> 6] |= bit(i); }
  void reset(std::size_t i) { words_[i >> 6] &= ~bit(i); }
  bool test(std::size_t i) const { return (words_[i >> 6] & bit(i)) != 0; }
  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  std::size_t count_and(const Bitset& o) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i)
      c += static_cast<std::size_t>(std::popcount(words_[i] & o.words_[i]));
    return c;
  }
  /// true iff this is a subset of o
  bool subset_of(const Bitset& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }
  Bitset& operator&=(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  Bitset& and_not(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        const int b = std::countr_zero(bits);
        f(w * 64 + static_cast<std::size_t>(b));
        bits &= bits - 1;
      }
    }
  }

 private:
  static std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << (i & 63); }
  std::vector<std::uint64_t> words_;
};

/// Alive part of a graph as local indices 0..k-1 (ascending original id).
struct LocalGraph {
  std::vector<VertexId> ids;
  std::vector<Weight> weights;
  std::vector<Bitset> adj;
  std::vector<Bitset> closed;

  explicit LocalGraph(const Graph& g) : ids(g.alive_vertices()) {
    const std::size_t k = ids.size();
    std::vector<std::size_t> local(g.capacity(), 0);
    for (std::size_t i = 0; i < k; ++i) local[ids[i]] = i;
    weights.resize(k);
    adj.assign(k, Bitset(k));
    for (std::size_t i = 0; i < k; ++i) {
      weights[i] = g.weight(ids[i]);
      for (VertexId u : g.adj(ids[i])) adj[i].set(local[u]);
      closed.push_back(adj[i]);
      closed.back().set(i);
    }
  }

  std::size_t size() const { return ids.size(); }

  VertexSet to_vertex_set(const Bitset& b) const {
    std::vector<VertexId> out;
    b.for_each([&](std::size_t i) { out.push_back(ids[i]); });
    return VertexSet(std::move(out));
  }
};

}  // namespace detail

/// Exact MWIS by enumerating all independent sets in lexicographic order of
/// their sorted id sequences; the first maximum found is the lexicographically
/// smallest optimum.
inline SolveResult solve_exhaustive(const Graph& g, const SolveBudget& budget = {}) {
  const std::size_t k = g.num_alive();
  if (k > budget.max_vertices_exhaustive || k > 63)
    throw budget_error("exhaustive solve limited to " +
                       std::to_string(std::min<std::size_t>(budget.max_vertices_exhaustive, 63)) +
                       " vertices, graph has " + std::to_string(k));
  const std::vector<VertexId> ids = g.alive_vertices();
  std::vector<std::uint64_t> closed(k, 0);
  std::vector<Weight> w(k);
  for (std::size_t i = 0; i < k; ++i) {
    w[i] = g.weight(ids[i]);
    closed[i] |= std::uint64_t{1} << i;
    for (std::size_t j = 0; j < k; ++j)
      if (g.has_edge(ids[i], ids[j])) closed[i] |= std::uint64_t{1} << j;
  }

  std::uint64_t best_mask = 0;
  Weight best = 0;
  std::uint64_t nodes = 0;
  // candidates: vertices > last chosen that are not adjacent to the current set
  std::function<void(std::uint64_t, std::uint64_t, Weight)> visit =
      [&](std::uint64_t chosen, std::uint64_t candidates, Weight value) {
        ++nodes;
        if (value > best) {
          best = value;
          best_mask = chosen;
        }
        while (candidates) {
          const int i = std::countr_zero(candidates);
          candidates &= candidates - 1;
          visit(chosen | (std::uint64_t{1} << i), candidates & ~closed[i], value + w[i]);
        }
      };
  visit(0, k == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1, 0);

  SolveResult r;
  std::vector<VertexId> set;
  for (std::size_t i = 0; i < k; ++i)
    if (best_mask >> i & 1) set.push_back(ids[i]);
  r.set = VertexSet(std::move(set));
  r.weight = best;
  r.nodes = nodes;
  return r;
}

/// Search-node snapshot passed to BnbOptions::on_node: the candidate vertices
/// still undecided, the weight already committed, and the bound used.
struct BnbNode {
  VertexSet candidates;
  Weight committed = 0;
  Weight bound = 0;
};

struct BnbOptions {
  bool interleave_reductions = true;
  std::function<void(const BnbNode&)> on_node;
};

namespace detail {

class BranchAndReduce {
 public:
  BranchAndReduce(const Graph& g, const SolveBudget& budget, const BnbOptions& opts)
      : lg_(g), budget_(budget), opts_(opts), best_set_(lg_.size()) {
    if (budget_.time_limit) deadline_ = std::chrono::steady_clock::now() + *budget_.time_limit;
  }

  SolveResult run() {
    Bitset all(lg_.size());
    for (std::size_t i = 0; i < lg_.size(); ++i) all.set(i);
    search(std::move(all), Bitset(lg_.size()), 0);
    SolveResult r;
    r.set = lg_.to_vertex_set(best_set_);
    r.weight = best_ < 0 ? 0 : best_;
    r.status = exceeded_ ? SolveStatus::budget_exceeded : SolveStatus::optimal;
    r.nodes = nodes_;
    return r;
  }

 private:
  void take(std::size_t v, Bitset& cand, Bitset& chosen, Weight& value) const {
    chosen.set(v);
    value += lg_.weights[v];
    cand.and_not(lg_.closed[v]);
  }

  // Isolated, dominant pendant and dominant simplicial vertices of the
  // candidate subgraph are always part of some optimum.
  void reduce(Bitset& cand, Bitset& chosen, Weight& value) const {
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<std::size_t> order;
      cand.for_each([&](std::size_t v) { order.push_back(v); });
      for (std::size_t v : order) {
        if (!cand.test(v)) continue;
        const Bitset nv = lg_.adj[v] & cand;
        const std::size_t deg = nv.count();
        bool dominant = true;
        if (deg > 0) {
          nv.for_each([&](std::size_t u) {
            if (!dominant) return;
            if (lg_.weights[u] > lg_.weights[v]) { dominant = false; return; }
            // every other neighbour of v must be adjacent to u
            Bitset rest = nv;
            rest.reset(u);
            if (!rest.subset_of(lg_.adj[u])) dominant = false;
          });
        }
        if (dominant) {
          take(v, cand, chosen, value);
          changed = true;
        }
      }
    }
  }

  void search(Bitset cand, Bitset chosen, Weight value) {
    if (exceeded_) return;
    if (++nodes_ > budget_.max_nodes_bnb ||
        (deadline_ && (nodes_ & 1023) == 0 && std::chrono::steady_clock::now() > *deadline_)) {
      exceeded_ = true;
      return;
    }
    if (opts_.interleave_reductions) reduce(cand, chosen, value);

    Weight remaining = 0;
    cand.for_each([&](std::size_t v) { remaining += lg_.weights[v]; });
    if (opts_.on_node) opts_.on_node({lg_.to_vertex_set(cand), value, value + remaining});

    if (!cand.any()) {
      if (value > best_) {
        best_ = value;
        best_set_ = chosen;
      }
      return;
    }
    if (value + remaining <= best_) return;

    std::size_t pick = 0;
    std::size_t pick_deg = 0;
    bool first = true;
    cand.for_each([&](std::size_t v) {
      const std::size_t d = lg_.adj[v].count_and(cand);
      if (first || d > pick_deg) {
        pick = v;
        pick_deg = d;
        first = false;
      }
    });

    {
      Bitset c = cand;
      Bitset s = chosen;
      Weight val = value;
      take(pick, c, s, val);
      search(std::move(c), std::move(s), val);
    }
    cand.reset(pick);
    search(std::move(cand), std::move(chosen), value);
  }

  LocalGraph lg_;
  SolveBudget budget_;
  BnbOptions opts_;
  Bitset best_set_;
  Weight best_ = -1;
  std::uint64_t nodes_ = 0;
  bool exceeded_ = false;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
};

}  // namespace detail

/// Branch-and-reduce MWIS: branches on a maximum-degree candidate (include it
/// and drop N[v], or drop v), prunes with committed + remaining weight, and
/// applies include-only dominance reductions at every node.
inline SolveResult solve_branch_and_bound(const Graph& g, const SolveBudget& budget = {},
                                          const BnbOptions& opts = {}) {
  SolveResult r = detail::BranchAndReduce(g, budget, opts).run();
  if (!is_independent(g, r.set)) throw std::logic_error("branch-and-bound produced a dependent set");
  return r;
}

}  // namespace udgred
