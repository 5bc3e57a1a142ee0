#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace udgred {

using VertexId = std::uint32_t;
using Weight = std::int64_t;

/// Raised when a caller violates an operation's precondition.
class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Coord {
  std::int32_t x = 0;
  std::int32_t y = 0;
  friend bool operator==(const Coord&, const Coord&) = default;
};

/// Sorted, duplicate-free set of vertex ids.
class VertexSet {
 public:
  VertexSet() = default;
  VertexSet(std::initializer_list<VertexId> ids) : members_(ids) { normalize(); }
  explicit VertexSet(std::vector<VertexId> ids) : members_(std::move(ids)) { normalize(); }

  bool contains(VertexId v) const {
    return std::binary_search(members_.begin(), members_.end(), v);
  }
  void insert(VertexId v) {
    auto it = std::lower_bound(members_.begin(), members_.end(), v);
    if (it == members_.end() || *it != v) members_.insert(it, v);
  }
  void erase(VertexId v) {
    auto it = std::lower_bound(members_.begin(), members_.end(), v);
    if (it != members_.end() && *it == v) members_.erase(it);
  }
  void insert_all(const VertexSet& other) {
    std::vector<VertexId> merged;
    merged.reserve(members_.size() + other.size());
    std::set_union(members_.begin(), members_.end(), other.begin(), other.end(),
                   std::back_inserter(merged));
    members_ = std::move(merged);
  }
  bool intersects(const VertexSet& other) const {
    auto a = members_.begin();
    auto b = other.begin();
    while (a != members_.end() && b != other.end()) {
      if (*a == *b) return true;
      if (*a < *b) ++a; else ++b;
    }
    return false;
  }

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  using const_iterator = std::vector<VertexId>::const_iterator;
  const_iterator begin() const { return members_.begin(); }
  const_iterator end() const { return members_.end(); }
  VertexId operator[](std::size_t i) const { return members_[i]; }
  const std::vector<VertexId>& ids() const { return members_; }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;
  friend auto operator<=>(const VertexSet& a, const VertexSet& b) {
    return a.members_ <=> b.members_;
  }

 private:
  void normalize() {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  }

  std::vector<VertexId> members_;
};

/// Vertex-weighted undirected simple graph. Removed vertices stay allocated
/// (tombstoned) so ids remain stable; fresh vertices always get new ids.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n, Weight w = 1) {
    for (std::size_t i = 0; i < n; ++i) add_vertex(w);
  }

  VertexId add_vertex(Weight w, std::optional<Coord> c = std::nullopt) {
    if (w < 0) throw usage_error("vertex weight must be nonnegative");
    const auto id = static_cast<VertexId>(adj_.size());
    adj_.emplace_back();
    weight_.push_back(w);
    alive_.push_back(1);
    coord_.push_back(c);
    ++num_alive_;
    return id;
  }

  void add_edge(VertexId u, VertexId v) {
    check_alive(u);
    check_alive(v);
    if (u == v) throw usage_error("self-loops are not allowed");
    if (insert_sorted(adj_[u], v)) {
      insert_sorted(adj_[v], u);
      ++num_edges_;
    }
  }

  void remove_vertex(VertexId v) {
    check_alive(v);
    for (VertexId u : adj_[v]) {
      auto& nu = adj_[u];
      nu.erase(std::lower_bound(nu.begin(), nu.end(), v));
    }
    num_edges_ -= adj_[v].size();
    adj_[v].clear();
    adj_[v].shrink_to_fit();
    alive_[v] = 0;
    --num_alive_;
  }

  /// Number of ids ever allocated, alive or not.
  std::size_t capacity() const { return adj_.size(); }
  std::size_t num_alive() const { return num_alive_; }
  std::size_t num_edges() const { return num_edges_; }
  VertexId next_fresh_id() const { return static_cast<VertexId>(adj_.size()); }

  bool valid(VertexId v) const { return v < adj_.size(); }
  bool alive(VertexId v) const { return v < adj_.size() && alive_[v]; }

  Weight weight(VertexId v) const { return weight_[v]; }
  void set_weight(VertexId v, Weight w) {
    check_alive(v);
    if (w < 0) throw usage_error("vertex weight must be nonnegative");
    weight_[v] = w;
  }

  const std::optional<Coord>& coord(VertexId v) const { return coord_[v]; }

  /// Raw adjacency row; valid until the next mutation.
  std::span<const VertexId> adj(VertexId v) const { return adj_[v]; }
  std::size_t degree(VertexId v) const { return adj_[v].size(); }

  bool has_edge(VertexId u, VertexId v) const {
    const auto& a = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
    const VertexId other = adj_[u].size() <= adj_[v].size() ? v : u;
    return std::binary_search(a.begin(), a.end(), other);
  }

  std::vector<VertexId> alive_vertices() const {
    std::vector<VertexId> out;
    out.reserve(num_alive_);
    for (VertexId v = 0; v < adj_.size(); ++v)
      if (alive_[v]) out.push_back(v);
    return out;
  }

  Weight max_weight() const {
    Weight m = 0;
    for (VertexId v = 0; v < adj_.size(); ++v)
      if (alive_[v]) m = std::max(m, weight_[v]);
    return m;
  }

  std::size_t max_degree() const {
    std::size_t d = 0;
    for (VertexId v = 0; v < adj_.size(); ++v)
      if (alive_[v]) d = std::max(d, adj_[v].size());
    return d;
  }

  void check_alive(VertexId v) const {
    if (!valid(v)) throw usage_error("vertex id " + std::to_string(v) + " out of range");
    if (!alive_[v]) throw usage_error("vertex " + std::to_string(v) + " is not alive");
  }

  /// Full structural audit: sorted rows, symmetry, no self-loops, no edges to
  /// dead vertices, nonnegative weights, consistent counters.
  void audit() const {
    std::size_t alive_count = 0;
    std::size_t half_edges = 0;
    for (VertexId v = 0; v < adj_.size(); ++v) {
      if (weight_[v] < 0) throw std::logic_error("negative weight at " + std::to_string(v));
      if (!alive_[v]) {
        if (!adj_[v].empty()) throw std::logic_error("dead vertex with edges");
        continue;
      }
      ++alive_count;
      half_edges += adj_[v].size();
      for (std::size_t i = 0; i < adj_[v].size(); ++i) {
        const VertexId u = adj_[v][i];
        if (i > 0 && adj_[v][i - 1] >= u) throw std::logic_error("unsorted adjacency");
        if (u == v) throw std::logic_error("self-loop");
        if (!alive(u)) throw std::logic_error("edge to dead vertex");
        if (!std::binary_search(adj_[u].begin(), adj_[u].end(), v))
          throw std::logic_error("asymmetric adjacency");
      }
    }
    if (alive_count != num_alive_ || half_edges != 2 * num_edges_)
      throw std::logic_error("graph counters out of sync");
  }

 private:
  static bool insert_sorted(std::vector<VertexId>& row, VertexId v) {
    auto it = std::lower_bound(row.begin(), row.end(), v);
    if (it != row.end() && *it == v) return false;
    row.insert(it, v);
    return true;
  }

  std::vector<std::vector<VertexId>> adj_;
  std::vector<Weight> weight_;
  std::vector<char> alive_;
  std::vector<std::optional<Coord>> coord_;
  std::size_t num_alive_ = 0;
  std::size_t num_edges_ = 0;
};

inline VertexSet neighbors(const Graph& g, VertexId v) {
  g.check_alive(v);
  auto row = g.adj(v);
  return VertexSet(std::vector<VertexId>(row.begin(), row.end()));
}

inline VertexSet closed_neighborhood(const Graph& g, VertexId v) {
  VertexSet s = neighbors(g, v);
  s.insert(v);
  return s;
}

/// Union of open neighborhoods of `s`, minus `s` itself.
inline VertexSet neighbors_of_set(const Graph& g, const VertexSet& s) {
  std::vector<VertexId> out;
  for (VertexId v : s) {
    auto row = g.adj(v);
    out.insert(out.end(), row.begin(), row.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  std::erase_if(out, [&](VertexId u) { return s.contains(u); });
  return VertexSet(std::move(out));
}

inline void check_members_alive(const Graph& g, const VertexSet& s) {
  for (VertexId v : s) g.check_alive(v);
}

/// Number of edges of g with both endpoints in s.
inline std::size_t internal_edges(const Graph& g, const VertexSet& s) {
  std::size_t count = 0;
  for (VertexId v : s)
    for (VertexId u : g.adj(v))
      if (u > v && s.contains(u)) ++count;
  return count;
}

inline bool is_independent(const Graph& g, const VertexSet& s) {
  check_members_alive(g, s);
  for (VertexId v : s)
    for (VertexId u : g.adj(v))
      if (s.contains(u)) return false;
  return true;
}

inline void remove_vertices(Graph& g, const VertexSet& s) {
  check_members_alive(g, s);
  for (VertexId v : s) g.remove_vertex(v);
}

/// Creates a fresh vertex standing in for a folded structure.
inline VertexId add_fold_vertex(Graph& g, Weight weight, const VertexSet& nbrs) {
  check_members_alive(g, nbrs);
  const VertexId id = g.add_vertex(weight);
  for (VertexId u : nbrs) g.add_edge(id, u);
  return id;
}

inline Weight total_weight(const Graph& g, const VertexSet& s) {
  Weight total = 0;
  for (VertexId v : s) total += g.weight(v);
  return total;
}

inline Weight solution_weight(const Graph& g, const VertexSet& s) {
  if (!is_independent(g, s)) throw usage_error("solution is not an independent set");
  return total_weight(g, s);
}

/// Smallest legal penalty for evaluate_cost.
inline Weight default_penalty(const Graph& g) { return g.max_weight() + 1; }

/// C(x) = -sum_{i in x} w_i + U * |edges inside x|.
inline Weight evaluate_cost(const Graph& g, const VertexSet& x, Weight penalty_u) {
  if (penalty_u <= g.max_weight() || penalty_u <= 0)
    throw usage_error("penalty must exceed the maximum vertex weight");
  check_members_alive(g, x);
  return -total_weight(g, x) + penalty_u * static_cast<Weight>(internal_edges(g, x));
}

/// Copy of the alive part of g with ids renumbered 0..k-1 in ascending order.
/// `old_ids[i]` is the id in g of compact vertex i.
struct CompactGraph {
  Graph graph;
  std::vector<VertexId> old_ids;
};

inline CompactGraph compact(const Graph& g) {
  CompactGraph out;
  out.old_ids = g.alive_vertices();
  std::vector<VertexId> new_id(g.capacity(), 0);
  for (VertexId i = 0; i < out.old_ids.size(); ++i) {
    new_id[out.old_ids[i]] = i;
    out.graph.add_vertex(g.weight(out.old_ids[i]), g.coord(out.old_ids[i]));
  }
  for (VertexId i = 0; i < out.old_ids.size(); ++i)
    for (VertexId u : g.adj(out.old_ids[i]))
      if (new_id[u] > i) out.graph.add_edge(i, new_id[u]);
  return out;
}

/// Induced subgraph on `s` (alive members), compacted as in compact().
inline CompactGraph induced_subgraph(const Graph& g, const VertexSet& s) {
  CompactGraph out;
  out.old_ids = s.ids();
  for (VertexId v : s) out.graph.add_vertex(g.weight(v), g.coord(v));
  for (VertexId i = 0; i < s.size(); ++i)
    for (VertexId j = i + 1; j < s.size(); ++j)
      if (g.has_edge(s[i], s[j])) out.graph.add_edge(i, j);
  return out;
}

}  // namespace udgred
