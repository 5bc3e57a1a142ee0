#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "udgred/exact_solver.hpp"
#include "udgred/graph.hpp"

namespace udgred {

/// The reduction rules, in the order the kernelizer tries them.
enum class Rule { isolated, pendant, simplicial, fold, twin, unconfined };

inline constexpr std::array<Rule, 6> kAllRules = {Rule::isolated, Rule::pendant, Rule::simplicial,
                                                  Rule::fold,     Rule::twin,    Rule::unconfined};

inline constexpr std::string_view rule_name(Rule r) {
  constexpr std::array<std::string_view, 6> names = {"isolated", "pendant", "simplicial",
                                                     "fold",     "twin",    "unconfined"};
  return names[static_cast<std::size_t>(r)];
}

inline Rule parse_rule(std::string_view name) {
  for (Rule r : kAllRules)
    if (rule_name(r) == name) return r;
  throw usage_error("unknown reduction rule '" + std::string(name) + "'");
}

/// Parses a comma-separated rule list such as "isolated,pendant,fold".
/// "all" selects every rule.
inline std::vector<Rule> parse_rule_list(std::string_view list) {
  if (list == "all") return {kAllRules.begin(), kAllRules.end()};
  std::vector<Rule> out;
  while (!list.empty()) {
    const auto comma = list.find(',');
    const auto item = list.substr(0, comma);
    if (item.empty()) throw usage_error("empty entry in rule list");
    const Rule r = parse_rule(item);
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  if (out.empty()) throw usage_error("empty rule list");
  return out;
}

// Reconstruction records. Each describes how to extend a solution of the
// graph after the reduction to a solution of the graph before it.

/// The vertices belong to the solution.
struct IncludeStep {
  VertexSet included;
};

/// The vertex was dropped; some optimum avoids it.
struct ExcludeStep {
  VertexId excluded = 0;
};

/// `center` and its independent neighbourhood were replaced by `fold_new`.
/// fold_new selected => take `neighbors`, otherwise take `center`.
struct FoldVertexStep {
  VertexId fold_new = 0;
  VertexId center = 0;
  VertexSet neighbors;
};

/// Twins `pair` and their common neighbourhood were replaced by `fold_new`.
/// fold_new selected => take `neighbors`, otherwise take `pair`.
struct FoldTwinStep {
  VertexId fold_new = 0;
  VertexSet pair;
  VertexSet neighbors;
};

/// `vertex` was removed after its weight was subtracted from each of its
/// (clique) neighbours. It joins the solution iff no neighbour is selected.
struct WeightTransferStep {
  VertexId vertex = 0;
  VertexSet neighbors;
};

using TraceStep = std::variant<IncludeStep, ExcludeStep, FoldVertexStep, FoldTwinStep, WeightTransferStep>;

struct TraceEntry {
  Rule rule = Rule::isolated;
  TraceStep step;
  /// Weight guaranteed to the solution by this reduction.
  Weight offset_delta = 0;
};

inline std::string_view step_kind(const TraceStep& s) {
  constexpr std::array<std::string_view, 5> kinds = {"include", "exclude", "fold_vertex", "fold_twin",
                                                     "weight_transfer"};
  return kinds[s.index()];
}

struct RuleOutcome {
  bool applied = false;
  std::optional<TraceEntry> entry;
  /// Alive vertices whose neighbourhood or weight changed.
  VertexSet touched;
};

namespace detail {

inline RuleOutcome not_applied() { return {}; }

inline RuleOutcome applied(Rule rule, TraceStep step, Weight offset, VertexSet touched) {
  return {true, TraceEntry{rule, std::move(step), offset}, std::move(touched)};
}

/// Alive neighbours of `removed` (which are about to disappear) that survive.
inline VertexSet surviving_neighbors(const Graph& g, const VertexSet& removed) {
  return neighbors_of_set(g, removed);
}

inline bool is_clique(const Graph& g, std::span<const VertexId> s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (g.degree(s[i]) + 1 < s.size()) return false;
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (!g.has_edge(s[i], s[j])) return false;
  }
  return true;
}

inline bool is_independent_span(const Graph& g, std::span<const VertexId> s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (g.has_edge(s[i], s[j])) return false;
  return true;
}

}  // namespace detail

/// Degree-0 vertex: always in the solution.
inline RuleOutcome reduce_isolated(Graph& g, VertexId v) {
  g.check_alive(v);
  if (g.degree(v) != 0) return detail::not_applied();
  const Weight w = g.weight(v);
  g.remove_vertex(v);
  return detail::applied(Rule::isolated, IncludeStep{{v}}, w, {});
}

/// Degree-1 vertex v with neighbour u. If w_v >= w_u, v is taken and u dropped;
/// otherwise v is removed and its weight is moved onto u as an offset.
inline RuleOutcome reduce_pendant(Graph& g, VertexId v) {
  g.check_alive(v);
  if (g.degree(v) != 1) return detail::not_applied();
  const VertexId u = g.adj(v)[0];
  const Weight wv = g.weight(v);
  if (wv >= g.weight(u)) {
    const VertexSet gone{u, v};
    VertexSet touched = detail::surviving_neighbors(g, gone);
    remove_vertices(g, gone);
    return detail::applied(Rule::pendant, IncludeStep{{v}}, wv, std::move(touched));
  }
  g.remove_vertex(v);
  g.set_weight(u, g.weight(u) - wv);
  return detail::applied(Rule::pendant, WeightTransferStep{v, {u}}, wv, {u});
}

/// Vertex whose neighbourhood is a clique.
///  - w_v >= every neighbour: take v, drop N[v].
///  - some neighbour u with N[u] = N[v] and w_u >= w_v: v is dominated, drop it.
///  - otherwise: subtract w_v from every neighbour (dropping those that reach
///    zero or below), remove v, and record w_v as offset.
inline RuleOutcome reduce_simplicial(Graph& g, VertexId v) {
  g.check_alive(v);
  const auto nv = g.adj(v);
  if (!detail::is_clique(g, nv)) return detail::not_applied();
  const Weight wv = g.weight(v);
  const VertexSet nbrs(std::vector<VertexId>(nv.begin(), nv.end()));

  Weight max_nbr = 0;
  for (VertexId u : nbrs) max_nbr = std::max(max_nbr, g.weight(u));
  if (nbrs.empty() || wv >= max_nbr) {
    VertexSet gone = nbrs;
    gone.insert(v);
    VertexSet touched = detail::surviving_neighbors(g, gone);
    remove_vertices(g, gone);
    return detail::applied(Rule::simplicial, IncludeStep{{v}}, wv, std::move(touched));
  }

  for (VertexId u : nbrs) {
    if (g.weight(u) >= wv && g.degree(u) == nbrs.size()) {
      VertexSet touched = nbrs;
      g.remove_vertex(v);
      return detail::applied(Rule::simplicial, ExcludeStep{v}, 0, std::move(touched));
    }
  }

  VertexSet dropped;
  for (VertexId u : nbrs)
    if (g.weight(u) <= wv) dropped.insert(u);
  VertexSet gone = dropped;
  gone.insert(v);
  VertexSet touched = detail::surviving_neighbors(g, gone);
  remove_vertices(g, gone);
  for (VertexId u : nbrs) {
    if (dropped.contains(u)) continue;
    g.set_weight(u, g.weight(u) - wv);
    touched.insert(u);
  }
  return detail::applied(Rule::simplicial, WeightTransferStep{v, nbrs}, wv, std::move(touched));
}

/// Vertex folding. N(v) must be independent and either
///  - w(N(v)) > w_v and w(N(v)) - min_{u in N(v)} w_u < w_v, or
///  - deg(v) = 2 with all three weights equal (the unweighted degree-2 fold).
/// v and N(v) collapse into one fresh vertex of weight w(N(v)) - w_v adjacent
/// to N(N(v)) \ N[v]; the offset is w_v.
inline RuleOutcome reduce_fold(Graph& g, VertexId v) {
  g.check_alive(v);
  const auto nv = g.adj(v);
  if (nv.empty()) return detail::not_applied();
  const Weight wv = g.weight(v);
  Weight sum = 0;
  Weight min_w = g.weight(nv[0]);
  for (VertexId u : nv) {
    sum += g.weight(u);
    min_w = std::min(min_w, g.weight(u));
  }
  const bool weighted_case = sum > wv && sum - min_w < wv;
  const bool equal_degree2 = nv.size() == 2 && g.weight(nv[0]) == wv && g.weight(nv[1]) == wv;
  if (!weighted_case && !equal_degree2) return detail::not_applied();
  if (!detail::is_independent_span(g, nv)) return detail::not_applied();

  const VertexSet nbrs(std::vector<VertexId>(nv.begin(), nv.end()));
  VertexSet gone = nbrs;
  gone.insert(v);
  const VertexSet outer = neighbors_of_set(g, gone);
  remove_vertices(g, gone);
  const VertexId fresh = add_fold_vertex(g, sum - wv, outer);
  VertexSet touched = outer;
  touched.insert(fresh);
  return detail::applied(Rule::fold, FoldVertexStep{fresh, v, nbrs}, wv, std::move(touched));
}

/// Twin rule for non-adjacent u, v with N(u) = N(v) = {p, q, r} independent.
/// A = w_u + w_v, B = w_p + w_q + w_r, m = min weight in {p, q, r}.
///  - A >= B: take u, v and drop N[{u, v}].
///  - B - m < A < B: fold all five into one vertex of weight B - A.
inline RuleOutcome reduce_twin(Graph& g, VertexId u, VertexId v) {
  g.check_alive(u);
  g.check_alive(v);
  if (u == v || g.degree(u) != 3 || g.degree(v) != 3) return detail::not_applied();
  const auto nu = g.adj(u);
  const auto nv = g.adj(v);
  if (!std::equal(nu.begin(), nu.end(), nv.begin())) return detail::not_applied();
  if (!detail::is_independent_span(g, nu)) return detail::not_applied();

  const VertexSet pair{u, v};
  const VertexSet nbrs(std::vector<VertexId>(nu.begin(), nu.end()));
  const Weight a = g.weight(u) + g.weight(v);
  const Weight b = total_weight(g, nbrs);
  Weight m = g.weight(nbrs[0]);
  for (VertexId x : nbrs) m = std::min(m, g.weight(x));

  VertexSet gone = nbrs;
  gone.insert_all(pair);
  if (a >= b) {
    VertexSet touched = detail::surviving_neighbors(g, gone);
    remove_vertices(g, gone);
    return detail::applied(Rule::twin, IncludeStep{pair}, a, std::move(touched));
  }
  if (a > b - m) {
    const VertexSet outer = neighbors_of_set(g, gone);
    remove_vertices(g, gone);
    const VertexId fresh = add_fold_vertex(g, b - a, outer);
    VertexSet touched = outer;
    touched.insert(fresh);
    return detail::applied(Rule::twin, FoldTwinStep{fresh, pair, nbrs}, a, std::move(touched));
  }
  return detail::not_applied();
}

/// Looks for a twin partner of v among the degree-3 neighbours of v's
/// lowest-id neighbour, and applies reduce_twin to the first pair that fires.
inline RuleOutcome reduce_twin_at(Graph& g, VertexId v) {
  g.check_alive(v);
  if (g.degree(v) != 3) return detail::not_applied();
  const VertexId p = g.adj(v)[0];
  const auto nv = g.adj(v);
  const std::array<VertexId, 3> key = {nv[0], nv[1], nv[2]};
  std::vector<VertexId> partners;
  for (VertexId u : g.adj(p)) {
    if (u == v || g.degree(u) != 3) continue;
    const auto nu = g.adj(u);
    if (std::equal(nu.begin(), nu.end(), key.begin())) partners.push_back(u);
  }
  for (VertexId u : partners) {
    RuleOutcome out = reduce_twin(g, std::min(u, v), std::max(u, v));
    if (out.applied) return out;
  }
  return detail::not_applied();
}

/// Verdict of the confinement iteration.
enum class Confinement { confined, unconfined, abstained };

namespace detail {

inline Weight mwis_weight(const Graph& g, const VertexSet& s, VertexSet* argmax = nullptr) {
  if (s.empty()) {
    if (argmax) *argmax = {};
    return 0;
  }
  const CompactGraph sub = induced_subgraph(g, s);
  const SolveResult r = solve_branch_and_bound(sub.graph);
  if (r.status != SolveStatus::optimal) throw std::logic_error("inner MWIS exceeded its node budget");
  if (argmax) {
    std::vector<VertexId> ids;
    for (VertexId i : r.set) ids.push_back(sub.old_ids[i]);
    *argmax = VertexSet(std::move(ids));
  }
  return r.weight;
}

}  // namespace detail

/// Runs the weighted confinement iteration from S = {v}.
///
/// A neighbour x of S is a child when w_x >= w(S & N(x)). With R = N(x) \ N[S]:
///  - w_x >= w(S & N(x)) + MWIS(R) proves v unconfined;
///  - y in R with w_x >= w(S & N(x)) + MWIS(R - y) is a satellite and joins S.
/// All satellites found in a round are added together. If they are mutually
/// adjacent the premise "S is in every optimum" is contradicted, so v is
/// unconfined as well. No new satellites means v is confined. Any R larger
/// than `subproblem_cap` makes the whole check abstain.
inline Confinement confinement(const Graph& g, VertexId v, std::size_t subproblem_cap) {
  g.check_alive(v);
  VertexSet s{v};
  while (true) {
    const VertexSet ns = neighbors_of_set(g, s);
    VertexSet closed_s = ns;
    closed_s.insert_all(s);

    // Cap check first so the verdict never depends on which child is visited first.
    std::vector<std::pair<VertexId, VertexSet>> children;
    for (VertexId x : ns) {
      Weight sx = 0;
      for (VertexId y : g.adj(x))
        if (s.contains(y)) sx += g.weight(y);
      if (g.weight(x) < sx) continue;
      std::vector<VertexId> rest;
      for (VertexId y : g.adj(x))
        if (!closed_s.contains(y)) rest.push_back(y);
      if (rest.size() > subproblem_cap) return Confinement::abstained;
      children.emplace_back(x, VertexSet(std::move(rest)));
    }

    VertexSet satellites;
    for (const auto& [x, rest] : children) {
      Weight sx = 0;
      for (VertexId y : g.adj(x))
        if (s.contains(y)) sx += g.weight(y);
      const Weight slack = g.weight(x) - sx;
      if (total_weight(g, rest) <= slack) return Confinement::unconfined;
      VertexSet best;
      const Weight full = detail::mwis_weight(g, rest, &best);
      if (full <= slack) return Confinement::unconfined;
      // a satellite must lie in every optimum of G[R], in particular in `best`
      for (VertexId y : best) {
        if (satellites.contains(y)) continue;
        VertexSet without = rest;
        without.erase(y);
        if (total_weight(g, without) <= slack || detail::mwis_weight(g, without) <= slack)
          satellites.insert(y);
      }
    }
    if (satellites.empty()) return Confinement::confined;
    if (!detail::is_independent_span(g, satellites.ids())) return Confinement::unconfined;
    s.insert_all(satellites);
  }
}

/// Removes v when the confinement iteration proves it unconfined.
inline RuleOutcome reduce_unconfined(Graph& g, VertexId v, std::size_t subproblem_cap = 16) {
  if (confinement(g, v, subproblem_cap) != Confinement::unconfined) return detail::not_applied();
  VertexSet touched = neighbors(g, v);
  g.remove_vertex(v);
  return detail::applied(Rule::unconfined, ExcludeStep{v}, 0, std::move(touched));
}

/// Dispatches one rule at one vertex.
inline RuleOutcome apply_rule(Graph& g, Rule rule, VertexId v, std::size_t subproblem_cap = 16) {
  switch (rule) {
    case Rule::isolated: return reduce_isolated(g, v);
    case Rule::pendant: return reduce_pendant(g, v);
    case Rule::simplicial: return reduce_simplicial(g, v);
    case Rule::fold: return reduce_fold(g, v);
    case Rule::twin: return reduce_twin_at(g, v);
    case Rule::unconfined: return reduce_unconfined(g, v, subproblem_cap);
  }
  return detail::not_applied();
}

}  // namespace udgred
