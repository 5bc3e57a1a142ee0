#pragma once

#include <array>
#include <cmath>
#include <deque>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "udgred/graph.hpp"
#include "udgred/reductions.hpp"

namespace udgred {

struct KernelOptions {
  std::vector<Rule> rules{kAllRules.begin(), kAllRules.end()};
  std::size_t unconfined_cap = 16;
};

struct RuleCounts {
  std::array<std::size_t, kAllRules.size()> counts{};

  std::size_t& operator[](Rule r) { return counts[static_cast<std::size_t>(r)]; }
  std::size_t operator[](Rule r) const { return counts[static_cast<std::size_t>(r)]; }
  std::size_t total() const {
    std::size_t t = 0;
    for (auto c : counts) t += c;
    return t;
  }
  friend bool operator==(const RuleCounts&, const RuleCounts&) = default;
};

struct Reducibility {
  double xi = 1.0;
  /// n_K exceeded n_G; xi was clamped to 0.
  bool clamped = false;
};

/// xi = 1 - n_K / n_G, defined as 1 for an empty input.
inline Reducibility reducibility(std::size_t n_g, std::size_t n_k) {
  if (n_g == 0) return {1.0, n_k > 0};
  if (n_k > n_g) return {0.0, true};
  return {1.0 - static_cast<double>(n_k) / static_cast<double>(n_g), false};
}

/// Reduction level 1 - 1/sqrt(N) above which embedding the kernel with
/// quadratic overhead needs fewer atoms than the native instance.
inline double embedding_threshold(std::size_t n_g) {
  if (n_g == 0) throw usage_error("embedding threshold needs at least one vertex");
  return 1.0 - 1.0 / std::sqrt(static_cast<double>(n_g));
}

/// Atoms needed to embed a kernel of a graph with n_G vertices reduced by xi:
/// round((1 - xi)^2 n_G^2).
inline std::uint64_t embedded_kernel_size(std::size_t n_g, double xi) {
  if (!(xi >= 0.0 && xi <= 1.0)) throw usage_error("reducibility must lie in [0, 1]");
  const double residual = (1.0 - xi) * static_cast<double>(n_g);
  return static_cast<std::uint64_t>(std::llround(residual * residual));
}

struct KernelResult {
  Graph kernel;  ///< compacted: ids 0..n_K-1
  /// kernel_ids[i] is the working-graph id of kernel vertex i. Working ids below
  /// the input's capacity are original vertices; larger ones were made by folds.
  std::vector<VertexId> kernel_ids;
  std::size_t input_capacity = 0;
  Weight offset = 0;
  std::vector<TraceEntry> trace;
  std::size_t n_G = 0;
  std::size_t m_G = 0;
  std::size_t n_K = 0;
  std::size_t m_K = 0;
  double xi = 1.0;
  bool xi_clamped = false;
  RuleCounts rule_counts;
  std::size_t applications = 0;

  bool fully_reduced() const { return n_K == 0; }
};

/// Replays `trace` backwards, turning a solution expressed in working-graph
/// ids of the final graph into one of the graph the trace started from.
inline VertexSet lift_solution(std::span<const TraceEntry> trace, VertexSet solution) {
  for (auto it = trace.rbegin(); it != trace.rend(); ++it) {
    std::visit(
        [&](const auto& step) {
          using T = std::decay_t<decltype(step)>;
          if constexpr (std::is_same_v<T, IncludeStep>) {
            solution.insert_all(step.included);
          } else if constexpr (std::is_same_v<T, ExcludeStep>) {
          } else if constexpr (std::is_same_v<T, FoldVertexStep>) {
            if (solution.contains(step.fold_new)) {
              solution.erase(step.fold_new);
              solution.insert_all(step.neighbors);
            } else {
              solution.insert(step.center);
            }
          } else if constexpr (std::is_same_v<T, FoldTwinStep>) {
            if (solution.contains(step.fold_new)) {
              solution.erase(step.fold_new);
              solution.insert_all(step.neighbors);
            } else {
              solution.insert_all(step.pair);
            }
          } else if constexpr (std::is_same_v<T, WeightTransferStep>) {
            if (!solution.intersects(step.neighbors)) solution.insert(step.vertex);
          }
        },
        it->step);
  }
  return solution;
}

/// Lifts an independent set of `result.kernel` (compact ids) to the original graph.
inline VertexSet lift_solution(const KernelResult& result, const VertexSet& kernel_solution) {
  for (VertexId v : kernel_solution)
    if (!result.kernel.alive(v)) throw usage_error("kernel solution references unknown vertex");
  if (!is_independent(result.kernel, kernel_solution))
    throw usage_error("kernel solution is not an independent set");
  std::vector<VertexId> working;
  for (VertexId v : kernel_solution) working.push_back(result.kernel_ids[v]);
  VertexSet lifted = lift_solution(result.trace, VertexSet(std::move(working)));
  for (VertexId v : lifted)
    if (v >= result.input_capacity) throw std::logic_error("fold vertex survived lifting");
  return lifted;
}

namespace detail {

class Kernelizer {
 public:
  Kernelizer(const Graph& input, const KernelOptions& opts) : g_(input), opts_(opts) {
    for (Rule r : kAllRules)
      if (std::find(opts.rules.begin(), opts.rules.end(), r) != opts.rules.end()) rules_.push_back(r);
    step_budget_ = 10 * std::max<std::size_t>(input.num_alive(), 1) * (input.max_degree() + 1);
  }

  KernelResult run() {
    KernelResult res;
    res.input_capacity = g_.capacity();
    res.n_G = g_.num_alive();
    res.m_G = g_.num_edges();

    // A round seeds every alive vertex; a round without any application
    // certifies the fixpoint.
    while (true) {
      for (VertexId v : g_.alive_vertices()) push(v);
      bool progress = false;
      while (!queue_.empty()) {
        const VertexId v = queue_.front();
        queue_.pop_front();
        queued_[v] = 0;
        if (!g_.alive(v)) continue;
        for (Rule r : rules_) {
          RuleOutcome out = apply_rule(g_, r, v, opts_.unconfined_cap);
          if (!out.applied) continue;
          progress = true;
          if (++res.applications > step_budget_)
            throw std::logic_error("kernelization exceeded its step budget");
          ++res.rule_counts[r];
          res.offset += out.entry->offset_delta;
          res.trace.push_back(std::move(*out.entry));
          for (VertexId t : out.touched) {
            if (!g_.alive(t)) continue;
            push(t);
            for (VertexId u : g_.adj(t)) push(u);
          }
          break;
        }
      }
      if (!progress) break;
    }

    CompactGraph c = compact(g_);
    res.kernel = std::move(c.graph);
    res.kernel_ids = std::move(c.old_ids);
    res.n_K = res.kernel.num_alive();
    res.m_K = res.kernel.num_edges();
    const Reducibility red = reducibility(res.n_G, res.n_K);
    res.xi = red.xi;
    res.xi_clamped = red.clamped;
    return res;
  }

 private:
  void push(VertexId v) {
    if (queued_.size() < g_.capacity()) queued_.resize(g_.capacity(), 0);
    if (!g_.alive(v) || queued_[v]) return;
    queued_[v] = 1;
    queue_.push_back(v);
  }

  Graph g_;
  KernelOptions opts_;
  std::vector<Rule> rules_;
  std::deque<VertexId> queue_;
  std::vector<char> queued_;
  std::size_t step_budget_ = 0;
};

}  // namespace detail

/// Applies the enabled rules until none fires anywhere. Rules are tried in the
/// fixed order isolated, pendant, simplicial, fold, twin, unconfined at each
/// vertex popped from a dirty queue; the vertices around a change are re-queued.
inline KernelResult kernelize(const Graph& g, const KernelOptions& opts = {}) {
  return detail::Kernelizer(g, opts).run();
}

inline KernelResult kernelize(const Graph& g, std::span<const Rule> rules, std::size_t unconfined_cap) {
  return kernelize(g, KernelOptions{{rules.begin(), rules.end()}, unconfined_cap});
}

}  // namespace udgred
