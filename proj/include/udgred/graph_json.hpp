#pragma once

#include <fstream>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "udgred/graph.hpp"
#include "udgred/kernelizer.hpp"

namespace udgred {

using json = nlohmann::json;

struct GraphDocument {
  Graph graph;
  json meta = json::object();
};

/// {"n", "weights", "edges" (u < v, each once), "coords" (only when every
/// vertex has one), "meta"}. Dead vertices are dropped and ids compacted.
inline json graph_to_json(const Graph& g, const json& meta = json::object()) {
  const CompactGraph c = compact(g);
  const Graph& h = c.graph;
  json weights = json::array();
  json edges = json::array();
  json coords = json::array();
  bool all_coords = true;
  for (VertexId v = 0; v < h.capacity(); ++v) {
    weights.push_back(h.weight(v));
    for (VertexId u : h.adj(v))
      if (u > v) edges.push_back({v, u});
    if (h.coord(v)) coords.push_back({h.coord(v)->x, h.coord(v)->y});
    else all_coords = false;
  }
  json out = {{"n", h.capacity()}, {"weights", std::move(weights)}, {"edges", std::move(edges)}};
  if (all_coords && h.capacity() > 0) out["coords"] = std::move(coords);
  out["meta"] = meta.is_null() ? json::object() : meta;
  return out;
}

inline GraphDocument graph_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("weights") || !j.contains("edges"))
    throw usage_error("graph JSON needs fields n, weights, edges");
  const auto n = j.at("n").get<std::int64_t>();
  const auto& weights = j.at("weights");
  if (n < 0 || !weights.is_array() || static_cast<std::int64_t>(weights.size()) != n)
    throw usage_error("graph JSON: weights must have n entries");
  const bool has_coords = j.contains("coords") && !j.at("coords").is_null();
  if (has_coords && static_cast<std::int64_t>(j.at("coords").size()) != n)
    throw usage_error("graph JSON: coords must have n entries");

  GraphDocument doc;
  for (std::int64_t i = 0; i < n; ++i) {
    std::optional<Coord> c;
    if (has_coords) {
      const auto& p = j.at("coords").at(static_cast<std::size_t>(i));
      c = Coord{p.at(0).get<std::int32_t>(), p.at(1).get<std::int32_t>()};
    }
    doc.graph.add_vertex(weights.at(static_cast<std::size_t>(i)).get<Weight>(), c);
  }
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw usage_error("graph JSON: edge must be [u, v]");
    const auto u = e.at(0).get<std::int64_t>();
    const auto v = e.at(1).get<std::int64_t>();
    if (u < 0 || v >= n || u >= v) throw usage_error("graph JSON: edges need 0 <= u < v < n");
    if (doc.graph.has_edge(static_cast<VertexId>(u), static_cast<VertexId>(v)))
      throw usage_error("graph JSON: duplicate edge");
    doc.graph.add_edge(static_cast<VertexId>(u), static_cast<VertexId>(v));
  }
  if (j.contains("meta")) doc.meta = j.at("meta");
  return doc;
}

inline json vertex_set_to_json(const VertexSet& s) { return json(s.ids()); }

inline VertexSet vertex_set_from_json(const json& j) {
  return VertexSet(j.get<std::vector<VertexId>>());
}

inline json trace_entry_to_json(const TraceEntry& e) {
  json out = {{"rule", rule_name(e.rule)}, {"kind", step_kind(e.step)}, {"offset_delta", e.offset_delta}};
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IncludeStep>) {
          out["included"] = vertex_set_to_json(s.included);
        } else if constexpr (std::is_same_v<T, ExcludeStep>) {
          out["excluded"] = s.excluded;
        } else if constexpr (std::is_same_v<T, FoldVertexStep>) {
          out["fold_new"] = s.fold_new;
          out["fold_center"] = s.center;
          out["fold_neighbors"] = vertex_set_to_json(s.neighbors);
        } else if constexpr (std::is_same_v<T, FoldTwinStep>) {
          out["fold_new"] = s.fold_new;
          out["twin_pair"] = vertex_set_to_json(s.pair);
          out["twin_neighbors"] = vertex_set_to_json(s.neighbors);
        } else if constexpr (std::is_same_v<T, WeightTransferStep>) {
          out["vertex"] = s.vertex;
          out["neighbors"] = vertex_set_to_json(s.neighbors);
        }
      },
      e.step);
  return out;
}

inline TraceEntry trace_entry_from_json(const json& j) {
  TraceEntry e;
  e.rule = parse_rule(j.at("rule").get<std::string>());
  e.offset_delta = j.at("offset_delta").get<Weight>();
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "include") {
    e.step = IncludeStep{vertex_set_from_json(j.at("included"))};
  } else if (kind == "exclude") {
    e.step = ExcludeStep{j.at("excluded").get<VertexId>()};
  } else if (kind == "fold_vertex") {
    e.step = FoldVertexStep{j.at("fold_new").get<VertexId>(), j.at("fold_center").get<VertexId>(),
                            vertex_set_from_json(j.at("fold_neighbors"))};
  } else if (kind == "fold_twin") {
    e.step = FoldTwinStep{j.at("fold_new").get<VertexId>(), vertex_set_from_json(j.at("twin_pair")),
                          vertex_set_from_json(j.at("twin_neighbors"))};
  } else if (kind == "weight_transfer") {
    e.step = WeightTransferStep{j.at("vertex").get<VertexId>(), vertex_set_from_json(j.at("neighbors"))};
  } else {
    throw usage_error("unknown trace entry kind '" + kind + "'");
  }
  return e;
}

inline json rule_counts_to_json(const RuleCounts& c) {
  json out = json::object();
  for (Rule r : kAllRules) out[std::string(rule_name(r))] = c[r];
  return out;
}

inline json kernel_result_to_json(const KernelResult& r) {
  json trace = json::array();
  for (const auto& e : r.trace) trace.push_back(trace_entry_to_json(e));
  return {{"kernel", graph_to_json(r.kernel)},
          {"kernel_ids", r.kernel_ids},
          {"input_capacity", r.input_capacity},
          {"offset", r.offset},
          {"n_G", r.n_G},
          {"m_G", r.m_G},
          {"n_K", r.n_K},
          {"m_K", r.m_K},
          {"xi", r.xi},
          {"xi_clamped", r.xi_clamped},
          {"rule_counts", rule_counts_to_json(r.rule_counts)},
          {"trace", std::move(trace)}};
}

/// Restores what lift_solution needs from a kernel_result_to_json document.
inline KernelResult kernel_result_from_json(const json& j) {
  KernelResult r;
  r.kernel = graph_from_json(j.at("kernel")).graph;
  r.kernel_ids = j.at("kernel_ids").get<std::vector<VertexId>>();
  if (r.kernel_ids.size() != r.kernel.capacity()) throw usage_error("kernel_ids size mismatch");
  r.input_capacity = j.at("input_capacity").get<std::size_t>();
  r.offset = j.at("offset").get<Weight>();
  r.n_G = j.at("n_G").get<std::size_t>();
  r.m_G = j.at("m_G").get<std::size_t>();
  r.n_K = j.at("n_K").get<std::size_t>();
  r.m_K = j.at("m_K").get<std::size_t>();
  r.xi = j.at("xi").get<double>();
  r.xi_clamped = j.value("xi_clamped", false);
  for (Rule rule : kAllRules)
    r.rule_counts[rule] = j.at("rule_counts").value(std::string(rule_name(rule)), std::size_t{0});
  for (const auto& e : j.at("trace")) r.trace.push_back(trace_entry_from_json(e));
  return r;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw usage_error("cannot open " + path);
  return json::parse(in);
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw usage_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace udgred
