#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "udgred/graph_json.hpp"
#include "udgred/kernelizer.hpp"
#include "udgred/rng.hpp"
#include "udgred/udg_gen.hpp"

namespace udgred {

inline constexpr const char* kVersion = "0.1.0";

/// How weighted ensembles pick their geometries.
///  - filtered: only geometries whose unweighted kernel is non-empty
///  - fresh:    the first num_geometries geometry seeds, unconditionally
enum class GeometryMode { filtered, fresh };

struct EnsembleSpec {
  std::vector<int> L_values;
  std::vector<double> rho_values;
  std::vector<int> rb_sq_values;
  Weight weight_max = 1;
  std::size_t num_geometries = 1;
  std::size_t weight_realizations = 1;
  std::uint64_t base_seed = 0;
  std::vector<Rule> rules{kAllRules.begin(), kAllRules.end()};
  std::size_t unconfined_cap = 16;
  std::size_t workers = 1;
  GeometryMode geometry_mode = GeometryMode::filtered;
  /// Filtered mode gives up after num_geometries * this many candidates.
  std::size_t max_candidates_per_geometry = 20;
  /// elapsed_ms is only measured when set; otherwise it is written as 0 so that
  /// records.csv stays byte-reproducible.
  bool record_timing = false;

  void validate() const {
    if (L_values.empty() || rho_values.empty() || rb_sq_values.empty())
      throw usage_error("ensemble needs at least one L, rho and rb_sq value");
    if (num_geometries < 1 || weight_realizations < 1 || workers < 1 || max_candidates_per_geometry < 1)
      throw usage_error("ensemble counts must be at least 1");
    if (weight_max < 1) throw usage_error("weight_max must be at least 1");
    for (int L : L_values)
      if (L < 2) throw usage_error("grid size L must be at least 2");
    for (double rho : rho_values)
      if (!(rho > 0.0 && rho <= 1.0)) throw usage_error("density must lie in (0, 1]");
    for (int q : rb_sq_values)
      if (q < 1) throw usage_error("squared blockade radius must be positive");
  }
};

inline json ensemble_spec_to_json(const EnsembleSpec& s) {
  json rules = json::array();
  for (Rule r : s.rules) rules.push_back(rule_name(r));
  return {{"L", s.L_values},
          {"rho", s.rho_values},
          {"rb_sq", s.rb_sq_values},
          {"W", s.weight_max},
          {"num_geometries", s.num_geometries},
          {"weight_realizations", s.weight_realizations},
          {"base_seed", s.base_seed},
          {"rules", std::move(rules)},
          {"unconfined_cap", s.unconfined_cap},
          {"workers", s.workers},
          {"geometry_mode", s.geometry_mode == GeometryMode::filtered ? "filtered" : "fresh"},
          {"max_candidates_per_geometry", s.max_candidates_per_geometry},
          {"record_timing", s.record_timing}};
}

inline EnsembleSpec ensemble_spec_from_json(const json& j) {
  EnsembleSpec s;
  s.L_values = j.at("L").get<std::vector<int>>();
  s.rho_values = j.at("rho").get<std::vector<double>>();
  s.rb_sq_values = j.at("rb_sq").get<std::vector<int>>();
  s.weight_max = j.value("W", Weight{1});
  s.num_geometries = j.value("num_geometries", std::size_t{1});
  s.weight_realizations = j.value("weight_realizations", std::size_t{1});
  s.base_seed = j.value("base_seed", std::uint64_t{0});
  if (j.contains("rules")) {
    s.rules.clear();
    for (const auto& r : j.at("rules")) s.rules.push_back(parse_rule(r.get<std::string>()));
  }
  s.unconfined_cap = j.value("unconfined_cap", std::size_t{16});
  s.workers = j.value("workers", std::size_t{1});
  const auto mode = j.value("geometry_mode", std::string("filtered"));
  if (mode == "filtered") s.geometry_mode = GeometryMode::filtered;
  else if (mode == "fresh") s.geometry_mode = GeometryMode::fresh;
  else throw usage_error("geometry_mode must be 'filtered' or 'fresh'");
  s.max_candidates_per_geometry = j.value("max_candidates_per_geometry", std::size_t{20});
  s.record_timing = j.value("record_timing", false);
  s.validate();
  return s;
}

// Seed derivation. Geometry seeds depend only on (L, rho, rb_sq) and the
// candidate index, so cells that differ only in W share geometries.
inline std::uint64_t rho_key(double rho) { return static_cast<std::uint64_t>(std::llround(rho * 1e6)); }

inline std::uint64_t geometry_seed_for(std::uint64_t base, int L, double rho, int rb_sq, std::uint64_t index) {
  return derive_seed(base, {0x47454f4dull /* "GEOM" */, static_cast<std::uint64_t>(L), rho_key(rho),
                            static_cast<std::uint64_t>(rb_sq), index});
}

inline std::uint64_t weight_seed_for(std::uint64_t geometry_seed, Weight W, std::uint64_t index) {
  return derive_seed(geometry_seed, {0x57474854ull /* "WGHT" */, static_cast<std::uint64_t>(W), index});
}

struct EnsembleRecord {
  int L = 0;
  double rho = 0;
  int rb_sq = 0;
  Weight W = 1;
  std::uint64_t geometry_seed = 0;
  std::uint64_t weight_seed = 0;
  std::size_t n_G = 0;
  std::size_t m_G = 0;
  std::size_t n_K = 0;
  std::size_t m_K = 0;
  double xi = 0;
  Weight offset = 0;
  bool fully_reduced = false;
  RuleCounts rule_counts;
  double elapsed_ms = 0;
  /// Set when the instance failed; the statistics fields are then meaningless.
  std::optional<std::string> error;
};

/// Generates, weights and kernelizes one instance. Failures land in `error`.
inline EnsembleRecord run_instance(const InstanceSpec& inst, const KernelOptions& opts, bool timing = false) {
  EnsembleRecord rec;
  rec.L = inst.L;
  rec.rho = inst.rho;
  rec.rb_sq = inst.rb_sq;
  rec.W = inst.weight_max;
  rec.geometry_seed = inst.geometry_seed;
  rec.weight_seed = inst.weight_seed;
  try {
    const Graph g = generate_instance(inst);
    rec.n_G = g.num_alive();
    rec.m_G = g.num_edges();
    const auto start = std::chrono::steady_clock::now();
    const KernelResult k = kernelize(g, opts);
    if (timing)
      rec.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    rec.n_K = k.n_K;
    rec.m_K = k.m_K;
    rec.xi = k.xi;
    rec.offset = k.offset;
    rec.fully_reduced = k.fully_reduced();
    rec.rule_counts = k.rule_counts;
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

/// Runs fn(0..n-1) on up to `workers` threads; results keep index order.
template <typename F>
auto parallel_map(std::size_t n, std::size_t workers, F&& fn) -> std::vector<decltype(fn(std::size_t{}))> {
  std::vector<decltype(fn(std::size_t{}))> out(n);
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) out[i] = fn(i);
    });
  for (auto& t : pool) t.join();
  return out;
}

struct CellKey {
  int L = 0;
  double rho = 0;
  int rb_sq = 0;
  Weight W = 1;
  friend bool operator==(const CellKey&, const CellKey&) = default;
};

inline CellKey cell_of(const EnsembleRecord& r) { return {r.L, r.rho, r.rb_sq, r.W}; }

namespace detail {

/// Geometry seeds used for one cell, in candidate order.
inline std::vector<std::uint64_t> select_geometries(const EnsembleSpec& spec, int L, double rho, int rb_sq,
                                                    const KernelOptions& opts) {
  std::vector<std::uint64_t> seeds;
  if (spec.weight_max == 1 || spec.geometry_mode == GeometryMode::fresh) {
    for (std::size_t g = 0; g < spec.num_geometries; ++g)
      seeds.push_back(geometry_seed_for(spec.base_seed, L, rho, rb_sq, g));
    return seeds;
  }
  const std::size_t limit = spec.num_geometries * spec.max_candidates_per_geometry;
  const std::size_t batch = std::max<std::size_t>(spec.workers * 4, 16);
  for (std::size_t start = 0; start < limit && seeds.size() < spec.num_geometries; start += batch) {
    const std::size_t count = std::min(batch, limit - start);
    const auto finite = parallel_map(count, spec.workers, [&](std::size_t i) {
      InstanceSpec inst{L, rho, rb_sq, 1, geometry_seed_for(spec.base_seed, L, rho, rb_sq, start + i), 0};
      const EnsembleRecord r = run_instance(inst, opts);
      return static_cast<char>(!r.error && !r.fully_reduced);
    });
    for (std::size_t i = 0; i < count && seeds.size() < spec.num_geometries; ++i)
      if (finite[i]) seeds.push_back(geometry_seed_for(spec.base_seed, L, rho, rb_sq, start + i));
  }
  if (seeds.size() < spec.num_geometries)
    std::cerr << "warning: cell (L=" << L << ", rho=" << rho << ", rb_sq=" << rb_sq << ") found only "
              << seeds.size() << " geometries with finite unweighted kernels\n";
  return seeds;
}

}  // namespace detail

/// One record per (cell, geometry, weight realization), ordered by cell
/// (L, then rho, then rb_sq as listed), geometry, then weight index.
inline std::vector<EnsembleRecord> run_ensemble(const EnsembleSpec& spec) {
  spec.validate();
  const KernelOptions opts{spec.rules, spec.unconfined_cap};
  std::vector<InstanceSpec> tasks;
  for (int L : spec.L_values)
    for (double rho : spec.rho_values)
      for (int rb_sq : spec.rb_sq_values)
        for (std::uint64_t gs : detail::select_geometries(spec, L, rho, rb_sq, opts))
          for (std::size_t k = 0; k < spec.weight_realizations; ++k)
            tasks.push_back({L, rho, rb_sq, spec.weight_max, gs, weight_seed_for(gs, spec.weight_max, k)});
  return parallel_map(tasks.size(), spec.workers,
                      [&](std::size_t i) { return run_instance(tasks[i], opts, spec.record_timing); });
}

struct CellSummary {
  CellKey cell;
  std::size_t num_graphs = 0;   ///< #G (successful rows)
  std::size_t num_kernels = 0;  ///< #K (rows with n_K > 0)
  std::size_t num_failed = 0;
  double r_K = 0;
  double mean_xi = 0;
  double std_xi = 0;  ///< population standard deviation
  double mean_xi_finite = std::numeric_limits<double>::quiet_NaN();
  double mean_n_G = 0;
  double xi_star = 0;
};

/// Per-cell statistics, cells in order of first appearance. xi is recomputed
/// from the integer counts so the summary is reproducible from records.csv.
inline std::vector<CellSummary> aggregate(const std::vector<EnsembleRecord>& records) {
  if (records.empty()) throw usage_error("cannot aggregate an empty record list");
  std::vector<CellSummary> out;
  std::vector<std::vector<const EnsembleRecord*>> groups;
  for (const auto& r : records) {
    const CellKey key = cell_of(r);
    auto it = std::find_if(out.begin(), out.end(), [&](const CellSummary& c) { return c.cell == key; });
    if (it == out.end()) {
      out.push_back({key});
      groups.emplace_back();
      it = out.end() - 1;
    }
    groups[static_cast<std::size_t>(it - out.begin())].push_back(&r);
  }
  for (std::size_t c = 0; c < out.size(); ++c) {
    CellSummary& s = out[c];
    double sum_xi = 0, sum_sq = 0, sum_finite = 0, sum_n = 0;
    for (const EnsembleRecord* r : groups[c]) {
      if (r->error) {
        ++s.num_failed;
        continue;
      }
      const double xi = reducibility(r->n_G, r->n_K).xi;
      ++s.num_graphs;
      sum_xi += xi;
      sum_sq += xi * xi;
      sum_n += static_cast<double>(r->n_G);
      if (r->n_K > 0) {
        ++s.num_kernels;
        sum_finite += xi;
      }
    }
    if (s.num_graphs == 0) {
      s.mean_xi = s.std_xi = s.r_K = s.mean_n_G = s.xi_star = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const double n = static_cast<double>(s.num_graphs);
    s.r_K = static_cast<double>(s.num_kernels) / n;
    s.mean_xi = sum_xi / n;
    s.std_xi = std::sqrt(std::max(0.0, sum_sq / n - s.mean_xi * s.mean_xi));
    if (s.num_kernels > 0) s.mean_xi_finite = sum_finite / static_cast<double>(s.num_kernels);
    s.mean_n_G = sum_n / n;
    s.xi_star = s.mean_n_G >= 1.0 ? 1.0 - 1.0 / std::sqrt(s.mean_n_G) : 0.0;
  }
  return out;
}

// CSV output: floats with 6 significant digits, '.' separator, '\n' rows.

inline std::string format_float(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline constexpr const char* kRecordsHeader =
    "L,rho,rb_sq,W,geometry_seed,weight_seed,n_G,m_G,n_K,m_K,xi,offset,fully_reduced,"
    "isolated,pendant,simplicial,fold,twin,unconfined,elapsed_ms";

inline constexpr const char* kSummaryHeader =
    "L,rho,rb_sq,W,num_graphs,num_kernels,num_failed,r_K,mean_xi,std_xi,mean_xi_finite,mean_n_G,xi_star";

/// Failed rows leave every field after m_G empty.
inline std::string records_to_csv(const std::vector<EnsembleRecord>& records) {
  std::ostringstream os;
  os << kRecordsHeader << '\n';
  for (const auto& r : records) {
    os << r.L << ',' << format_float(r.rho) << ',' << r.rb_sq << ',' << r.W << ',' << r.geometry_seed << ','
       << r.weight_seed << ',' << r.n_G << ',' << r.m_G << ',';
    if (r.error) {
      os << ",,,,,,,,,,,\n";
      continue;
    }
    os << r.n_K << ',' << r.m_K << ',' << format_float(r.xi) << ',' << r.offset << ','
       << (r.fully_reduced ? 1 : 0);
    for (Rule rule : kAllRules) os << ',' << r.rule_counts[rule];
    os << ',' << format_float(r.elapsed_ms) << '\n';
  }
  return os.str();
}

inline std::string summary_to_csv(const std::vector<CellSummary>& cells) {
  std::ostringstream os;
  os << kSummaryHeader << '\n';
  for (const auto& c : cells)
    os << c.cell.L << ',' << format_float(c.cell.rho) << ',' << c.cell.rb_sq << ',' << c.cell.W << ','
       << c.num_graphs << ',' << c.num_kernels << ',' << c.num_failed << ',' << format_float(c.r_K) << ','
       << format_float(c.mean_xi) << ',' << format_float(c.std_xi) << ',' << format_float(c.mean_xi_finite)
       << ',' << format_float(c.mean_n_G) << ',' << format_float(c.xi_star) << '\n';
  return os.str();
}

/// Parses records.csv back into records (xi and elapsed_ms at CSV precision).
inline std::vector<EnsembleRecord> records_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != kRecordsHeader) throw usage_error("records.csv header mismatch");
  std::vector<EnsembleRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 20) throw usage_error("records.csv row has " + std::to_string(f.size()) + " fields");
    EnsembleRecord r;
    r.L = std::stoi(f[0]);
    r.rho = std::stod(f[1]);
    r.rb_sq = std::stoi(f[2]);
    r.W = std::stoll(f[3]);
    r.geometry_seed = std::stoull(f[4]);
    r.weight_seed = std::stoull(f[5]);
    r.n_G = std::stoull(f[6]);
    r.m_G = std::stoull(f[7]);
    if (f[8].empty()) {
      r.error = "failed";
      out.push_back(r);
      continue;
    }
    r.n_K = std::stoull(f[8]);
    r.m_K = std::stoull(f[9]);
    r.xi = std::stod(f[10]);
    r.offset = std::stoll(f[11]);
    r.fully_reduced = f[12] == "1";
    for (std::size_t i = 0; i < kAllRules.size(); ++i) r.rule_counts.counts[i] = std::stoull(f[13 + i]);
    r.elapsed_ms = std::stod(f[19]);
    out.push_back(r);
  }
  return out;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw usage_error("cannot write " + path.string());
  out << text;
}

/// Writes records.csv, summary.csv and manifest.json into `dir`.
inline void write_ensemble_outputs(const std::filesystem::path& dir, const EnsembleSpec& spec,
                                   const std::vector<EnsembleRecord>& records) {
  std::filesystem::create_directories(dir);
  write_text_file(dir / "records.csv", records_to_csv(records));
  const auto cells = aggregate(records);
  write_text_file(dir / "summary.csv", summary_to_csv(cells));
  std::size_t failed = 0;
  for (const auto& r : records) failed += r.error ? 1 : 0;
  const json manifest = {{"software", "udgred"},
                         {"version", kVersion},
                         {"spec", ensemble_spec_to_json(spec)},
                         {"num_records", records.size()},
                         {"num_failed", failed},
                         {"num_cells", cells.size()}};
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace udgred
