// Acceptance suite. Each check prints one PASS/FAIL line with the measured
// quantity; the process exits non-zero if any check fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "support/oracle.hpp"
#include "support/rule_safety.hpp"
#include "udgred/exact_solver.hpp"
#include "udgred/harness.hpp"
#include "udgred/kernelizer.hpp"
#include "udgred/udg_gen.hpp"

namespace {

using namespace udgred;

struct Verdict {
  bool pass = false;
  std::string detail;
};

Verdict oracle_equivalence() {
  std::size_t instances = 0;
  std::size_t largest = 0;
  for (int rb_sq : {1, 2, 4, 5, 8, 9})
    for (double rho : {0.6, 0.8, 1.0})
      for (Weight W : {1, 10})
        for (std::uint64_t k = 0; k < 56; ++k) {
          const std::uint64_t gs = geometry_seed_for(2024, 4, rho, rb_sq, k);
          const Graph g = generate_instance({4, rho, rb_sq, W, gs, weight_seed_for(gs, W, 0)});
          largest = std::max(largest, g.num_alive());
          const KernelResult r = kernelize(g);
          const Weight truth = testing::mwis(g);
          const SolveResult kernel_opt = solve_exhaustive(r.kernel);
          const VertexSet lifted = lift_solution(r, kernel_opt.set);
          if (r.offset + kernel_opt.weight != truth || !is_independent(g, lifted) || total_weight(g, lifted) != truth)
            return {false, "mismatch at rb_sq=" + std::to_string(rb_sq) + " rho=" + format_float(rho) +
                               " W=" + std::to_string(W) + " k=" + std::to_string(k)};
          ++instances;
        }
  return {instances >= 2000 && largest <= 18,
          std::to_string(instances) + " instances, n_G <= " + std::to_string(largest) + ", all exact"};
}

Verdict per_rule_safety() {
  std::string detail;
  bool pass = true;
  for (Rule rule : kAllRules) {
    const testing::SafetyStats s = testing::rule_safety(rule, 1000, 0x5AFE + static_cast<std::uint64_t>(rule));
    const bool ok = s.firings >= 1000 && s.failures.empty();
    pass = pass && ok;
    detail += std::string(rule_name(rule)) + "=" + std::to_string(s.firings) +
              (s.failures.empty() ? "" : "(" + std::to_string(s.failures.size()) + " bad)") + " ";
  }
  return {pass, detail + "firings"};
}

// Independent count of lattice points within the blockade disc.
std::size_t lattice_points(int rb_sq) {
  std::size_t count = 0;
  for (int dx = -rb_sq; dx <= rb_sq; ++dx)
    for (int dy = -rb_sq; dy <= rb_sq; ++dy)
      if ((dx != 0 || dy != 0) && dx * dx + dy * dy <= rb_sq) ++count;
  return count;
}

Verdict connectivity_fingerprint() {
  const std::map<int, std::size_t> expected{{1, 4}, {2, 8}, {4, 12}, {5, 20}, {8, 24}, {9, 28}};
  bool pass = true;
  std::string detail;
  for (const auto& [rb_sq, want] : expected) {
    const Graph g = generate_geometry({21, 1.0, rb_sq, 1, 0, 0});
    const std::size_t deg = g.degree(10 * 21 + 10);
    pass = pass && deg == want && lattice_points(rb_sq) == want;
    detail += (detail.empty() ? "" : " ") + std::to_string(deg);
  }
  return {pass, "center degrees " + detail};
}

Verdict threshold_formulas() {
  const double a = embedding_threshold(100);
  const double b = embedding_threshold(2500);
  const std::size_t n = embedded_kernel_size(100, 0.9);
  const bool pass = std::abs(a - 0.9) <= 1e-12 && std::abs(b - 0.98) <= 1e-12 && n == 100;
  char buf[128];
  std::snprintf(buf, sizeof buf, "xi*(100)=%.15g xi*(2500)=%.15g size(100,0.9)=%zu", a, b, n);
  return {pass, buf};
}

EnsembleSpec desk_spec(int L, double rho, std::vector<int> rb_sq, Weight W, std::size_t geometries) {
  EnsembleSpec s;
  s.L_values = {L};
  s.rho_values = {rho};
  s.rb_sq_values = std::move(rb_sq);
  s.weight_max = W;
  s.num_geometries = geometries;
  s.base_seed = 20240501;
  return s;
}

Verdict easy_regime() {
  bool pass = true;
  std::string detail;
  for (const CellSummary& c : aggregate(run_ensemble(desk_spec(20, 0.7, {1, 2}, 1, 100)))) {
    const double fraction = 1.0 - c.r_K;
    pass = pass && c.num_graphs == 100 && fraction >= 0.80;
    detail += (detail.empty() ? "" : ", ") + std::string("rb_sq=") + std::to_string(c.cell.rb_sq) + ": " +
              format_float(fraction) + " fully reduced";
  }
  return {pass, detail};
}

Verdict hard_regime() {
  const auto cells = aggregate(run_ensemble(desk_spec(20, 0.9, {9}, 1, 50)));
  const CellSummary& c = cells.at(0);
  const bool pass = c.num_graphs == 50 && c.r_K >= 0.9 && c.num_kernels > 0 && c.mean_xi_finite < 0.6;
  return {pass, "finite fraction " + format_float(c.r_K) + ", mean xi over finite " + format_float(c.mean_xi_finite)};
}

Verdict weighting_helps() {
  EnsembleSpec s = desk_spec(20, 0.9, {4}, 10, 20);
  s.weight_realizations = 5;
  const auto weighted = run_ensemble(s);
  double sum_w = 0, sum_u = 0;
  std::size_t nw = 0, nu = 0;
  std::uint64_t last_geometry = 0;
  const KernelOptions opts;
  for (std::size_t i = 0; i < weighted.size(); ++i) {
    const EnsembleRecord& r = weighted[i];
    if (r.error) continue;
    sum_w += r.xi;
    ++nw;
    if (i == 0 || r.geometry_seed != last_geometry) {
      const EnsembleRecord u = run_instance({r.L, r.rho, r.rb_sq, 1, r.geometry_seed, 0}, opts);
      sum_u += u.xi;
      ++nu;
      last_geometry = r.geometry_seed;
    }
  }
  const double mean_w = nw ? sum_w / nw : 0.0;
  const double mean_u = nu ? sum_u / nu : 0.0;
  const bool pass = nw == 100 && nu == 20 && mean_w >= mean_u;
  return {pass, "mean xi W=10 " + format_float(mean_w) + " (" + std::to_string(nw) + " draws) vs W=1 " +
                    format_float(mean_u) + " (" + std::to_string(nu) + " geometries)"};
}

Verdict determinism() {
  EnsembleSpec s = desk_spec(12, 0.8, {4, 5, 9}, 10, 6);
  s.rho_values = {0.8, 0.9};
  s.weight_realizations = 3;
  const std::string first = records_to_csv(run_ensemble(s));
  const std::string second = records_to_csv(run_ensemble(s));
  s.workers = 8;
  const std::string parallel = records_to_csv(run_ensemble(s));
  const bool pass = first == second && first == parallel;
  return {pass, std::string("rerun ") + (first == second ? "identical" : "differs") + ", workers=8 " +
                    (first == parallel ? "identical" : "differs")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> checks{
      {"oracle equivalence", oracle_equivalence},
      {"per-rule safety", per_rule_safety},
      {"connectivity fingerprint", connectivity_fingerprint},
      {"threshold formulas", threshold_formulas},
      {"easy regime", easy_regime},
      {"hard regime", hard_regime},
      {"weighting increases reducibility", weighting_helps},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = checks[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %zu (%s): %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", i + 1, checks[i].first.c_str(),
                v.detail.c_str(), secs);
    std::fflush(stdout);
    if (!v.pass) ++failed;
  }
  std::printf("%d of %zu criteria failed\n", failed, checks.size());
  return failed == 0 ? 0 : 1;
}
