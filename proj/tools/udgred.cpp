// udgred command line: instance generation, kernelization, exact solving,
// solution lifting and ensemble sweeps.

#include <cstdint>
#include <iostream>
#include <string>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include "CLI11.hpp"
#endif

#include "udgred/exact_solver.hpp"
#include "udgred/graph_json.hpp"
#include "udgred/harness.hpp"
#include "udgred/kernelizer.hpp"
#include "udgred/udg_gen.hpp"

namespace {

using namespace udgred;

json load(const std::string& in) {
  if (in != "-") return read_json_file(in);
  try {
    return json::parse(std::cin);
  } catch (const json::parse_error& e) {
    throw usage_error(std::string("stdin: ") + e.what());
  }
}

void emit(const json& j, const std::string& out) {
  if (out.empty() || out == "-") std::cout << j.dump(2) << '\n';
  else write_json_file(out, j);
}

int run_generate(const InstanceSpec& spec, const std::string& out) {
  const Graph g = generate_instance(spec);
  const json meta = {{"L", spec.L},
                     {"rho", spec.rho},
                     {"rb_sq", spec.rb_sq},
                     {"W", spec.weight_max},
                     {"geometry_seed", spec.geometry_seed},
                     {"weight_seed", spec.weight_seed}};
  emit(graph_to_json(g, meta), out);
  return 0;
}

int run_kernelize(const std::string& in, const std::string& rules, std::size_t cap, const std::string& out) {
  const GraphDocument doc = graph_from_json(load(in));
  const KernelResult r = kernelize(doc.graph, KernelOptions{parse_rule_list(rules), cap});
  json j = kernel_result_to_json(r);
  j["input_meta"] = doc.meta;
  emit(j, out);
  if (!out.empty() && out != "-")
    std::cerr << "n_G=" << r.n_G << " n_K=" << r.n_K << " xi=" << format_float(r.xi) << " offset=" << r.offset
              << '\n';
  return 0;
}

int run_solve(const std::string& in, const std::string& method, std::uint64_t budget_nodes,
              std::size_t max_exhaustive, const std::string& out) {
  const GraphDocument doc = graph_from_json(load(in));
  SolveBudget budget;
  budget.max_nodes_bnb = budget_nodes;
  budget.max_vertices_exhaustive = max_exhaustive;
  const SolveResult r =
      method == "exhaustive" ? solve_exhaustive(doc.graph, budget) : solve_branch_and_bound(doc.graph, budget);
  emit({{"method", method},
        {"status", to_string(r.status)},
        {"weight", r.weight},
        {"set", vertex_set_to_json(r.set)},
        {"nodes", r.nodes}},
       out);
  return r.status == SolveStatus::optimal ? 0 : 3;
}

int run_lift(const std::string& result_path, const std::string& solution_path, const std::string& out) {
  const KernelResult r = kernel_result_from_json(load(result_path));
  const json sol = load(solution_path);
  const VertexSet kernel_solution = vertex_set_from_json(sol.is_object() ? sol.at("set") : sol);
  const VertexSet lifted = lift_solution(r, kernel_solution);
  const Weight kernel_weight = solution_weight(r.kernel, kernel_solution);
  emit({{"set", vertex_set_to_json(lifted)}, {"weight", kernel_weight + r.offset}}, out);
  return 0;
}

int run_ensemble_cmd(const std::string& config, const std::string& out_dir, std::size_t workers, bool timing) {
  EnsembleSpec spec = ensemble_spec_from_json(read_json_file(config));
  if (workers > 0) spec.workers = workers;
  if (timing) spec.record_timing = true;
  const auto records = run_ensemble(spec);
  write_ensemble_outputs(out_dir, spec, records);
  std::cerr << "wrote " << records.size() << " records to " << out_dir << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernelization and benchmarking of MWIS instances on Rydberg-array unit-disk graphs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("udgred ") + kVersion);

  InstanceSpec gen;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "Generate a random unit-disk instance on an L x L grid");
  generate->add_option("--size", gen.L, "Grid side length L")->required();
  generate->add_option("--density", gen.rho, "Occupation density rho in (0, 1]")->required();
  generate->add_option("--rb-sq", gen.rb_sq, "Squared blockade radius (lattice units)")->required();
  generate->add_option("--weights", gen.weight_max, "Maximum weight W (1 = unweighted)")->default_val(1);
  generate->add_option("--geometry-seed", gen.geometry_seed)->default_val(0);
  generate->add_option("--weight-seed", gen.weight_seed)->default_val(0);
  generate->add_option("--out", gen_out, "Output JSON file ('-' for stdout)")->default_val("-");

  std::string k_in, k_rules = "all", k_out;
  std::size_t k_cap = 16;
  auto* kern = app.add_subcommand("kernelize", "Reduce a graph to its kernel");
  kern->add_option("--in", k_in)->required();
  kern->add_option("--rules", k_rules, "Comma-separated rules or 'all'")->default_val("all");
  kern->add_option("--unconfined-cap", k_cap, "Largest inner MWIS the unconfined rule may solve")->default_val(16);
  kern->add_option("--out", k_out)->default_val("-");

  std::string s_in, s_method = "bnb", s_out;
  std::uint64_t s_nodes = 50'000'000;
  std::size_t s_max_exh = 20;
  auto* solve = app.add_subcommand("solve", "Solve MWIS exactly");
  solve->add_option("--in", s_in)->required();
  solve->add_option("--method", s_method)->check(CLI::IsMember({"exhaustive", "bnb"}))->default_val("bnb");
  solve->add_option("--budget-nodes", s_nodes, "Branch-and-bound node budget")->default_val(50'000'000);
  solve->add_option("--max-exhaustive", s_max_exh, "Vertex limit for exhaustive search")->default_val(20);
  solve->add_option("--out", s_out)->default_val("-");

  std::string l_result, l_solution, l_out;
  auto* lift = app.add_subcommand("lift", "Lift a kernel solution back to the input graph");
  lift->add_option("--result", l_result, "kernelize output")->required();
  lift->add_option("--solution", l_solution, "kernel solution: id list or solve output")->required();
  lift->add_option("--out", l_out)->default_val("-");

  std::string e_config, e_dir;
  std::size_t e_workers = 0;
  bool e_timing = false;
  auto* ens = app.add_subcommand("ensemble", "Run an ensemble sweep and write records/summary CSVs");
  ens->add_option("--config", e_config)->required();
  ens->add_option("--out-dir", e_dir)->required();
  ens->add_option("--workers", e_workers, "Worker threads (overrides config)")->default_val(0);
  ens->add_flag("--timing", e_timing, "Measure elapsed_ms (output is then not byte-reproducible)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) return run_generate(gen, gen_out);
    if (*kern) return run_kernelize(k_in, k_rules, k_cap, k_out);
    if (*solve) return run_solve(s_in, s_method, s_nodes, s_max_exh, s_out);
    if (*lift) return run_lift(l_result, l_solution, l_out);
    if (*ens) return run_ensemble_cmd(e_config, e_dir, e_workers, e_timing);
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
