#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "ferroflow/diagnostics.hpp"
#include "ferroflow/io.hpp"
#include "ferroflow/mesh.hpp"
#include "ferroflow/mms.hpp"
#include "ferroflow/stepper.hpp"

namespace {

using namespace ferroflow;

struct RunConfig {
  int example = 1;
  int n = 4;
  double dt = 0.0;  // 0: default 1/n
  double T = 0.0;   // 0: example's final time
  int M = 2;
  double eta = 1.0, mu0 = 1.0, sigma = 1.0, tau = 1.0, chi0 = 1.0, beta = 1.0;
  std::string out = ".";
  bool vtk = false;
  bool heavy = false;
  unsigned seed = 0;  // reserved for randomized tooling
};

ExactSolution make_example(const RunConfig& cfg) {
  ExactSolution sol;
  switch (cfg.example) {
    case 1: sol = example1(); break;
    case 2: sol = example2(); break;
    case 3: sol = example3(); break;
    default: throw std::invalid_argument("example must be 1, 2 or 3");
  }
  if (!sol.homogeneous)
    forcing_from_exact(sol, cfg.eta, cfg.mu0, cfg.sigma, cfg.tau, cfg.chi0,
                       cfg.beta);
  return sol;
}

SchemeParams make_params(const RunConfig& cfg, const ExactSolution& sol) {
  SchemeParams p;
  p.eta = cfg.eta;
  p.mu0 = cfg.mu0;
  p.sigma = cfg.sigma;
  p.tau = cfg.tau;
  p.chi0 = cfg.chi0;
  p.beta = cfg.beta;
  p.M = cfg.M;
  p.dt = cfg.dt > 0.0 ? cfg.dt : 1.0 / cfg.n;
  p.T = cfg.T > 0.0 ? cfg.T : sol.T;
  return p;
}

void check_scale(const RunConfig& cfg, int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (n >= 32 && !cfg.heavy)
    throw std::invalid_argument(
        "n >= 32 needs --heavy (direct-solver memory)");
}

int cmd_run(const RunConfig& cfg) {
  check_scale(cfg, cfg.n);
  const ExactSolution sol = make_example(cfg);
  const Mesh mesh = build_uniform_mesh(cfg.n);
  const Simulation sim(mesh, sol, make_params(cfg, sol));
  const Diagnostics diag(sim);

  std::filesystem::create_directories(cfg.out);
  std::vector<EnergyRecord> energy;
  const SimState final_state = sim.run([&](int step, const SimState& s) {
    energy.push_back(diag.energy(s, step));
  });

  write_energy_csv(energy, cfg.out + "/energy.csv");
  if (!sol.homogeneous) {
    const ErrorReport rep = diag.error_norms(final_state, sim.data());
    write_errors_csv(rep, cfg.out + "/errors.csv");
    std::cout << "final relative errors: u_l2=" << format_double(rep.u_l2)
              << " m_l2=" << format_double(rep.m_l2)
              << " H_l2=" << format_double(rep.H_l2) << "\n";
  }
  if (cfg.vtk) write_vtk(sim, final_state, cfg.out + "/state.vtk");
  std::cout << "completed " << sim.num_steps() << " steps, final energy "
            << format_double(energy.back().E) << "\n";
  return 0;
}

int cmd_convergence(const RunConfig& cfg, const std::vector<int>& levels) {
  if (levels.empty()) throw std::invalid_argument("need at least one --n");
  for (size_t i = 0; i + 1 < levels.size(); ++i)
    if (levels[i + 1] != 2 * levels[i])
      throw std::invalid_argument("--n list must double at each level");
  const ExactSolution probe = make_example(cfg);
  if (probe.homogeneous)
    throw std::invalid_argument("convergence needs an example with an exact "
                                "solution (1 or 2)");

  std::vector<ErrorReport> reports;
  for (int n : levels) {
    check_scale(cfg, n);
    RunConfig level_cfg = cfg;
    level_cfg.n = n;
    level_cfg.dt = cfg.dt > 0.0 ? cfg.dt * levels.front() / n : 1.0 / n;
    const ExactSolution sol = make_example(level_cfg);
    const Mesh mesh = build_uniform_mesh(n);
    const Simulation sim(mesh, sol, make_params(level_cfg, sol));
    const Diagnostics diag(sim);
    reports.push_back(diag.error_norms(sim.run(), sim.data()));
    std::cout << "n=" << n << " u_l2=" << format_double(reports.back().u_l2)
              << "\n";
  }

  std::filesystem::create_directories(cfg.out);
  write_table_csv(levels, reports, convergence_orders(reports),
                  cfg.out + "/table.csv");
  return 0;
}

int cmd_export(const RunConfig& cfg, const std::string& path) {
  check_scale(cfg, cfg.n);
  const ExactSolution sol = make_example(cfg);
  const Mesh mesh = build_uniform_mesh(cfg.n);
  RunConfig run_cfg = cfg;
  if (cfg.T <= 0.0) run_cfg.T = 1.0 / cfg.n;  // placeholder grid for t=0 export
  const Simulation sim(mesh, sol, make_params(run_cfg, sol));
  const SimState state = cfg.T > 0.0 ? sim.run() : sim.initial_state();
  if (!path.empty()) {
    const auto dir = std::filesystem::path(path).parent_path();
    if (!dir.empty()) std::filesystem::create_directories(dir);
  }
  write_vtk(sim, state, path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed finite element solver for an incompressible "
               "ferrofluid flow model on the unit cube"};
  app.set_config("--config");
  app.require_subcommand(1);

  RunConfig cfg;
  std::vector<int> levels;
  std::string vtk_path = "state.vtk";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--example", cfg.example, "example id (1|2|3)");
    cmd->add_option("--dt", cfg.dt, "time step (default 1/n)");
    cmd->add_option("--T", cfg.T, "final time (default: example's)");
    cmd->add_option("--M", cfg.M, "quasi-Newton sweeps per step");
    cmd->add_option("--out", cfg.out, "output directory");
    cmd->add_flag("--heavy", cfg.heavy, "allow n >= 32 runs");
    cmd->add_option("--seed", cfg.seed, "seed for randomized tooling");
    cmd->add_option("--eta", cfg.eta, "viscosity");
    cmd->add_option("--mu0", cfg.mu0, "magnetic permeability");
    cmd->add_option("--sigma", cfg.sigma, "magnetization diffusion");
    cmd->add_option("--tau", cfg.tau, "relaxation time");
    cmd->add_option("--chi0", cfg.chi0, "magnetic susceptibility");
    cmd->add_option("--beta", cfg.beta, "torque coefficient");
  };

  CLI::App* run = app.add_subcommand("run", "single simulation run");
  add_common(run);
  run->add_option("--n", cfg.n, "mesh subdivisions per axis");
  run->add_flag("--vtk", cfg.vtk, "write final-state VTK");

  CLI::App* conv =
      app.add_subcommand("convergence", "refinement sweep and order table");
  add_common(conv);
  conv->add_option("--n", levels, "mesh levels, each double the last");

  CLI::App* exp = app.add_subcommand("export", "write a state as legacy VTK");
  add_common(exp);
  exp->add_option("--n", cfg.n, "mesh subdivisions per axis");
  exp->add_option("--vtk", vtk_path, "output file path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(cfg);
    if (conv->parsed()) return cmd_convergence(cfg, levels);
    return cmd_export(cfg, vtk_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 1;
  }
}
