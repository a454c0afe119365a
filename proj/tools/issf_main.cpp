#include <algorithm>
#include <filesystem>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "issf/bench.hpp"

namespace fs = std::filesystem;
using namespace issf;

namespace {

struct SimulateArgs {
  std::string example = "scalar";
  std::string controller;
  std::string disturbance;
  std::optional<double> d;
  std::optional<double> epsilon;
  std::optional<double> frequency;
  std::optional<double> lambda;
  std::string x0;
  std::optional<double> tmax;
  std::optional<double> dt;
  std::string out = "out";
};

void print_summary(const RunResult& run, const std::string& stem) {
  std::cout << stem << ": status=" << run.summary.status << " steps=" << run.summary.steps
            << " max_signal=" << format_number(run.summary.max_signal)
            << " min_h=" << format_number(run.summary.min_h);
  if (!run.summary.message.empty()) std::cout << " (" << run.summary.message << ")";
  std::cout << "\n";
}

int simulate(const SimulateArgs& a, std::optional<std::uint64_t> seed) {
  ExperimentConfig cfg = default_config(parse_example(a.example));
  if (!a.controller.empty()) cfg.controller = parse_controller(a.controller);
  if (!a.disturbance.empty()) cfg.disturbance = parse_disturbance(a.disturbance);
  if (a.d) cfg.d = *a.d;
  if (a.epsilon) cfg.epsilon = *a.epsilon;
  if (a.frequency) cfg.frequency = *a.frequency;
  if (a.lambda) cfg.lambda = *a.lambda;
  if (a.tmax) cfg.t_final = *a.tmax;
  if (a.dt) cfg.dt = *a.dt;
  if (seed) cfg.seed = *seed;
  std::vector<Vector> states{cfg.x0};
  if (!a.x0.empty()) states = parse_states(a.x0, state_dim(cfg.example));
  cfg.validate();

  int code = 0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    ExperimentConfig c = cfg;
    c.x0 = states[i];
    const RunResult run = run_cell(c);
    const std::string stem = states.size() == 1 ? "run" : "run_" + std::to_string(i);
    emit_run(run, a.out, stem);
    print_summary(run, stem);
    code = std::max(code, run.summary.exit_code);
  }
  return code;
}

int run_sweep(const std::string& config, const std::string& out, int jobs,
              std::optional<std::uint64_t> seed) {
  SweepConfig sc = load_config(config);
  if (seed) sc.base.seed = *seed;
  const std::vector<RunResult> runs = sweep(sc, jobs);
  emit_sweep(runs, out);
  for (std::size_t i = 0; i < runs.size(); ++i) print_summary(runs[i], "cell " + std::to_string(i));
  std::cout << "wrote " << runs.size() << " cells to " << out << "\n";
  return 0;
}

int check(const std::string& example, std::size_t samples, std::uint64_t seed) {
  const CheckReport report = run_certificate_check(parse_example(example), samples, seed);
  for (const std::string& line : report.lines) std::cout << line << "\n";
  return report.ok ? 0 : exit_code(ErrorKind::Certificate);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Input-to-state safe control barrier function toolkit"};
  app.require_subcommand(1);
  std::optional<std::uint64_t> seed;
  app.add_option("--seed", seed, "Seed for sampling reproducibility");

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate one closed-loop run");
  simulate_cmd->add_option("--example", sim.example, "scalar, arctan or robot2dof")->required();
  simulate_cmd->add_option("--controller", sim.controller,
                           "none, issf_feedback, universal, qp, issf_qp or min_norm");
  simulate_cmd->add_option("--disturbance", sim.disturbance, "constant or sinusoid");
  simulate_cmd->add_option("--d", sim.d, "Disturbance amplitude per input channel");
  simulate_cmd->add_option("--frequency", sim.frequency, "Sinusoid frequency [Hz]");
  simulate_cmd->add_option("--epsilon", sim.epsilon, "ISSf-CBF robustness gain");
  simulate_cmd->add_option("--lambda", sim.lambda, "Linear barrier decay (scalar example)");
  simulate_cmd->add_option("--x0", sim.x0,
                           "Initial state(s) as a comma list, chunked by the state dimension");
  simulate_cmd->add_option("--tmax", sim.tmax, "Final time [s]");
  simulate_cmd->add_option("--dt", sim.dt, "Integrator step [s]");
  simulate_cmd->add_option("--out", sim.out, "Output directory");
  simulate_cmd->add_option("--seed", seed, "Seed for sampling reproducibility");

  std::string config;
  std::string sweep_out = "out";
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter grid from a config file");
  sweep_cmd->add_option("--config", config, "key = value configuration file")->required();
  sweep_cmd->add_option("--out", sweep_out, "Output directory");
  sweep_cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed", seed, "Seed for sampling reproducibility");

  std::string check_example;
  std::size_t samples = 10000;
  auto* check_cmd = app.add_subcommand("check", "Sample the certificates of an example");
  check_cmd->add_option("--example", check_example, "scalar, arctan or robot2dof")->required();
  check_cmd->add_option("--samples", samples, "Samples per check")->check(CLI::PositiveNumber);
  check_cmd->add_option("--seed", seed, "Seed for sampling reproducibility");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_code(ErrorKind::Config);
  }

  try {
    if (*simulate_cmd) return simulate(sim, seed);
    if (*sweep_cmd) return run_sweep(config, sweep_out, jobs, seed);
    return check(check_example, samples, seed.value_or(0));
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
