#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "issf/models.hpp"
#include "issf/sim.hpp"

namespace issf {

enum class ExampleId { Scalar, Arctan, Robot2Dof };
enum class ControllerKind { None, IssfFeedback, Universal, Qp, IssfQp, MinNorm };
enum class DisturbanceKind { Constant, Sinusoid };

const char* to_string(ExampleId id);
const char* to_string(ControllerKind kind);
const char* to_string(DisturbanceKind kind);
/// Throw Config on unknown names.
ExampleId parse_example(std::string_view name);
ControllerKind parse_controller(std::string_view name);
DisturbanceKind parse_disturbance(std::string_view name);

int state_dim(ExampleId id);
int input_dim(ExampleId id);

/// One closed-loop run.
struct ExperimentConfig {
  ExampleId example = ExampleId::Scalar;
  ControllerKind controller = ControllerKind::IssfFeedback;
  DisturbanceKind disturbance = DisturbanceKind::Constant;
  double d = 0.0;          ///< amplitude applied to every input channel
  double frequency = 1.0;  ///< Hz, sinusoid only
  double epsilon = 0.0;
  double lambda = 1.0;
  Vector x0;
  double t_final = 10.0;
  double dt = 1e-3;
  Vector qp_u_weights;  ///< diagonal of H over u
  double qp_p = 100.0;  ///< weight on delta
  double alpha_v_gain = 0.1;
  models::RobotTask robot;
  double robot_kp = 1.0;
  double robot_kd = 1.7321;
  std::uint64_t seed = 0;

  /// Throws Config on any non-finite or out-of-range parameter.
  void validate() const;
  DisturbanceSignal disturbance_signal() const;
};

ExperimentConfig default_config(ExampleId id);

struct SweepGrid {
  std::vector<double> d;
  std::vector<double> epsilon;
  std::vector<Vector> x0;
};

struct SweepConfig {
  ExperimentConfig base;
  SweepGrid grid;
};

/// Default figure grids for an example.
SweepConfig default_sweep(ExampleId id);

/// Parses flat `key = value` text with `#` comments. `d` and `epsilon` take
/// comma lists; `x0` takes `;`-separated states whose comma lists are chunked
/// by the state dimension. Keys given a single value also set the base run.
SweepConfig parse_config(std::istream& in, const std::string& source = "<config>");
SweepConfig load_config(const std::filesystem::path& path);

/// Splits a comma list into initial states of dimension n.
std::vector<Vector> parse_states(std::string_view text, int n);

/// `key = value` lines describing a run, in a fixed order.
std::vector<std::string> describe_config(const ExperimentConfig& cfg);

struct RunSummary {
  std::string status = "ok";  ///< ok, escaped, or an error category
  int exit_code = 0;
  std::string message;
  std::size_t steps = 0;
  double min_h = 0.0;
  double sup_h_violation = 0.0;
  double max_abs_x = 0.0;
  double max_signal = 0.0;   ///< x (scalar), |x| (arctan), r (robot)
  double gamma_margin = 0.0;  ///< gamma(dbar) when the controller certifies one, else NaN
  double min_cd_level = 0.0;  ///< min_t h + gamma(dbar), NaN without a margin
};

struct RunResult {
  ExperimentConfig config;
  Trajectory traj;
  RunSummary summary;
};

/// Runs one configuration. Failures are captured in the summary, never thrown.
RunResult run_cell(const ExperimentConfig& cfg);

/// One panel of a figure: runs that differ in a single parameter.
struct Panel {
  std::string name;
  std::string varied;  ///< "d", "x0" or "epsilon"
  std::vector<RunResult> runs;
};

struct ExampleArtifacts {
  std::vector<Panel> panels;
};

/// Disturbance panel at the base x0 and initial-condition panel at the base d.
ExampleArtifacts run_example1(const SweepConfig& cfg);
/// Disturbance panel at the base epsilon and epsilon panel at the base d.
ExampleArtifacts run_example2(const SweepConfig& cfg);
/// Epsilon panel at the base d.
ExampleArtifacts run_example3(const SweepConfig& cfg);

/// Cartesian product x0 x d x epsilon, in that nesting order. Cells run on up
/// to `jobs` threads; results keep grid order.
std::vector<RunResult> sweep(const SweepConfig& cfg, int jobs = 1);

/// Safety coordinate plotted against time, with its boundary values.
struct SignalSpec {
  std::string label;
  std::vector<double> boundaries;
};
SignalSpec signal_spec(const ExperimentConfig& cfg);
double signal_value(const ExperimentConfig& cfg, const Vector& x);

/// Writes <stem>.csv and <stem>.svg for one run.
void emit_run(const RunResult& run, const std::filesystem::path& out_dir, const std::string& stem);
/// Trace CSV: commented config header, then
/// t,x_0..,u_0..,d_0..,h,hdot,V,delta,qp_status with 17 significant digits.
void write_trace_csv(std::ostream& os, const RunResult& run);
/// One SVG polyline per run plus dashed boundary lines.
void write_svg(std::ostream& os, const std::vector<const RunResult*>& runs,
               const std::string& title);
/// summary.csv with one row per run.
void write_summary(std::ostream& os, const std::vector<RunResult>& runs);
void emit_sweep(const std::vector<RunResult>& runs, const std::filesystem::path& out_dir);
void emit_artifacts(const ExampleArtifacts& artifacts, const std::filesystem::path& out_dir);

/// Formats with 17 significant digits; NaN as "nan".
std::string format_number(double v);

struct CheckReport {
  std::vector<std::string> lines;
  bool ok = true;
};

/// Certificate sampling for an example: comparison-function axioms, barrier
/// residuals, the universal-formula identity and output gradients.
CheckReport run_certificate_check(ExampleId id, std::size_t samples, std::uint64_t seed);

}  // namespace issf
