#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "issf/bench.hpp"

using namespace issf;
namespace fs = std::filesystem;

namespace {

bool throws_kind(ErrorKind kind, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

SweepConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.cfg");
}

ExperimentConfig cfg_for(ExampleId id, ControllerKind c, double d, double eps) {
  ExperimentConfig cfg = default_config(id);
  cfg.controller = c;
  cfg.d = d;
  cfg.epsilon = eps;
  return cfg;
}

std::string csv_of(const RunResult& run) {
  std::ostringstream os;
  write_trace_csv(os, run);
  return os.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("issf_test_bench_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("names round trip") {
  for (auto id : {ExampleId::Scalar, ExampleId::Arctan, ExampleId::Robot2Dof}) {
    CHECK(parse_example(to_string(id)) == id);
  }
  for (auto c : {ControllerKind::None, ControllerKind::IssfFeedback, ControllerKind::Universal,
                 ControllerKind::Qp, ControllerKind::IssfQp, ControllerKind::MinNorm}) {
    CHECK(parse_controller(to_string(c)) == c);
  }
  CHECK(throws_kind(ErrorKind::Config, [] { parse_example("pendulum"); }));
  CHECK(throws_kind(ErrorKind::Config, [] { parse_controller("mpc"); }));
  CHECK(throws_kind(ErrorKind::Config, [] { parse_disturbance("noise"); }));
}

TEST_CASE("default figure grids") {
  const SweepConfig s1 = default_sweep(ExampleId::Scalar);
  CHECK(s1.grid.d == std::vector<double>{0.0, 0.5, 1.0});
  REQUIRE(s1.grid.x0.size() == 3);
  CHECK(s1.grid.x0[2](0) == 2.5);
  const SweepConfig s2 = default_sweep(ExampleId::Arctan);
  CHECK(s2.grid.d == std::vector<double>{1.0, 5.0, 10.0});
  CHECK(s2.grid.epsilon == std::vector<double>{0.5, 1.0, 5.0});
  CHECK(s2.base.alpha_v_gain == 0.1);
  const SweepConfig s3 = default_sweep(ExampleId::Robot2Dof);
  CHECK(s3.grid.epsilon == std::vector<double>{0.5, 1.0, 5.0, 10.0});
  CHECK(s3.base.d == 5.0);
  CHECK(s3.base.robot_kd == 1.7321);
  CHECK(s3.base.robot.q_d(0) == doctest::Approx(M_PI / 4.0));
  CHECK(s3.base.robot.q_d(1) == 1.5);
}

TEST_CASE("config parsing") {
  const SweepConfig sc = parse(
      "# Fig. 3 style sweep\n"
      "example = arctan   # trailing comment\n"
      "controller = issf_qp\n"
      "\n"
      "d = 10\n"
      "epsilon = 0.5, 1, 5\n"
      "x0 = 0.1; -0.2\n"
      "t_final = 2\n");
  CHECK(sc.base.example == ExampleId::Arctan);
  CHECK(sc.base.controller == ControllerKind::IssfQp);
  CHECK(sc.base.d == 10.0);
  CHECK(sc.grid.d == std::vector<double>{10.0});
  CHECK(sc.grid.epsilon == std::vector<double>{0.5, 1.0, 5.0});
  REQUIRE(sc.grid.x0.size() == 2);
  CHECK(sc.grid.x0[1](0) == -0.2);
  CHECK(sc.base.t_final == 2.0);

  const SweepConfig robot = parse("example = robot2dof\nx0 = 0, 1, 0, 0, 0.5, 1.2, 0, 0\n");
  REQUIRE(robot.grid.x0.size() == 2);
  CHECK(robot.grid.x0[1](1) == 1.2);

  CHECK(throws_kind(ErrorKind::Config, [] { parse("colour = blue\n"); }));
  CHECK(throws_kind(ErrorKind::Config, [] { parse("d = 1\nd = 2\n"); }));
  CHECK(throws_kind(ErrorKind::Config, [] { parse("d 1\n"); }));
  CHECK(throws_kind(ErrorKind::Config, [] { parse("d = one\n"); }));
  CHECK(throws_kind(ErrorKind::Config, [] { parse("dt = -1\n"); }));
  CHECK(throws_kind(ErrorKind::Config, [] { parse("d = inf\n"); }));
  CHECK(throws_kind(ErrorKind::Config, [] { parse("example = robot2dof\nx0 = 1, 2, 3\n"); }));
  CHECK(throws_kind(ErrorKind::Config, [] { parse("epsilon = -1\n"); }));
  try {
    parse("d = 1\n\nbogus = 3\n");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("test.cfg:3") != std::string::npos);
  }
  CHECK(throws_kind(ErrorKind::Config, [] { load_config("/nonexistent/issf.cfg"); }));
}

TEST_CASE("property: described config parses back to the same run") {
  for (auto id : {ExampleId::Scalar, ExampleId::Arctan, ExampleId::Robot2Dof}) {
    ExperimentConfig cfg = default_config(id);
    cfg.d = 0.1 + 1.0 / 3.0;
    cfg.epsilon = 2.0 / 7.0;
    cfg.seed = 42;
    std::string text;
    for (const std::string& line : describe_config(cfg)) text += line + "\n";
    const SweepConfig back = parse(text);
    std::string again;
    for (const std::string& line : describe_config(back.base)) again += line + "\n";
    CHECK(again == text);
  }
}

TEST_CASE("Example 1 runs") {
  for (double d : {0.0, 0.5, 1.0}) {
    const RunResult r = run_cell(cfg_for(ExampleId::Scalar, ControllerKind::IssfFeedback, d, 0.0));
    CHECK(r.summary.status == "ok");
    CHECK(r.summary.max_signal <= 2.0 + d * d / 4.0 + 1e-3);
    CHECK(r.summary.gamma_margin == doctest::Approx(d * d / 4.0).epsilon(1e-8));
    CHECK(r.summary.min_cd_level >= -1e-3);
  }
  for (auto c : {ControllerKind::IssfFeedback, ControllerKind::Universal, ControllerKind::MinNorm}) {
    ExperimentConfig cfg = cfg_for(ExampleId::Scalar, c, 0.0, 0.0);
    cfg.x0 = Vector::Constant(1, 1.0);
    CHECK(run_cell(cfg).summary.max_signal <= 2.0);
  }
  const RunResult open = run_cell(cfg_for(ExampleId::Scalar, ControllerKind::None, 1.0, 0.0));
  CHECK(open.summary.status == "escaped");
  CHECK(open.summary.exit_code == 5);
  const RunResult bad = run_cell(cfg_for(ExampleId::Scalar, ControllerKind::Qp, 1.0, 0.0));
  CHECK(bad.summary.exit_code == 2);
  CHECK(bad.traj.size() == 0);
}

TEST_CASE("Example 2 trends") {
  std::vector<double> peaks;
  for (double eps : {0.5, 1.0, 5.0}) {
    const RunResult r = run_cell(cfg_for(ExampleId::Arctan, ControllerKind::IssfQp, 10.0, eps));
    REQUIRE(r.summary.status == "ok");
    CHECK(std::isfinite(r.summary.max_signal));
    peaks.push_back(r.summary.max_signal);
    for (const auto& st : r.traj.statuses) CHECK(st == QpStatus::Optimal);
  }
  CHECK(peaks[0] >= peaks[1]);
  CHECK(peaks[1] >= peaks[2]);
  const RunResult plain = run_cell(cfg_for(ExampleId::Arctan, ControllerKind::Qp, 10.0, 0.0));
  CHECK(plain.summary.max_signal > peaks[0]);
  CHECK(plain.summary.max_signal > 2.0);
  for (auto c : {ControllerKind::Qp, ControllerKind::IssfQp}) {
    const RunResult r = run_cell(cfg_for(ExampleId::Arctan, c, 0.0, 1.0));
    CHECK(r.summary.max_signal <= 2.0 + 1e-3);
  }
}

TEST_CASE("Example 3 trends") {
  std::vector<double> peaks;
  for (double eps : {0.5, 1.0, 5.0, 10.0}) {
    const RunResult r = run_cell(cfg_for(ExampleId::Robot2Dof, ControllerKind::IssfQp, 5.0, eps));
    REQUIRE(r.summary.status == "ok");
    peaks.push_back(r.summary.max_signal);
  }
  for (std::size_t i = 1; i < peaks.size(); ++i) CHECK(peaks[i - 1] >= peaks[i]);
  const RunResult clean = run_cell(cfg_for(ExampleId::Robot2Dof, ControllerKind::IssfQp, 0.0, 1.0));
  CHECK(clean.summary.max_signal <= 2.0 + 1e-3);

  // At rest on the target with a row that is inactive there, nothing moves.
  ExperimentConfig eq = cfg_for(ExampleId::Robot2Dof, ControllerKind::Qp, 0.0, 0.0);
  eq.x0 = Vector::Zero(4);
  eq.x0(0) = eq.robot.q_d(0);
  eq.x0(1) = eq.robot.q_d(1);
  const RunResult still = run_cell(eq);
  REQUIRE(still.summary.status == "ok");
  for (const Vector& x : still.traj.states) CHECK(std::abs(x(1) - eq.x0(1)) <= 1e-12);

  CHECK(run_cell(cfg_for(ExampleId::Robot2Dof, ControllerKind::Universal, 0.0, 0.0))
            .summary.exit_code == 2);
}

TEST_CASE("sweep composition") {
  SweepConfig one = default_sweep(ExampleId::Scalar);
  one.grid = {{1.0}, {0.0}, {Vector::Constant(1, 2.0)}};
  const auto cells = sweep(one, 1);
  REQUIRE(cells.size() == 1);
  ExperimentConfig single = one.base;
  single.d = 1.0;
  single.x0 = Vector::Constant(1, 2.0);
  CHECK(csv_of(cells[0]) == csv_of(run_cell(single)));

  SweepConfig ex1 = default_sweep(ExampleId::Scalar);
  ex1.grid.d = {0.0, 1.0};
  ex1.grid.x0 = {ex1.base.x0};
  const auto rows = sweep(ex1, 2);
  const auto panels = run_example1(ex1);
  REQUIRE(panels.panels.size() == 2);
  REQUIRE(panels.panels[0].runs.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(csv_of(rows[i]) == csv_of(panels.panels[0].runs[i]));
  }
  CHECK(throws_kind(ErrorKind::Config, [&] { run_example2(ex1); }));

  SweepConfig ex2 = default_sweep(ExampleId::Arctan);
  ex2.grid.d = {10.0};
  const auto serial = sweep(ex2, 1);
  const auto parallel = sweep(ex2, 4);
  REQUIRE(serial.size() == 3);
  for (std::size_t i = 0; i < serial.size(); ++i) CHECK(csv_of(serial[i]) == csv_of(parallel[i]));

  const fs::path dir = scratch("monotone");
  emit_sweep(serial, dir);
  std::ifstream summary(dir / "summary.csv");
  std::string line;
  std::getline(summary, line);
  std::vector<double> peaks;
  while (std::getline(summary, line)) {
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    REQUIRE(cols.size() == 15);
    peaks.push_back(std::stod(cols[12]));
  }
  REQUIRE(peaks.size() == 3);
  CHECK(peaks[0] >= peaks[1]);
  CHECK(peaks[1] >= peaks[2]);
}

TEST_CASE("sweep records per-cell failures and continues") {
  SweepConfig sc = default_sweep(ExampleId::Scalar);
  sc.base.controller = ControllerKind::None;
  sc.grid = {{0.0, 1.0}, {0.0}, {Vector::Constant(1, 2.0)}};
  const auto cells = sweep(sc, 2);
  REQUIRE(cells.size() == 2);
  CHECK(cells[0].summary.status == "ok");
  CHECK(cells[1].summary.status == "escaped");
}

TEST_CASE("trace CSV format") {
  ExperimentConfig cfg = default_config(ExampleId::Robot2Dof);
  cfg.t_final = 0.01;
  const RunResult r = run_cell(cfg);
  const std::string text = csv_of(r);
  CHECK(text.find("# integrator = rk4\n") != std::string::npos);
  CHECK(text.find("# dt = 0.001\n") != std::string::npos);
  CHECK(text.find("# robot_kd = 1.7321\n") != std::string::npos);
  CHECK(text.find("\nt,x_0,x_1,x_2,x_3,u_0,u_1,d_0,d_1,h,hdot,V,delta,qp_status\n") !=
        std::string::npos);
  std::istringstream in(text);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 't') continue;
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 13);
    CHECK(line.substr(line.rfind(',') + 1) == "optimal");
  }
  CHECK(rows == 11);

  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(NAN) == "nan");
  CHECK(format_number(-INFINITY) == "-inf");
  CHECK(format_number(2.0) == "2");

  RunResult empty{default_config(ExampleId::Scalar), {}, {}};
  const std::string header_only = csv_of(empty);
  CHECK(header_only.substr(header_only.rfind("\nt,") + 1) == "t,x_0,u_0,d_0,h,hdot,V,delta,qp_status\n");
}

TEST_CASE("emitted artifacts") {
  const fs::path dir = scratch("emit");
  SweepConfig ex1 = default_sweep(ExampleId::Scalar);
  ex1.base.t_final = 1.0;
  const auto art = run_example1(ex1);
  emit_artifacts(art, dir);
  CHECK(fs::exists(dir / "vary_d" / "run_00.csv"));
  CHECK(fs::exists(dir / "vary_x0" / "run_02.svg"));
  const std::string svg = slurp(dir / "vary_d" / "panel.svg");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
  CHECK(std::count(svg.begin(), svg.end(), '\n') > 3);
  std::size_t polylines = 0;
  for (std::size_t p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) {
    ++polylines;
  }
  CHECK(polylines == 3);

  const std::string summary = slurp(dir / "vary_x0" / "summary.csv");
  CHECK(std::count(summary.begin(), summary.end(), '\n') == 4);

  const fs::path again = scratch("emit_again");
  emit_artifacts(run_example1(ex1), again);
  CHECK(slurp(dir / "vary_d" / "run_01.csv") == slurp(again / "vary_d" / "run_01.csv"));
  CHECK(slurp(dir / "vary_d" / "panel.svg") == slurp(again / "vary_d" / "panel.svg"));

  const fs::path blocker = scratch("blocker");
  { std::ofstream(blocker) << "file"; }
  CHECK(throws_kind(ErrorKind::Io, [&] { emit_run(art.panels[0].runs[0], blocker / "sub", "x"); }));
  fs::remove_all(blocker);
}

TEST_CASE("certificate checks pass for every example") {
  for (auto id : {ExampleId::Scalar, ExampleId::Arctan, ExampleId::Robot2Dof}) {
    const CheckReport rep = run_certificate_check(id, 2000, 1);
    for (const std::string& line : rep.lines) CAPTURE(line);
    CHECK(rep.ok);
    CHECK(rep.lines.size() >= 5);
  }
  CHECK(throws_kind(ErrorKind::Usage, [] { run_certificate_check(ExampleId::Scalar, 0, 1); }));
}
