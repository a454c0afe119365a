#include "issf/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

namespace issf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorKind::Config, "not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  for (auto item : split(text, ',')) out.push_back(parse_number(item));
  return out;
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::Vector2d parse_pair(std::string_view text) {
  const auto v = parse_list(text);
  if (v.size() != 2) throw Error(ErrorKind::Config, "expected two values, got '" + std::string(text) + "'");
  return {v[0], v[1]};
}

std::string join(const Vector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_number(v(i));
  }
  return out;
}

void require(bool cond, const std::string& what) {
  if (!cond) throw Error(ErrorKind::Config, what);
}

bool finite_vec(const Vector& v) { return v.allFinite(); }

// Closed-loop plant for one configuration.
struct Plant {
  ControlAffineSystem sys;
  Controller controller;
  MonitoredOutputs outputs;
  std::optional<ComparisonFunction> gamma;  // certified margin, when any
};

Feedback zero_feedback(int m) {
  return [m](const Vector&) { return Vector::Zero(m).eval(); };
}

Plant build_scalar(const ExperimentConfig& cfg) {
  const SafeSetSpec spec = models::scalar_safe_set(cfg.lambda);
  const ControlAffineSystem sys = models::scalar_system();
  Plant plant{sys, {}, {spec.h, std::nullopt}, std::nullopt};
  const auto margin = [&] { return gamma_from(spec.alpha, models::quarter_square_gain()); };
  switch (cfg.controller) {
    case ControllerKind::None:
      plant.controller = make_feedback_controller(zero_feedback(1));
      break;
    case ControllerKind::IssfFeedback:
      plant.controller = make_issf_feedback_controller(zero_feedback(1), spec, sys);
      plant.gamma = margin();
      break;
    case ControllerKind::Universal:
      plant.controller = make_universal_controller(spec, sys);
      plant.gamma = margin();
      break;
    case ControllerKind::MinNorm:
      plant.controller = make_min_norm_controller(spec, sys);
      break;
    case ControllerKind::Qp:
    case ControllerKind::IssfQp:
      throw Error(ErrorKind::Config, "the scalar example has no CLF; QP controllers need arctan or robot2dof");
  }
  return plant;
}

Plant build_arctan(const ExperimentConfig& cfg) {
  const SafeSetSpec spec = models::arctan_safe_set();
  const ControlAffineSystem sys = models::arctan_system();
  const ClfConstraint clf = models::arctan_clf_constraint(cfg.alpha_v_gain);
  Plant plant{sys, {}, {spec.h, clf.V}, std::nullopt};
  const auto margin = [&] { return gamma_from(spec.alpha, models::quarter_square_gain()); };
  switch (cfg.controller) {
    case ControllerKind::None:
      plant.controller = make_feedback_controller(zero_feedback(1));
      break;
    case ControllerKind::IssfFeedback:
      plant.controller = make_issf_feedback_controller(zero_feedback(1), spec, sys);
      plant.gamma = margin();
      break;
    case ControllerKind::Universal:
      plant.controller = make_universal_controller(spec, sys);
      plant.gamma = margin();
      break;
    case ControllerKind::MinNorm:
      plant.controller = make_min_norm_controller(spec, sys);
      break;
    case ControllerKind::Qp:
    case ControllerKind::IssfQp: {
      const double eps = cfg.controller == ControllerKind::Qp ? 0.0 : cfg.epsilon;
      auto row = [spec, sys, eps](const Vector& x) { return issf_cbf_row(spec, sys, x, eps); };
      ClfCbfQp qp(sys, clf, row, qp_weights(cfg.qp_u_weights, cfg.qp_p));
      plant.controller = [qp](const Vector& x) { return qp(x); };
      break;
    }
  }
  return plant;
}

Plant build_robot(const ExperimentConfig& cfg) {
  const models::RobotTask& task = cfg.robot;
  const ControlAffineSystem sys = robot2dof(task.params);
  const OutputMap h = models::robot_barrier(task.params, task.r_star);
  const ClfConstraint clf = models::robot_clf_constraint(task);
  Plant plant{sys, {}, {h, clf.V}, std::nullopt};
  switch (cfg.controller) {
    case ControllerKind::None:
      plant.controller = make_feedback_controller(zero_feedback(2));
      break;
    case ControllerKind::Qp:
    case ControllerKind::IssfQp: {
      const double eps = cfg.controller == ControllerKind::Qp ? 0.0 : cfg.epsilon;
      const double kp = cfg.robot_kp;
      const double kd = cfg.robot_kd;
      auto row = [h, sys, kp, kd, eps](const Vector& x) {
        return rel2_issf_row(h, sys, x, kp, kd, eps);
      };
      const Matrix H = qp_weights(cfg.qp_u_weights, cfg.qp_p);
      // Track the PD law: F = -H (u_pd, 0).
      auto linear = [H, task](const Vector& x) {
        Vector ref = Vector::Zero(3);
        ref.head(2) = models::robot_pd_reference(task, x);
        return (-H * ref).eval();
      };
      ClfCbfQp qp(sys, clf, row, H, linear);
      plant.controller = [qp](const Vector& x) { return qp(x); };
      break;
    }
    case ControllerKind::IssfFeedback:
    case ControllerKind::Universal:
    case ControllerKind::MinNorm:
      throw Error(ErrorKind::Config,
                  "robot2dof has a relative-degree-2 barrier; use controller qp or issf_qp");
  }
  return plant;
}

Plant build_plant(const ExperimentConfig& cfg) {
  switch (cfg.example) {
    case ExampleId::Scalar: return build_scalar(cfg);
    case ExampleId::Arctan: return build_arctan(cfg);
    case ExampleId::Robot2Dof: return build_robot(cfg);
  }
  throw Error(ErrorKind::Config, "unknown example");
}

void summarize(RunResult& res, const std::optional<ComparisonFunction>& gamma) {
  const Trajectory& tr = res.traj;
  RunSummary& s = res.summary;
  s.steps = tr.size();
  if (tr.size() == 0) {
    s.min_h = s.sup_h_violation = s.max_abs_x = s.max_signal = kNaN;
    s.gamma_margin = s.min_cd_level = kNaN;
    return;
  }
  s.min_h = *std::min_element(tr.h_vals.begin(), tr.h_vals.end());
  s.sup_h_violation = std::max(0.0, -s.min_h);
  s.max_abs_x = 0.0;
  s.max_signal = -std::numeric_limits<double>::infinity();
  for (const Vector& x : tr.states) {
    s.max_abs_x = std::max(s.max_abs_x, x.norm());
    s.max_signal = std::max(s.max_signal, signal_value(res.config, x));
  }
  s.gamma_margin = kNaN;
  s.min_cd_level = kNaN;
  if (gamma) {
    try {
      s.gamma_margin = (*gamma)(res.config.disturbance_signal().bound());
      s.min_cd_level = s.min_h + s.gamma_margin;
    } catch (const Error&) {
      // disturbance beyond the certified range; no margin to report
    }
  }
}

}  // namespace

const char* to_string(ExampleId id) {
  switch (id) {
    case ExampleId::Scalar: return "scalar";
    case ExampleId::Arctan: return "arctan";
    case ExampleId::Robot2Dof: return "robot2dof";
  }
  return "?";
}

const char* to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::None: return "none";
    case ControllerKind::IssfFeedback: return "issf_feedback";
    case ControllerKind::Universal: return "universal";
    case ControllerKind::Qp: return "qp";
    case ControllerKind::IssfQp: return "issf_qp";
    case ControllerKind::MinNorm: return "min_norm";
  }
  return "?";
}

const char* to_string(DisturbanceKind kind) {
  return kind == DisturbanceKind::Constant ? "constant" : "sinusoid";
}

ExampleId parse_example(std::string_view name) {
  for (auto id : {ExampleId::Scalar, ExampleId::Arctan, ExampleId::Robot2Dof}) {
    if (name == to_string(id)) return id;
  }
  throw Error(ErrorKind::Config, "unknown example '" + std::string(name) +
                                     "' (expected scalar, arctan or robot2dof)");
}

ControllerKind parse_controller(std::string_view name) {
  for (auto k : {ControllerKind::None, ControllerKind::IssfFeedback, ControllerKind::Universal,
                 ControllerKind::Qp, ControllerKind::IssfQp, ControllerKind::MinNorm}) {
    if (name == to_string(k)) return k;
  }
  throw Error(ErrorKind::Config, "unknown controller '" + std::string(name) + "'");
}

DisturbanceKind parse_disturbance(std::string_view name) {
  if (name == "constant") return DisturbanceKind::Constant;
  if (name == "sinusoid") return DisturbanceKind::Sinusoid;
  throw Error(ErrorKind::Config, "unknown disturbance kind '" + std::string(name) + "'");
}

int state_dim(ExampleId id) { return id == ExampleId::Robot2Dof ? 4 : 1; }
int input_dim(ExampleId id) { return id == ExampleId::Robot2Dof ? 2 : 1; }

void ExperimentConfig::validate() const {
  const int n = state_dim(example);
  const int m = input_dim(example);
  require(x0.size() == n, "x0 must have " + std::to_string(n) + " entries for " + to_string(example));
  require(finite_vec(x0), "x0 must be finite");
  require(std::isfinite(d), "d must be finite");
  require(std::isfinite(frequency) && frequency >= 0.0, "frequency must be finite and >= 0");
  require(std::isfinite(epsilon) && epsilon >= 0.0, "epsilon must be finite and >= 0");
  require(std::isfinite(lambda) && lambda > 0.0, "lambda must be finite and > 0");
  require(std::isfinite(t_final) && t_final > 0.0, "t_final must be finite and > 0");
  require(std::isfinite(dt) && dt > 0.0 && dt <= t_final, "dt must be in (0, t_final]");
  require(t_final / dt <= static_cast<double>(kMaxSteps), "too many integration steps");
  require(qp_u_weights.size() == m, "qp_u_weights must have " + std::to_string(m) + " entries");
  require(finite_vec(qp_u_weights) && (qp_u_weights.array() > 0.0).all(),
          "qp_u_weights must be finite and positive");
  require(std::isfinite(qp_p) && qp_p > 0.0, "qp_p must be finite and > 0");
  require(std::isfinite(alpha_v_gain) && alpha_v_gain > 0.0, "alpha_v_gain must be > 0");
  require(std::isfinite(robot_kp) && robot_kp > 0.0, "robot_kp must be > 0");
  require(std::isfinite(robot_kd) && robot_kd > 0.0, "robot_kd must be > 0");
  require(robot.Kp.allFinite() && (robot.Kp.array() > 0.0).all(), "robot_Kp must be > 0");
  require(robot.Kd.allFinite() && (robot.Kd.array() > 0.0).all(), "robot_Kd must be > 0");
  require(robot.q_d.allFinite(), "robot_qd must be finite");
  require(std::isfinite(robot.r_star), "robot_rstar must be finite");
  require(robot.params.m > 0.0 && robot.params.M > 0.0 && robot.params.L > 0.0,
          "robot masses and length must be > 0");
}

DisturbanceSignal ExperimentConfig::disturbance_signal() const {
  const Vector amp = Vector::Constant(input_dim(example), d);
  if (disturbance == DisturbanceKind::Sinusoid) return DisturbanceSignal::sinusoid(amp, frequency);
  return DisturbanceSignal::constant(amp);
}

ExperimentConfig default_config(ExampleId id) {
  ExperimentConfig cfg;
  cfg.example = id;
  cfg.qp_u_weights = Vector::Ones(input_dim(id));
  switch (id) {
    case ExampleId::Scalar:
      cfg.controller = ControllerKind::IssfFeedback;
      cfg.d = 1.0;
      cfg.x0 = Vector::Constant(1, 2.0);
      break;
    case ExampleId::Arctan:
      cfg.controller = ControllerKind::IssfQp;
      cfg.d = 10.0;
      cfg.epsilon = 1.0;
      cfg.x0 = Vector::Constant(1, 0.1);
      break;
    case ExampleId::Robot2Dof:
      cfg.controller = ControllerKind::IssfQp;
      cfg.d = 5.0;
      cfg.epsilon = 1.0;
      cfg.t_final = 15.0;
      cfg.x0 = Vector::Zero(4);
      cfg.x0(1) = 1.0;
      break;
  }
  return cfg;
}

SweepConfig default_sweep(ExampleId id) {
  SweepConfig sc{default_config(id), {}};
  switch (id) {
    case ExampleId::Scalar:
      sc.grid.d = {0.0, 0.5, 1.0};
      sc.grid.epsilon = {sc.base.epsilon};
      sc.grid.x0 = {Vector::Constant(1, 1.0), Vector::Constant(1, 2.0), Vector::Constant(1, 2.5)};
      break;
    case ExampleId::Arctan:
      sc.grid.d = {1.0, 5.0, 10.0};
      sc.grid.epsilon = {0.5, 1.0, 5.0};
      sc.grid.x0 = {sc.base.x0};
      break;
    case ExampleId::Robot2Dof:
      sc.grid.d = {sc.base.d};
      sc.grid.epsilon = {0.5, 1.0, 5.0, 10.0};
      sc.grid.x0 = {sc.base.x0};
      break;
  }
  return sc;
}

std::vector<Vector> parse_states(std::string_view text, int n) {
  std::vector<Vector> out;
  for (auto group : split(text, ';')) {
    if (group.empty()) continue;
    const auto values = parse_list(group);
    if (values.size() % static_cast<std::size_t>(n) != 0) {
      throw Error(ErrorKind::Config, "initial state list '" + std::string(group) +
                                         "' is not a multiple of the state dimension " +
                                         std::to_string(n));
    }
    for (std::size_t i = 0; i < values.size(); i += static_cast<std::size_t>(n)) {
      out.push_back(to_vector({values.begin() + static_cast<std::ptrdiff_t>(i),
                               values.begin() + static_cast<std::ptrdiff_t>(i) + n}));
    }
  }
  if (out.empty()) throw Error(ErrorKind::Config, "empty initial state list");
  return out;
}

SweepConfig parse_config(std::istream& in, const std::string& source) {
  std::map<std::string, std::pair<std::string, int>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::Config, source + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key(trim(view.substr(0, eq)));
    const std::string value(trim(view.substr(eq + 1)));
    if (key.empty() || value.empty()) {
      throw Error(ErrorKind::Config, source + ":" + std::to_string(lineno) + ": empty key or value");
    }
    if (!entries.emplace(key, std::make_pair(value, lineno)).second) {
      throw Error(ErrorKind::Config, source + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }

  ExampleId id = ExampleId::Scalar;
  if (auto it = entries.find("example"); it != entries.end()) id = parse_example(it->second.first);
  SweepConfig sc = default_sweep(id);
  ExperimentConfig& cfg = sc.base;

  for (const auto& [key, entry] : entries) {
    const std::string& value = entry.first;
    try {
      if (key == "example") {
        continue;
      } else if (key == "controller") {
        cfg.controller = parse_controller(value);
      } else if (key == "disturbance") {
        cfg.disturbance = parse_disturbance(value);
      } else if (key == "d") {
        sc.grid.d = parse_list(value);
        if (sc.grid.d.size() == 1) cfg.d = sc.grid.d.front();
      } else if (key == "epsilon") {
        sc.grid.epsilon = parse_list(value);
        if (sc.grid.epsilon.size() == 1) cfg.epsilon = sc.grid.epsilon.front();
      } else if (key == "x0") {
        sc.grid.x0 = parse_states(value, state_dim(id));
        if (sc.grid.x0.size() == 1) cfg.x0 = sc.grid.x0.front();
      } else if (key == "frequency") {
        cfg.frequency = parse_number(value);
      } else if (key == "lambda") {
        cfg.lambda = parse_number(value);
      } else if (key == "t_final") {
        cfg.t_final = parse_number(value);
      } else if (key == "dt") {
        cfg.dt = parse_number(value);
      } else if (key == "qp_u_weights") {
        cfg.qp_u_weights = to_vector(parse_list(value));
      } else if (key == "qp_p") {
        cfg.qp_p = parse_number(value);
      } else if (key == "alpha_v_gain") {
        cfg.alpha_v_gain = parse_number(value);
      } else if (key == "robot_Kp") {
        cfg.robot.Kp = parse_pair(value);
      } else if (key == "robot_Kd") {
        cfg.robot.Kd = parse_pair(value);
      } else if (key == "robot_kp") {
        cfg.robot_kp = parse_number(value);
      } else if (key == "robot_kd") {
        cfg.robot_kd = parse_number(value);
      } else if (key == "robot_qd") {
        cfg.robot.q_d = parse_pair(value);
      } else if (key == "robot_rstar") {
        cfg.robot.r_star = parse_number(value);
      } else if (key == "robot_m") {
        cfg.robot.params.m = parse_number(value);
      } else if (key == "robot_M") {
        cfg.robot.params.M = parse_number(value);
      } else if (key == "robot_L") {
        cfg.robot.params.L = parse_number(value);
      } else if (key == "seed") {
        const double s = parse_number(value);
        require(s >= 0.0 && s == std::floor(s), "seed must be a nonnegative integer");
        cfg.seed = static_cast<std::uint64_t>(s);
      } else {
        throw Error(ErrorKind::Config, "unknown key '" + key + "'");
      }
    } catch (const Error& e) {
      throw Error(ErrorKind::Config, source + ":" + std::to_string(entry.second) + ": " + e.what());
    }
  }

  require(!sc.grid.d.empty() && !sc.grid.epsilon.empty() && !sc.grid.x0.empty(),
          source + ": sweep grids must be non-empty");
  cfg.validate();
  for (const Vector& x0 : sc.grid.x0) require(x0.allFinite(), source + ": x0 must be finite");
  for (double v : sc.grid.d) require(std::isfinite(v), source + ": d must be finite");
  for (double v : sc.grid.epsilon) {
    require(std::isfinite(v) && v >= 0.0, source + ": epsilon must be finite and >= 0");
  }
  return sc;
}

SweepConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot open config file " + path.string());
  return parse_config(in, path.string());
}

std::vector<std::string> describe_config(const ExperimentConfig& cfg) {
  std::vector<std::string> lines = {
      std::string("example = ") + to_string(cfg.example),
      std::string("controller = ") + to_string(cfg.controller),
      std::string("disturbance = ") + to_string(cfg.disturbance),
      "d = " + format_number(cfg.d),
      "frequency = " + format_number(cfg.frequency),
      "epsilon = " + format_number(cfg.epsilon),
      "lambda = " + format_number(cfg.lambda),
      "x0 = " + join(cfg.x0),
      "t_final = " + format_number(cfg.t_final),
      "dt = " + format_number(cfg.dt),
      "qp_u_weights = " + join(cfg.qp_u_weights),
      "qp_p = " + format_number(cfg.qp_p),
      "alpha_v_gain = " + format_number(cfg.alpha_v_gain),
  };
  if (cfg.example == ExampleId::Robot2Dof) {
    lines.push_back("robot_Kp = " + join(cfg.robot.Kp));
    lines.push_back("robot_Kd = " + join(cfg.robot.Kd));
    lines.push_back("robot_kp = " + format_number(cfg.robot_kp));
    lines.push_back("robot_kd = " + format_number(cfg.robot_kd));
    lines.push_back("robot_qd = " + join(cfg.robot.q_d));
    lines.push_back("robot_rstar = " + format_number(cfg.robot.r_star));
    lines.push_back("robot_m = " + format_number(cfg.robot.params.m));
    lines.push_back("robot_M = " + format_number(cfg.robot.params.M));
    lines.push_back("robot_L = " + format_number(cfg.robot.params.L));
  }
  lines.push_back("seed = " + std::to_string(cfg.seed));
  return lines;
}

SignalSpec signal_spec(const ExperimentConfig& cfg) {
  switch (cfg.example) {
    case ExampleId::Scalar: return {"x", {2.0}};
    case ExampleId::Arctan: return {"|x|", {2.0}};
    case ExampleId::Robot2Dof: return {"r", {cfg.robot.r_star}};
  }
  return {"x", {}};
}

double signal_value(const ExperimentConfig& cfg, const Vector& x) {
  switch (cfg.example) {
    case ExampleId::Scalar: return x(0);
    case ExampleId::Arctan: return std::abs(x(0));
    case ExampleId::Robot2Dof: return x(1);
  }
  return x(0);
}

RunResult run_cell(const ExperimentConfig& cfg) {
  RunResult res{cfg, {}, {}};
  std::optional<ComparisonFunction> gamma;
  try {
    cfg.validate();
    Plant plant = build_plant(cfg);
    gamma = plant.gamma;
    res.traj = run_closed_loop(plant.sys, plant.controller, cfg.disturbance_signal(), cfg.x0,
                               cfg.t_final, cfg.dt, plant.outputs);
    if (res.traj.escaped) {
      res.summary.status = "escaped";
      res.summary.exit_code = exit_code(ErrorKind::Numerics);
      res.summary.message = "state norm exceeded " + format_number(kEscapeNorm) + " at t = " +
                            format_number(res.traj.times.back() + cfg.dt);
    }
  } catch (const Error& e) {
    res.summary.status = to_string(e.kind());
    res.summary.exit_code = exit_code(e.kind());
    res.summary.message = e.what();
  }
  summarize(res, gamma);
  return res;
}

namespace {

ExampleArtifacts panels_for(const SweepConfig& cfg, ExampleId expected,
                            const std::vector<std::string>& varied) {
  if (cfg.base.example != expected) {
    throw Error(ErrorKind::Config, std::string("configuration is for ") +
                                       to_string(cfg.base.example) + ", expected " +
                                       to_string(expected));
  }
  ExampleArtifacts art;
  for (const std::string& what : varied) {
    Panel panel{"vary_" + what, what, {}};
    if (what == "d") {
      for (double d : cfg.grid.d) {
        ExperimentConfig c = cfg.base;
        c.d = d;
        panel.runs.push_back(run_cell(c));
      }
    } else if (what == "x0") {
      for (const Vector& x0 : cfg.grid.x0) {
        ExperimentConfig c = cfg.base;
        c.x0 = x0;
        panel.runs.push_back(run_cell(c));
      }
    } else {
      for (double eps : cfg.grid.epsilon) {
        ExperimentConfig c = cfg.base;
        c.epsilon = eps;
        panel.runs.push_back(run_cell(c));
      }
    }
    art.panels.push_back(std::move(panel));
  }
  return art;
}

}  // namespace

ExampleArtifacts run_example1(const SweepConfig& cfg) {
  return panels_for(cfg, ExampleId::Scalar, {"d", "x0"});
}

ExampleArtifacts run_example2(const SweepConfig& cfg) {
  return panels_for(cfg, ExampleId::Arctan, {"d", "epsilon"});
}

ExampleArtifacts run_example3(const SweepConfig& cfg) {
  return panels_for(cfg, ExampleId::Robot2Dof, {"epsilon"});
}

std::vector<RunResult> sweep(const SweepConfig& cfg, int jobs) {
  std::vector<ExperimentConfig> cells;
  for (const Vector& x0 : cfg.grid.x0) {
    for (double d : cfg.grid.d) {
      for (double eps : cfg.grid.epsilon) {
        ExperimentConfig c = cfg.base;
        c.x0 = x0;
        c.d = d;
        c.epsilon = eps;
        cells.push_back(std::move(c));
      }
    }
  }
  std::vector<RunResult> results(cells.size());
  const int workers = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(1, cells.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) results[i] = run_cell(cells[i]);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < cells.size(); i = next++) results[i] = run_cell(cells[i]);
    });
  }
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace issf
