#include <cmath>
#include <limits>
#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "issf/bench.hpp"

namespace py = pybind11;
using namespace issf;

namespace {

Bound to_bound(std::optional<double> v) {
  return v ? Bound::at(*v) : Bound::unbounded();
}

double from_bound(const Bound& b) { return b.magnitude_or_inf(); }

Sense parse_sense(const std::string& s) {
  if (s == ">=") return Sense::GreaterEqual;
  if (s == "<=") return Sense::LessEqual;
  throw Error(ErrorKind::Usage, "row sense must be '>=' or '<=', got '" + s + "'");
}

QpInstance make_qp(const Matrix& H, const Vector& F, const std::vector<py::tuple>& rows) {
  QpInstance qp{H, F, {}};
  for (const py::tuple& t : rows) {
    if (t.size() != 4) throw Error(ErrorKind::Usage, "rows are (a_u, a_delta, rhs, sense)");
    ConstraintRow row;
    row.a_u = t[0].cast<Vector>();
    row.a_delta = t[1].cast<double>();
    row.rhs = t[2].cast<double>();
    row.sense = parse_sense(t[3].cast<std::string>());
    qp.rows.push_back(row);
  }
  return qp;
}

py::dict solution_dict(const QpSolution& s) {
  py::dict out;
  out["z"] = s.z;
  out["status"] = to_string(s.status);
  out["active"] = s.active;
  out["multipliers"] = s.multipliers;
  out["objective"] = s.objective;
  return out;
}

struct Plant1 {
  SafeSetSpec spec;
  ControlAffineSystem sys;
};

Plant1 first_order_plant(const std::string& name) {
  switch (parse_example(name)) {
    case ExampleId::Scalar: return {models::scalar_safe_set(), models::scalar_system()};
    case ExampleId::Arctan: return {models::arctan_safe_set(), models::arctan_system()};
    case ExampleId::Robot2Dof: break;
  }
  throw Error(ErrorKind::Usage, "closed-form controllers need the scalar or arctan example");
}

Matrix stack(const std::vector<Vector>& rows, Eigen::Index cols) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = rows[i];
  return out;
}

Vector column(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

py::dict summary_dict(const RunSummary& s) {
  py::dict out;
  out["status"] = s.status;
  out["exit_code"] = s.exit_code;
  out["message"] = s.message;
  out["steps"] = s.steps;
  out["min_h"] = s.min_h;
  out["sup_h_violation"] = s.sup_h_violation;
  out["max_abs_x"] = s.max_abs_x;
  out["max_signal"] = s.max_signal;
  out["gamma_margin"] = s.gamma_margin;
  out["min_cd_level"] = s.min_cd_level;
  return out;
}

py::dict run_dict(const RunResult& r) {
  const int n = state_dim(r.config.example);
  const int m = input_dim(r.config.example);
  const Trajectory& tr = r.traj;
  std::vector<std::string> statuses;
  for (const auto& s : tr.statuses) statuses.push_back(s ? to_string(*s) : "none");
  std::ostringstream csv;
  write_trace_csv(csv, r);
  py::dict out;
  out["t"] = column(tr.times);
  out["x"] = stack(tr.states, n);
  out["u"] = stack(tr.inputs, m);
  out["d"] = stack(tr.disturbances, m);
  out["h"] = column(tr.h_vals);
  out["hdot"] = column(tr.hdot_vals);
  out["V"] = column(tr.V_vals);
  out["delta"] = column(tr.delta_vals);
  out["qp_status"] = statuses;
  out["escaped"] = tr.escaped;
  out["summary"] = summary_dict(r.summary);
  out["csv"] = csv.str();
  return out;
}

ExperimentConfig make_config(const std::string& example, std::optional<std::string> controller,
                             std::optional<double> d, std::optional<double> epsilon,
                             std::optional<Vector> x0, std::optional<double> t_final,
                             std::optional<double> dt, std::optional<std::string> disturbance,
                             std::optional<double> frequency) {
  ExperimentConfig cfg = default_config(parse_example(example));
  if (controller) cfg.controller = parse_controller(*controller);
  if (d) cfg.d = *d;
  if (epsilon) cfg.epsilon = *epsilon;
  if (x0) cfg.x0 = *x0;
  if (t_final) cfg.t_final = *t_final;
  if (dt) cfg.dt = *dt;
  if (disturbance) cfg.disturbance = parse_disturbance(*disturbance);
  if (frequency) cfg.frequency = *frequency;
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Input-to-state safe control barrier functions: certificates, controllers, simulation";

  static py::exception<Error> error_type(m, "IssfError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type.ptr())(e.what());
      exc.attr("kind") = to_string(e.kind());
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::class_<ComparisonFunction>(m, "ComparisonFunction")
      .def_static("linear", &ComparisonFunction::linear, py::arg("lam"))
      .def_static(
          "class_k",
          [](ComparisonFunction::Map f, std::optional<double> a) {
            return ComparisonFunction::class_k(std::move(f), to_bound(a));
          },
          py::arg("fn"), py::arg("a") = py::none())
      .def_static("class_k_inf", &ComparisonFunction::class_k_inf, py::arg("fn"))
      .def_static(
          "extended_k",
          [](ComparisonFunction::Map f, std::optional<double> b, std::optional<double> c) {
            return ComparisonFunction::extended_k(std::move(f), to_bound(b), to_bound(c));
          },
          py::arg("fn"), py::arg("b") = py::none(), py::arg("c") = py::none())
      .def("__call__", &ComparisonFunction::operator(), py::arg("r"))
      .def("in_domain", &ComparisonFunction::in_domain, py::arg("r"))
      .def_property_readonly("lo", [](const ComparisonFunction& f) {
        return f.lo().is_unbounded() ? -std::numeric_limits<double>::infinity() : f.lo().value();
      })
      .def_property_readonly("hi", [](const ComparisonFunction& f) { return from_bound(f.hi()); })
      .def_property_readonly("kind", [](const ComparisonFunction& f) { return to_string(f.kind()); });

  m.def(
      "validate",
      [](const ComparisonFunction& fn, int samples) {
        const ValidationReport r = validate(fn, samples);
        std::vector<std::string> violations;
        for (const Violation& v : r.violations) violations.push_back(v.describe());
        return py::make_tuple(r.ok(), violations);
      },
      py::arg("fn"), py::arg("samples") = kDefaultValidationSamples,
      "Returns (ok, violation descriptions).");
  m.def("beta_of", &beta_of, py::arg("alpha"));
  m.def("invert", &invert, py::arg("fn"), py::arg("y"), py::arg("tol") = kDefaultInvertTol);
  m.def("gamma_from", &gamma_from, py::arg("alpha"), py::arg("iota"),
        py::arg("tol") = kDefaultInvertTol);
  m.def(
      "max_disturbance",
      [](const ComparisonFunction& alpha, const ComparisonFunction& iota, std::optional<double> b,
         double tol) { return from_bound(max_disturbance(alpha, iota, to_bound(b), tol)); },
      py::arg("alpha"), py::arg("iota"), py::arg("b") = py::none(),
      py::arg("tol") = kDefaultInvertTol, "Largest admissible disturbance bound; inf if unbounded.");

  m.def(
      "solve_qp",
      [](const Matrix& H, const Vector& F, const std::vector<py::tuple>& rows) {
        return solution_dict(solve(make_qp(H, F, rows)));
      },
      py::arg("H"), py::arg("F"), py::arg("rows") = std::vector<py::tuple>{},
      "Minimize 1/2 z'Hz + F'z over z = (u, delta); rows are (a_u, a_delta, rhs, sense).");
  m.def(
      "verify_kkt",
      [](const Matrix& H, const Vector& F, const std::vector<py::tuple>& rows) {
        const QpInstance qp = make_qp(H, F, rows);
        const KktReport r = verify_kkt(qp, solve(qp));
        py::dict out;
        out["stationarity"] = r.stationarity;
        out["primal"] = r.primal;
        out["dual"] = r.dual;
        out["complementarity"] = r.complementarity;
        return out;
      },
      py::arg("H"), py::arg("F"), py::arg("rows") = std::vector<py::tuple>{});

  m.def(
      "lie1",
      [](const std::string& example, const Vector& x) {
        const Plant1 p = first_order_plant(example);
        const Lie1 d = issf::lie1(p.sys, p.spec.h, x);
        return py::make_tuple(d.lf, d.lg);
      },
      py::arg("example"), py::arg("x"), "(L_f h, L_g h) for the scalar or arctan example.");
  m.def(
      "universal_terms",
      [](const std::string& example, const Vector& x) {
        const Plant1 p = first_order_plant(example);
        const UniversalTerms t = issf::universal_terms(p.spec, p.sys, x);
        return py::make_tuple(t.A, t.B);
      },
      py::arg("example"), py::arg("x"));
  m.def(
      "universal_issf",
      [](const std::string& example, const Vector& x) {
        const Plant1 p = first_order_plant(example);
        return issf::universal_issf(p.spec, p.sys, x);
      },
      py::arg("example"), py::arg("x"));
  m.def(
      "issf_feedback",
      [](const std::string& example, const Vector& x) {
        const Plant1 p = first_order_plant(example);
        const int inputs = p.sys.m();
        return issf::issf_feedback([inputs](const Vector&) { return Vector::Zero(inputs).eval(); },
                                   p.spec, p.sys, x);
      },
      py::arg("example"), py::arg("x"), "k(x) + L_g h(x)^T with k = 0.");
  m.def(
      "min_norm_safeguarding",
      [](const std::string& example, const Vector& x) {
        const Plant1 p = first_order_plant(example);
        return issf::min_norm_safeguarding(p.spec, p.sys, x);
      },
      py::arg("example"), py::arg("x"));

  m.def(
      "integrate",
      [](const std::function<Vector(double, const Vector&)>& field, const Vector& x0, double t0,
         double tf, double dt) {
        const StatePath p = issf::integrate(field, x0, t0, tf, dt);
        return py::make_tuple(column(p.times), stack(p.states, x0.size()), p.escaped);
      },
      py::arg("field"), py::arg("x0"), py::arg("t0"), py::arg("tf"), py::arg("dt"),
      "Fixed-step RK4; returns (times, states, escaped).");

  m.def(
      "simulate",
      [](const std::string& example, std::optional<std::string> controller,
         std::optional<double> d, std::optional<double> epsilon, std::optional<Vector> x0,
         std::optional<double> t_final, std::optional<double> dt,
         std::optional<std::string> disturbance, std::optional<double> frequency) {
        const ExperimentConfig cfg =
            make_config(example, controller, d, epsilon, x0, t_final, dt, disturbance, frequency);
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run_cell(cfg);
        }
        return run_dict(r);
      },
      py::arg("example"), py::arg("controller") = py::none(), py::arg("d") = py::none(),
      py::arg("epsilon") = py::none(), py::arg("x0") = py::none(),
      py::arg("t_final") = py::none(), py::arg("dt") = py::none(),
      py::arg("disturbance") = py::none(), py::arg("frequency") = py::none(),
      "Closed-loop run; unspecified parameters take the example defaults.");

  m.def(
      "sweep",
      [](const std::string& config_text, int jobs) {
        std::istringstream in(config_text);
        const SweepConfig sc = parse_config(in, "<string>");
        std::vector<RunResult> runs;
        {
          py::gil_scoped_release release;
          runs = issf::sweep(sc, jobs);
        }
        py::list out;
        for (const RunResult& r : runs) {
          py::dict row = summary_dict(r.summary);
          row["d"] = r.config.d;
          row["epsilon"] = r.config.epsilon;
          row["x0"] = r.config.x0;
          out.append(row);
        }
        return out;
      },
      py::arg("config_text"), py::arg("jobs") = 1,
      "Runs the grid described by `key = value` text; returns one summary per cell.");

  m.def(
      "check",
      [](const std::string& example, std::size_t samples, std::uint64_t seed) {
        const CheckReport r = run_certificate_check(parse_example(example), samples, seed);
        return py::make_tuple(r.ok, r.lines);
      },
      py::arg("example"), py::arg("samples") = 10000, py::arg("seed") = 0,
      "Certificate sampling; returns (ok, report lines).");
}
