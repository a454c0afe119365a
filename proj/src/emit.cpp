#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "issf/bench.hpp"

namespace issf {

namespace {

namespace fs = std::filesystem;

constexpr int kSvgWidth = 720;
constexpr int kSvgHeight = 420;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 36.0;
constexpr double kMarginBottom = 44.0;
constexpr std::size_t kMaxPolylinePoints = 2000;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string pixel(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string join_state(const Vector& x, const char* sep) {
  std::string out;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) out += sep;
    out += format_number(x(i));
  }
  return out;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::Io, "cannot write " + path.string());
  return os;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create directory " + dir.string() + ": " + ec.message());
}

std::string run_label(const RunResult& run) {
  return "d=" + short_number(run.config.d) + " eps=" + short_number(run.config.epsilon) +
         " x0=" + short_number(signal_value(run.config, run.config.x0));
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& os, const RunResult& run) {
  const ExperimentConfig& cfg = run.config;
  const int n = state_dim(cfg.example);
  const int m = input_dim(cfg.example);
  os << "# issf closed-loop trace\n";
  for (const std::string& line : describe_config(cfg)) os << "# " << line << "\n";
  os << "# integrator = rk4\n";
  os << "# control_hold = zero-order\n";
  os << "# escape_norm = " << format_number(kEscapeNorm) << "\n";
  os << "# status = " << run.summary.status << "\n";

  os << "t";
  for (int i = 0; i < n; ++i) os << ",x_" << i;
  for (int i = 0; i < m; ++i) os << ",u_" << i;
  for (int i = 0; i < m; ++i) os << ",d_" << i;
  os << ",h,hdot,V,delta,qp_status\n";

  const Trajectory& tr = run.traj;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    os << format_number(tr.times[k]);
    for (int i = 0; i < n; ++i) os << ',' << format_number(tr.states[k](i));
    for (int i = 0; i < m; ++i) os << ',' << format_number(tr.inputs[k](i));
    for (int i = 0; i < m; ++i) os << ',' << format_number(tr.disturbances[k](i));
    os << ',' << format_number(tr.h_vals[k]) << ',' << format_number(tr.hdot_vals[k]) << ','
       << format_number(tr.V_vals[k]) << ',' << format_number(tr.delta_vals[k]) << ','
       << (tr.statuses[k] ? to_string(*tr.statuses[k]) : "none") << '\n';
  }
}

void write_svg(std::ostream& os, const std::vector<const RunResult*>& runs,
               const std::string& title) {
  SignalSpec spec = runs.empty() ? SignalSpec{"x", {}} : signal_spec(runs.front()->config);
  double t_max = 0.0;
  double y_lo = std::numeric_limits<double>::infinity();
  double y_hi = -std::numeric_limits<double>::infinity();
  for (double b : spec.boundaries) {
    y_lo = std::min(y_lo, b);
    y_hi = std::max(y_hi, b);
  }
  for (const RunResult* run : runs) {
    for (std::size_t k = 0; k < run->traj.size(); ++k) {
      const double y = signal_value(run->config, run->traj.states[k]);
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
      t_max = std::max(t_max, run->traj.times[k]);
    }
  }
  if (!std::isfinite(y_lo) || !std::isfinite(y_hi)) {
    y_lo = -1.0;
    y_hi = 1.0;
  }
  if (y_hi - y_lo < 1e-9) {
    y_lo -= 1.0;
    y_hi += 1.0;
  }
  const double pad = 0.05 * (y_hi - y_lo);
  y_lo -= pad;
  y_hi += pad;
  if (t_max <= 0.0) t_max = 1.0;

  const double plot_w = kSvgWidth - kMarginLeft - kMarginRight;
  const double plot_h = kSvgHeight - kMarginTop - kMarginBottom;
  auto px = [&](double t) { return kMarginLeft + plot_w * t / t_max; };
  auto py = [&](double y) { return kMarginTop + plot_h * (y_hi - y) / (y_hi - y_lo); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSvgWidth << "\" height=\""
     << kSvgHeight << "\" viewBox=\"0 0 " << kSvgWidth << ' ' << kSvgHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kSvgWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << title << "</text>\n";
  os << "<rect x=\"" << pixel(kMarginLeft) << "\" y=\"" << pixel(kMarginTop) << "\" width=\""
     << pixel(plot_w) << "\" height=\"" << pixel(plot_h)
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << pixel(kMarginLeft + plot_w / 2) << "\" y=\"" << kSvgHeight - 8
     << "\" text-anchor=\"middle\" font-size=\"12\">t [s]</text>\n";
  os << "<text x=\"14\" y=\"" << pixel(kMarginTop + plot_h / 2)
     << "\" font-size=\"12\">" << spec.label << "</text>\n";
  for (double y : {y_lo, y_hi}) {
    os << "<text x=\"" << pixel(kMarginLeft - 4) << "\" y=\"" << pixel(py(y) + 4)
       << "\" text-anchor=\"end\" font-size=\"10\">" << short_number(y) << "</text>\n";
  }
  os << "<text x=\"" << pixel(px(t_max)) << "\" y=\"" << pixel(kMarginTop + plot_h + 14)
     << "\" text-anchor=\"end\" font-size=\"10\">" << short_number(t_max) << "</text>\n";

  for (double b : spec.boundaries) {
    os << "<line x1=\"" << pixel(px(0.0)) << "\" y1=\"" << pixel(py(b)) << "\" x2=\""
       << pixel(px(t_max)) << "\" y2=\"" << pixel(py(b))
       << "\" stroke=\"black\" stroke-dasharray=\"6,4\"/>\n";
  }

  std::size_t color = 0;
  for (const RunResult* run : runs) {
    const std::size_t count = run->traj.size();
    const std::size_t stride = std::max<std::size_t>(1, (count + kMaxPolylinePoints - 1) / kMaxPolylinePoints);
    os << "<polyline fill=\"none\" stroke=\"" << kPalette[color % std::size(kPalette)]
       << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < count; k += stride) {
      os << pixel(px(run->traj.times[k])) << ','
         << pixel(py(signal_value(run->config, run->traj.states[k]))) << ' ';
    }
    if (count > 0 && (count - 1) % stride != 0) {
      os << pixel(px(run->traj.times[count - 1])) << ','
         << pixel(py(signal_value(run->config, run->traj.states[count - 1])));
    }
    os << "\"/>\n";
    os << "<text x=\"" << pixel(kMarginLeft + plot_w - 6) << "\" y=\""
       << pixel(kMarginTop + 14 + 14 * static_cast<double>(color)) << "\" text-anchor=\"end\" font-size=\"10\" fill=\""
       << kPalette[color % std::size(kPalette)] << "\">" << run_label(*run) << "</text>\n";
    ++color;
  }
  os << "</svg>\n";
}

void write_summary(std::ostream& os, const std::vector<RunResult>& runs) {
  os << "cell,example,controller,d,epsilon,x0,status,exit_code,steps,min_h,sup_h_violation,"
        "max_abs_x,max_signal,gamma_margin,min_cd_level\n";
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const RunResult& r = runs[i];
    const RunSummary& s = r.summary;
    os << i << ',' << to_string(r.config.example) << ',' << to_string(r.config.controller) << ','
       << format_number(r.config.d) << ',' << format_number(r.config.epsilon) << ','
       << join_state(r.config.x0, " ") << ',' << s.status << ',' << s.exit_code << ',' << s.steps
       << ',' << format_number(s.min_h) << ',' << format_number(s.sup_h_violation) << ','
       << format_number(s.max_abs_x) << ',' << format_number(s.max_signal) << ','
       << format_number(s.gamma_margin) << ',' << format_number(s.min_cd_level) << '\n';
  }
}

void emit_run(const RunResult& run, const fs::path& out_dir, const std::string& stem) {
  ensure_dir(out_dir);
  {
    const fs::path path = out_dir / (stem + ".csv");
    auto os = open_out(path);
    write_trace_csv(os, run);
    if (!os) throw Error(ErrorKind::Io, "failed writing " + path.string());
  }
  {
    const fs::path path = out_dir / (stem + ".svg");
    auto os = open_out(path);
    write_svg(os, {&run}, std::string(to_string(run.config.example)) + " / " +
                              to_string(run.config.controller));
    if (!os) throw Error(ErrorKind::Io, "failed writing " + path.string());
  }
}

void emit_sweep(const std::vector<RunResult>& runs, const fs::path& out_dir) {
  ensure_dir(out_dir);
  std::vector<const RunResult*> all;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "cell_%03zu", i);
    emit_run(runs[i], out_dir, stem);
    all.push_back(&runs[i]);
  }
  {
    const fs::path path = out_dir / "summary.csv";
    auto os = open_out(path);
    write_summary(os, runs);
    if (!os) throw Error(ErrorKind::Io, "failed writing " + path.string());
  }
  if (!runs.empty()) {
    const fs::path path = out_dir / "overlay.svg";
    auto os = open_out(path);
    write_svg(os, all, std::string(to_string(runs.front().config.example)) + " sweep");
    if (!os) throw Error(ErrorKind::Io, "failed writing " + path.string());
  }
}

void emit_artifacts(const ExampleArtifacts& artifacts, const fs::path& out_dir) {
  for (const Panel& panel : artifacts.panels) {
    const fs::path dir = out_dir / panel.name;
    ensure_dir(dir);
    std::vector<const RunResult*> runs;
    for (std::size_t i = 0; i < panel.runs.size(); ++i) {
      char stem[32];
      std::snprintf(stem, sizeof stem, "run_%02zu", i);
      emit_run(panel.runs[i], dir, stem);
      runs.push_back(&panel.runs[i]);
    }
    {
      auto os = open_out(dir / "summary.csv");
      write_summary(os, panel.runs);
    }
    auto os = open_out(dir / "panel.svg");
    const std::string example =
        panel.runs.empty() ? "" : to_string(panel.runs.front().config.example);
    write_svg(os, runs, example + ": varying " + panel.varied);
  }
}

}  // namespace issf
