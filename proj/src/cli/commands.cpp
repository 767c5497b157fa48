#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

#include "vnls/cli.hpp"
#include "vnls/conservation.hpp"
#include "vnls/verification.hpp"

namespace vnls::cli {

SpectralData evaluation_data(const RunConfig& config, std::optional<HalfLineProblem>& problem) {
  if (!config.boundary) {
    const ValidationReport rep = validate_spectral(config.data);
    if (!rep.ok()) throw Error(ErrorKind::InvalidInput, rep.summary());
    return config.data;
  }
  AssembleOptions opts;
  opts.tolerance_supplied = config.tolerances.constraint;
  problem = assemble_halfline(config.data, *config.boundary, config.mirror_norming, opts);
  return problem->assembled;
}

namespace {

std::string out_path(const RunConfig& config, const std::string& out) {
  if (!out.empty()) return out;
  if (config.output_path) return *config.output_path;
  throw ConfigError("--out", "no output path given");
}

std::vector<double> linspace(double lo, double hi, int count) {
  return Axis{lo, hi, count}.values();
}

// At most `cap` evenly spread values of the axis, endpoints included.
std::vector<double> thin(const Axis& a, int cap) { return Axis{a.min, a.max, std::min(a.count, cap)}.values(); }

std::string shortest(double v) {
  char buf[32];
  return std::string(buf, std::to_chars(buf, buf + sizeof buf, v).ptr);
}

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

struct CheckLine {
  std::string name;
  std::string status;  // PASS, FAIL, INFO, SKIP
  double value = 0.0;
  double threshold = 0.0;
  std::string note;
};

}  // namespace

int cmd_simulate(const RunConfig& config, const std::string& out, bool heatmap, std::ostream& log) {
  const std::string path = out_path(config, out);
  std::optional<HalfLineProblem> problem;
  const SpectralData data = evaluation_data(config, problem);
  const FieldGrid grid = field_grid(data, config.grid, {}, 0);
  write_atomic(path, field_csv(config, grid));
  log << "wrote " << grid.samples.size() << " samples to " << path << "\n";
  if (heatmap) {
    for (int j = 0; j < grid.n; ++j) {
      const std::string img = path + ".R" + std::to_string(j + 1) + ".pgm";
      write_atomic(img, heatmap_pgm(config, grid, j));
      log << "wrote " << img << "\n";
    }
  }
  return kOk;
}

int cmd_scan_theta(const RunConfig& config, const std::string& out, std::ostream& log) {
  const std::string path = out_path(config, out);
  if (config.data.n != 2 || config.data.size() != 1) {
    throw ConfigError("poles", "theta scan needs one pole with two components");
  }
  if (config.boundary && config.boundary->kind != BoundaryKind::Rotated) {
    throw ConfigError("boundary.kind", "theta scan runs over the rotated family");
  }
  if (!config.theta_scan) throw ConfigError("theta_scan", "missing section");
  const ThetaScanConfig& ts = *config.theta_scan;
  const std::vector<int> signs = config.boundary ? config.boundary->signs : std::vector<int>{1, -1};
  const auto thetas = linspace(ts.theta_min, ts.theta_max, ts.n_theta);

  const ThetaScan scan = theta_scan(config.data.poles[0], config.data.norming[0], ts.zeta, ts.xi, thetas, signs);

  std::string s = comment_header(config, "scan-theta");
  s += "theta,in_1,in_2,out_1,out_2,in_total,out_total\n";
  for (std::size_t i = 0; i < scan.thetas.size(); ++i) {
    const ReflectionSummary& r = scan.summaries[i];
    s += format_real(scan.thetas[i]);
    for (double a : r.incoming_amplitudes) s += "," + format_real(a);
    for (double a : r.outgoing_amplitudes) s += "," + format_real(a);
    s += "," + format_real(r.incoming_total) + "," + format_real(r.outgoing_total) + "\n";
  }
  const ReflectionSummary& star = scan.summaries[scan.star_index];
  s += "# theta_star=" + format_real(scan.theta_star) + " out_2=" + format_real(star.outgoing_amplitudes[1]) +
       " horizon=" + format_real(star.measurement_times.second) + "\n";
  write_atomic(path, s);
  log << "wrote " << scan.thetas.size() << " rows to " << path << "; theta* = " << scan.theta_star
      << ", outgoing |R_2| = " << star.outgoing_amplitudes[1] << " of total " << star.outgoing_total << "\n";
  return kOk;
}

int cmd_charges(const RunConfig& config, const std::string& out, const std::vector<int>& orders,
                const std::vector<double>& times, std::ostream& log) {
  const std::string path = out_path(config, out);
  if (!config.boundary) throw ConfigError("boundary", "charges are integrated over the half line; a boundary is required");
  for (int p : orders) {
    if (p < 1 || p > 6) throw ConfigError("--orders", "orders must lie in 1..6");
  }
  std::optional<HalfLineProblem> problem;
  evaluation_data(config, problem);
  const std::vector<double> ts = times.empty() ? linspace(config.grid.t.min, config.grid.t.max, 17) : times;
  const ChargeSeries series = charges_over_time(*problem, ts, orders);

  std::string s = comment_header(config, "charges");
  s += "t";
  for (int p : orders) s += ",re_I" + std::to_string(p) + ",im_I" + std::to_string(p);
  s += ",tail_flag\n";
  for (std::size_t it = 0; it < ts.size(); ++it) {
    s += format_real(ts[it]);
    for (std::size_t o = 0; o < orders.size(); ++o) {
      s += "," + format_real(series.values(it, o).real()) + "," + format_real(series.values(it, o).imag());
    }
    s += series.tail_flags[it] ? ",1\n" : ",0\n";
  }
  s += "# drift";
  for (std::size_t o = 0; o < orders.size(); ++o) {
    s += " I" + std::to_string(orders[o]) + ":abs=" + format_real(series.drift[o]) +
         ",rel=" + format_real(series.relative_drift[o]) + (orders[o] % 2 ? "" : ",ungated");
  }
  s += " x_max=" + format_real(series.x_max) + " n_x=" + std::to_string(series.n_x) + "\n";
  write_atomic(path, s);

  log << "wrote " << ts.size() << " rows to " << path << "\n";
  for (std::size_t o = 0; o < orders.size(); ++o) {
    log << "  I" << orders[o] << " relative drift " << sci(series.relative_drift[o])
        << (orders[o] % 2 ? "" : " (even order, not conserved)") << "\n";
  }
  if (std::any_of(series.tail_flags.begin(), series.tail_flags.end(), [](bool b) { return b; })) {
    log << "  warning: field tail above tolerance at x_max for some times\n";
  }
  return kOk;
}

int cmd_verify(const RunConfig& config, const std::string& out, std::ostream& log) {
  const Tolerances& tol = config.tolerances;
  std::vector<CheckLine> lines;
  auto gate = [&](std::string name, double value, double threshold, std::string note = {}) {
    lines.push_back({std::move(name), value < threshold ? "PASS" : "FAIL", value, threshold, std::move(note)});
  };
  auto info = [&](std::string name, double value, std::string note) {
    lines.push_back({std::move(name), "INFO", value, 0.0, std::move(note)});
  };
  auto skip = [&](std::string name, std::string note) { lines.push_back({std::move(name), "SKIP", 0.0, 0.0, std::move(note)}); };

  std::optional<HalfLineProblem> problem;
  SpectralData data = config.data;
  bool constraints_ok = true;
  if (config.boundary) {
    try {
      data = evaluation_data(config, problem);
      double worst = 0.0;
      for (const auto& r : problem->residuals) worst = std::max(worst, r.worst());
      gate("constraints", worst, problem->mirror_supplied ? tol.constraint : 1e-10,
           problem->mirror_supplied ? "supplied mirror constants" : "computed mirror constant");
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ConstraintViolation && e.kind() != ErrorKind::Unsupported) throw;
      lines.push_back({"constraints", "FAIL", 0.0, tol.constraint, e.what()});
      constraints_ok = false;
    }
  } else {
    skip("constraints", "no boundary: line evaluation");
  }

  if (constraints_ok) {
    // PDE residual at three steps.
    const auto xs = thin(config.grid.x, 21), ts = thin(config.grid.t, 9);
    const FieldFunction f = [&data](double x, double t) { return reconstruct_field(x, t, data); };
    const std::vector<double> hs = {1e-2, 5e-3, 2.5e-3};
    std::vector<double> res;
    for (double h : hs) res.push_back(pde_residual(f, data.lambda, xs, ts, h, false).max_abs);
    if (res.back() < 1e-11) {
      lines.push_back({"pde-exponent", "PASS", 0.0, 0.0, "residual " + sci(res.back()) + " at round-off level"});
    } else {
      const double slope = convergence_slope(hs, res);
      const bool ok = slope >= tol.pde_exponent_min && slope <= tol.pde_exponent_max;
      lines.push_back({"pde-exponent", ok ? "PASS" : "FAIL", slope, tol.pde_exponent_max,
                       "residual " + sci(res.front()) + " .. " + sci(res.back()) + ", window [" +
                           shortest(tol.pde_exponent_min) + ", " + shortest(tol.pde_exponent_max) + "]"});
    }

    if (problem) {
      const auto times = config.grid.t.values();
      if (problem->bc.kind == BoundaryKind::Robin) {
        std::vector<double> bres;
        for (double h : hs) bres.push_back(boundary_residual(*problem, times, h).report.max_abs);
        std::string note = "empirical only; residual " + sci(bres.front()) + " .. " + sci(bres.back());
        if (bres.back() > 1e-12) note += ", refinement slope " + sci(convergence_slope(hs, bres));
        info("boundary-robin", bres.back(), note);
        skip("mirror-symmetry", "not applicable to Robin boundaries");
      } else {
        const BoundaryResidual b = boundary_residual(*problem, times, tol.boundary_h);
        gate("boundary-value", b.value_max, tol.boundary_value, "Dirichlet channels |R_j(0,t)|");
        gate("boundary-derivative", b.derivative_max, tol.boundary_derivative, "Neumann channels |R_j,x(0,t)|");
        const double width = soliton_width(data);
        const double x_safe = data.empty() ? 8.0 : std::min(8.0, 30.0 * width);
        const GridAxes window{{0.0, x_safe, 101}, {config.grid.t.min, config.grid.t.max, std::min(config.grid.t.count, 51)}};
        gate("mirror-symmetry", mirror_symmetry_residual(*problem, window).max_abs, tol.mirror);
      }

      const std::vector<int> orders = {1, 2, 3};
      const auto ct = linspace(config.grid.t.min, config.grid.t.max, 17);
      const ChargeSeries series = charges_over_time(*problem, ct, orders);
      gate("drift-I1", series.relative_drift[0], tol.drift, "relative");
      info("drift-I2", series.relative_drift[1], "even order, not conserved; ungated");
      gate("drift-I3", series.relative_drift[2], tol.drift, "relative");
    } else {
      skip("boundary", "no boundary: line evaluation");
      skip("charges", "no boundary: line evaluation");
    }
  }

  bool failed = false;
  std::string csv = comment_header(config, "verify") + "check,status,value,threshold,note\n";
  for (const CheckLine& l : lines) {
    failed = failed || l.status == "FAIL";
    log << "[" << l.status << "] " << l.name;
    if (l.status == "PASS" || l.status == "FAIL" || l.status == "INFO") log << "  " << sci(l.value);
    if (l.threshold > 0.0) log << " (threshold " << sci(l.threshold) << ")";
    if (!l.note.empty()) log << "  " << l.note;
    log << "\n";
    std::string note = l.note;
    std::replace(note.begin(), note.end(), ',', ';');
    std::replace(note.begin(), note.end(), '\n', ' ');
    csv += l.name + "," + l.status + "," + format_real(l.value) + "," + format_real(l.threshold) + "," + note + "\n";
  }
  log << (failed ? "verification FAILED\n" : "verification passed\n");
  // the config's "output" belongs to simulate; checks are written only on request
  if (!out.empty()) write_atomic(out, csv);
  return failed ? kGatedFailure : kOk;
}

}  // namespace vnls::cli
