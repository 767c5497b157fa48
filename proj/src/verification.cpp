#include "vnls/verification.hpp"

#include <algorithm>
#include <cmath>

namespace vnls {

const char* to_string(ResidualKind kind) noexcept {
  switch (kind) {
    case ResidualKind::PDE: return "pde";
    case ResidualKind::BoundaryRobin: return "boundary-robin";
    case ResidualKind::BoundaryMixed: return "boundary-mixed";
    case ResidualKind::MirrorSymmetry: return "mirror-symmetry";
    case ResidualKind::AmplitudeBalance: return "amplitude-balance";
  }
  return "unknown";
}

namespace {

ResidualReport pde_pass(const FieldFunction& field, int lambda, std::span<const double> xs,
                        std::span<const double> ts, double h) {
  ResidualReport rep;
  rep.kind = ResidualKind::PDE;
  rep.h_used = h;
  rep.max_abs = -1.0;
  for (double t : ts) {
    for (double x : xs) {
      const ComplexVector r0 = field(x, t);
      const ComplexVector rt = (field(x, t + h) - field(x, t - h)) / (2.0 * h);
      const ComplexVector rxx = (field(x + h, t) - 2.0 * r0 + field(x - h, t)) / (h * h);
      const double power = r0.squaredNorm();
      const ComplexVector res = kI * rt + rxx - 2.0 * lambda * power * r0;
      const double m = max_abs(res);
      if (m > rep.max_abs) {
        rep.max_abs = m;
        rep.x = x;
        rep.t = t;
      }
    }
  }
  rep.max_abs = std::max(rep.max_abs, 0.0);
  return rep;
}

}  // namespace

ResidualReport pde_residual(const FieldFunction& field, int lambda, std::span<const double> xs,
                            std::span<const double> ts, double h, bool estimate_convergence) {
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorKind::InvalidInput, "step h must be positive");
  if (xs.empty() || ts.empty()) throw Error(ErrorKind::InvalidInput, "residual needs at least one point");
  ResidualReport rep = pde_pass(field, lambda, xs, ts, h);
  if (estimate_convergence) {
    const ResidualReport half = pde_pass(field, lambda, xs, ts, h / 2.0);
    if (rep.max_abs > 0.0 && half.max_abs > 0.0) rep.convergence_exponent = std::log2(rep.max_abs / half.max_abs);
  }
  return rep;
}

ResidualReport pde_residual(const SpectralData& data, const GridAxes& axes, double h, bool estimate_convergence) {
  validate_axes(axes);
  const auto xs = axes.x.values(), ts = axes.t.values();
  const FieldFunction f = [&data](double x, double t) { return reconstruct_field(x, t, data); };
  return pde_residual(f, data.lambda, xs, ts, h, estimate_convergence);
}

double convergence_slope(std::span<const double> hs, std::span<const double> residuals) {
  if (hs.size() != residuals.size() || hs.size() < 2) {
    throw Error(ErrorKind::InvalidInput, "slope needs matching lists of at least two values");
  }
  const std::size_t n = hs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(hs[i] > 0.0) || !(residuals[i] > 0.0)) throw Error(ErrorKind::InvalidInput, "slope needs positive values");
    const double lx = std::log(hs[i]), ly = std::log(residuals[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

BoundaryResidual boundary_residual(const HalfLineProblem& problem, std::span<const double> times, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidInput, "step h must be positive");
  const SpectralData& data = problem.assembled;
  const BoundarySpec& bc = problem.bc;
  const int n = problem.n();

  BoundaryResidual out;
  out.report.h_used = h;
  out.report.kind = bc.kind == BoundaryKind::Robin ? ResidualKind::BoundaryRobin : ResidualKind::BoundaryMixed;
  out.empirical = bc.kind == BoundaryKind::Robin;

  ComplexMatrix basis = ComplexMatrix::Identity(n, n);
  if (bc.kind == BoundaryKind::Rotated) {
    basis = unitary_from_angles(bc.angles.theta, bc.angles.zeta, bc.angles.xi).adjoint();
  }

  for (double t : times) {
    const ComplexVector r0 = basis * reconstruct_field(0.0, t, data);
    const ComplexVector r1 = basis * reconstruct_field(h, t, data);
    const ComplexVector r2 = basis * reconstruct_field(2.0 * h, t, data);
    const ComplexVector rx = (-3.0 * r0 + 4.0 * r1 - r2) / (2.0 * h);

    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
      double v = 0.0;
      if (bc.kind == BoundaryKind::Robin) {
        v = std::abs(rx(j) - 2.0 * bc.alpha * r0(j));
        out.derivative_max = std::max(out.derivative_max, v);
      } else if (bc.signs[j] == -1) {
        v = std::abs(r0(j));
        out.value_max = std::max(out.value_max, v);
      } else {
        v = std::abs(rx(j));
        out.derivative_max = std::max(out.derivative_max, v);
      }
      worst = std::max(worst, v);
    }
    out.per_time.push_back(worst);
    if (worst > out.report.max_abs || out.per_time.size() == 1) {
      out.report.max_abs = worst;
      out.report.t = t;
    }
  }
  return out;
}

ResidualReport mirror_symmetry_residual(const HalfLineProblem& problem, const GridAxes& axes,
                                        const std::optional<ComplexMatrix>& b_override) {
  if (problem.bc.kind == BoundaryKind::Robin) {
    throw Error(ErrorKind::NotApplicable, "mirror symmetry with a constant B does not apply to Robin boundaries");
  }
  validate_axes(axes);
  const ComplexMatrix b = b_override ? *b_override : problem.boundary();
  if (b.rows() != problem.n() || b.cols() != problem.n()) {
    throw Error(ErrorKind::InvalidInput, "boundary matrix has the wrong order");
  }
  ResidualReport rep;
  rep.kind = ResidualKind::MirrorSymmetry;
  for (int it = 0; it < axes.t.count; ++it) {
    const double t = axes.t.at(it);
    for (int ix = 0; ix < axes.x.count; ++ix) {
      const double x = axes.x.at(ix);
      const ComplexVector d = reconstruct_field(-x, t, problem.assembled) - b * reconstruct_field(x, t, problem.assembled);
      const double m = d.norm();
      if (m > rep.max_abs) {
        rep.max_abs = m;
        rep.x = x;
        rep.t = t;
      }
    }
  }
  return rep;
}

namespace {

PeakReport scan_near(const SpectralData& data, double t, double centre, double half_window, double x_floor) {
  const double lo = std::max(x_floor, centre - half_window);
  return peak_scan(data, t, lo, centre + half_window);
}

}  // namespace

double default_horizon(Complex k1, const ComplexRow& c1) {
  const SpectralData line{-1, static_cast<int>(c1.size()), {k1}, {c1}};
  const double width = soliton_width(line);
  const double v = 4.0 * k1.real();
  const PeakReport p = scan_near(line, 0.0, free_soliton_centre(k1, c1, 0.0), 20.0 * width, -1e300);
  const double offset = p.x_peak.value_or(0.0);
  return std::max(8.0, (5.0 * width + std::abs(offset)) / v);
}

ReflectionSummary reflection_summary(const HalfLineProblem& problem, const ReflectionOptions& options) {
  if (problem.base.size() != 1) {
    throw Error(ErrorKind::InvalidInput, "reflection summary needs exactly one physical soliton");
  }
  const Complex k1 = problem.base.poles[0];
  if (k1.real() < options.min_speed_re_k) {
    throw Error(ErrorKind::Horizon, "soliton too slow for a finite measurement horizon (Re k_1 < " +
                                        std::to_string(options.min_speed_re_k) + ")");
  }
  const ComplexRow& c1 = problem.base.norming[0];
  const ComplexRow& c1p = problem.mirror_norming[0];
  const double T = options.horizon ? *options.horizon : default_horizon(k1, c1);
  const double width = soliton_width(problem.assembled);
  const double half = options.window_widths * width;

  const PeakReport in = scan_near(problem.assembled, -T, free_soliton_centre(k1, c1, -T), half, 0.0);
  const PeakReport out = scan_near(problem.assembled, T, free_soliton_centre(-std::conj(k1), c1p, T), half, 0.0);
  if (!in.x_peak || !out.x_peak) throw Error(ErrorKind::SingularEvaluation, "no soliton found in the measurement window");

  ReflectionSummary s;
  s.incoming_amplitudes = in.amplitudes;
  s.outgoing_amplitudes = out.amplitudes;
  s.incoming_total = in.total;
  s.outgoing_total = out.total;
  s.incoming_x = *in.x_peak;
  s.outgoing_x = *out.x_peak;
  s.measurement_times = {-T, T};
  if (problem.bc.kind == BoundaryKind::Rotated) s.theta_params = problem.bc.angles;
  return s;
}

ThetaScan theta_scan(Complex k1, const ComplexRow& c1, double zeta, double xi, std::span<const double> thetas,
                     const std::vector<int>& signs, const ReflectionOptions& options) {
  if (c1.size() != 2) throw Error(ErrorKind::InvalidInput, "theta scan needs two components");
  if (thetas.empty()) throw Error(ErrorKind::InvalidInput, "theta list is empty");
  const SpectralData base{-1, 2, {k1}, {c1}};
  ReflectionOptions opts = options;
  if (!opts.horizon) opts.horizon = default_horizon(k1, c1);

  ThetaScan scan;
  scan.thetas.assign(thetas.begin(), thetas.end());
  for (double theta : thetas) {
    const HalfLineProblem p = assemble_halfline(base, BoundarySpec::rotated(signs, {theta, zeta, xi}));
    scan.summaries.push_back(reflection_summary(p, opts));
  }
  for (std::size_t i = 1; i < scan.summaries.size(); ++i) {
    if (scan.summaries[i].outgoing_amplitudes[1] < scan.summaries[scan.star_index].outgoing_amplitudes[1]) {
      scan.star_index = i;
    }
  }
  scan.theta_star = scan.thetas[scan.star_index];
  return scan;
}

}  // namespace vnls
