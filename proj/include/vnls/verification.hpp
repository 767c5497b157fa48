#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "vnls/mirror_builder.hpp"
#include "vnls/soliton_engine.hpp"

namespace vnls {

enum class ResidualKind { PDE, BoundaryRobin, BoundaryMixed, MirrorSymmetry, AmplitudeBalance };

const char* to_string(ResidualKind kind) noexcept;

struct ResidualReport {
  ResidualKind kind = ResidualKind::PDE;
  double max_abs = 0.0;
  double x = 0.0;  // worst point
  double t = 0.0;
  double h_used = 0.0;
  std::optional<double> convergence_exponent;
};

using FieldFunction = std::function<ComplexVector(double x, double t)>;

/// Max over the points of |i R_t + R_xx - 2 lambda R (R^dagger R)| with second-order
/// central differences of step h. When `estimate_convergence` is set the run is
/// repeated with h/2 and the exponent log2(res(h)/res(h/2)) is attached.
ResidualReport pde_residual(const FieldFunction& field, int lambda, std::span<const double> xs,
                            std::span<const double> ts, double h, bool estimate_convergence = true);

/// Convenience overload over a rectangular grid of the reconstruction.
ResidualReport pde_residual(const SpectralData& data, const GridAxes& axes, double h,
                            bool estimate_convergence = true);

/// Log-log slope of residuals measured at a sequence of step sizes (least squares).
double convergence_slope(std::span<const double> hs, std::span<const double> residuals);

struct BoundaryResidual {
  ResidualReport report;           // worst applicable condition
  double value_max = 0.0;          // Dirichlet channels: |R_j(0,t)|
  double derivative_max = 0.0;     // Neumann channels: |d_x R_j(0,t)|
  std::vector<double> per_time;    // max over components at each time
  bool empirical = false;          // Robin: no theorem behind the check
};

/// Evaluates the boundary condition at x = 0 using a one-sided second-order
/// x-derivative of step h. Robin checks R_x - 2 alpha R on every component;
/// MixedND checks R_j for sigma_j = -1 and R_j,x for sigma_j = +1; Rotated
/// applies the MixedND test to V^dagger R.
BoundaryResidual boundary_residual(const HalfLineProblem& problem, std::span<const double> times, double h);

/// max ||R(-x,t) - B R(x,t)|| over the grid (x taken from the axes, both signs).
/// `b_override` replaces B, for anti-tests. Robin throws NotApplicable.
ResidualReport mirror_symmetry_residual(const HalfLineProblem& problem, const GridAxes& axes,
                                        const std::optional<ComplexMatrix>& b_override = std::nullopt);

struct ReflectionSummary {
  std::vector<double> incoming_amplitudes;
  std::vector<double> outgoing_amplitudes;
  double incoming_total = 0.0;
  double outgoing_total = 0.0;
  double incoming_x = 0.0;
  double outgoing_x = 0.0;
  std::pair<double, double> measurement_times{0.0, 0.0};
  std::optional<RotationAngles> theta_params;

  double balance() const noexcept { return std::abs(incoming_total - outgoing_total); }
};

struct ReflectionOptions {
  /// Measurement horizon T; when absent T = max(8, (5 width + |x_offset|) / v).
  std::optional<double> horizon;
  double min_speed_re_k = 0.05;
  /// Half-width of the peak window around the predicted centre, in soliton widths.
  double window_widths = 20.0;
};

/// Horizon of the default rule for a single pole with constant c.
double default_horizon(Complex k1, const ComplexRow& c1);

/// Peak scans at t = -T and t = +T of a single-soliton half-line problem.
/// Throws Horizon when Re k_1 is below the speed threshold.
ReflectionSummary reflection_summary(const HalfLineProblem& problem, const ReflectionOptions& options = {});

struct ThetaScan {
  std::vector<double> thetas;
  std::vector<ReflectionSummary> summaries;
  double theta_star = 0.0;  // argmin of the outgoing second-component amplitude
  std::size_t star_index = 0;
};

/// Rotated boundary with sign pattern `signs` at every theta of the list.
ThetaScan theta_scan(Complex k1, const ComplexRow& c1, double zeta, double xi, std::span<const double> thetas,
                     const std::vector<int>& signs = {1, -1}, const ReflectionOptions& options = {});

}  // namespace vnls
