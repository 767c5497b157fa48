#pragma once

#include <optional>
#include <vector>

#include "vnls/spectral_model.hpp"

namespace vnls {

/// phi(x, t, k) = k x + 2 k^2 t
Complex phase(double x, double t, Complex k);

struct EngineOptions {
  /// mu_matrix refuses points where any exponent has real part above this.
  double exponent_guard = 60.0;
  double min_rcond = 1e-12;
};

/// The J n x J n block matrix mu(x,t) exactly as in the pure-soliton system:
/// mu_{ml} = delta_{ml} I - lambda sum_j e^{2i(k_j - k_m*)x + 4i(k_j^2 - k_m*^2)t}
///           / ((k_l* - k_j)(k_j - k_m*)) C_m^dagger C_j.
/// Throws DomainWindow when the exponent guard trips.
ComplexMatrix mu_matrix(double x, double t, const SpectralData& data, const EngineOptions& options = {});

/// Right-hand side blocks C_j^dagger e^{-2i k_j* x - 4i k_j*^2 t}, stacked.
ComplexVector mu_rhs(double x, double t, const SpectralData& data, const EngineOptions& options = {});

/// R(x,t) of the pure-soliton reconstruction.
///
/// Solved through a 2J x 2J system equivalent to the mu system whose rows are
/// scaled so that no exponential of modulus above one is formed; valid at any
/// (x,t) where the solution itself is representable.
/// Throws IllConditioned with the condition estimate when the system is singular.
ComplexVector reconstruct_field(double x, double t, const SpectralData& data, const EngineOptions& options = {});

struct Axis {
  double min = 0.0;
  double max = 0.0;
  int count = 1;

  double at(int i) const noexcept { return count == 1 ? min : min + (max - min) * i / (count - 1); }
  double spacing() const noexcept { return count > 1 ? (max - min) / (count - 1) : 0.0; }
  std::vector<double> values() const;
};

struct GridAxes {
  Axis x;
  Axis t;
};

/// Throws InvalidInput unless counts are positive and multi-point axes strictly increase.
void validate_axes(const GridAxes& axes);

struct FieldSample {
  double x = 0.0;
  double t = 0.0;
  ComplexVector R;
};

/// Samples ordered t-major then x.
struct FieldGrid {
  GridAxes axes;
  int n = 0;
  std::vector<FieldSample> samples;

  const FieldSample& at(int it, int ix) const { return samples[static_cast<std::size_t>(it) * axes.x.count + ix]; }
};

/// Evaluates reconstruct_field over the grid. `threads` = 0 picks the hardware
/// count; the result is independent of the partition. Pointwise failures are
/// rethrown with the grid coordinates attached.
FieldGrid field_grid(const SpectralData& data, const GridAxes& axes, const EngineOptions& options = {},
                     unsigned threads = 1);

struct PeakScanOptions {
  /// Grid spacing; 0 selects width/20 with width = 1/(2 min Im k_j).
  double spacing = 0.0;
  /// Parabolic refinement stops once the bracket falls below this fraction of the width.
  double refine_fraction = 1e-5;
};

struct PeakReport {
  std::optional<double> x_peak;  // empty for an identically zero field
  std::vector<double> amplitudes;
  double total = 0.0;
};

/// Maximum of sum_j |R_j|^2 at fixed t over [x_lo, x_hi]. Ties on the grid go
/// to the smaller x. Throws PeakOnEdge when the maximum sits on the window edge.
PeakReport peak_scan(const SpectralData& data, double t, double x_lo, double x_hi,
                     const PeakScanOptions& options = {}, const EngineOptions& engine = {});

/// 1/(2 min_j Im k_j); zero for vacuum.
double soliton_width(const SpectralData& data);

/// Centre of the isolated soliton of pole k with constant c:
/// -4 Re(k) t + ln(|c|^2 / (4 eta^2)) / (4 eta), eta = Im k.
double free_soliton_centre(Complex k, const ComplexRow& c, double t);

}  // namespace vnls
