#pragma once

#include <optional>
#include <span>
#include <vector>

#include "vnls/mirror_builder.hpp"

namespace vnls {

enum class DerivativeScheme { Central2, Central4 };

/// Uniform x-grid on [x0, x0 + (count-1) h].
struct UniformGrid {
  double x0 = 0.0;
  double h = 0.0;
  int count = 0;

  double at(int i) const noexcept { return x0 + h * i; }
  double end() const noexcept { return at(count - 1); }

  /// Throws InvalidInput unless the points are uniformly spaced to 1e-9 relative.
  static UniformGrid from_points(std::span<const double> xs);
};

/// Gamma_1 .. Gamma_P of the series expansion; gamma[p-1] has one row per grid point.
struct GammaCoefficients {
  int order = 0;
  std::vector<ComplexMatrix> gamma;
};

/// Gamma_1 = -lambda R^dagger, Gamma_{m+1} = Gamma_m,x + sum_{k=1}^{m-1} (Gamma_k R) Gamma_{m-k}.
/// `samples` holds R(x_i) as row i (grid points by n). Throws InvalidInput for P
/// outside [1, 6] or too few points for the stencil.
GammaCoefficients gamma_recursion(const UniformGrid& grid, const ComplexMatrix& samples, int lambda, int order,
                                  DerivativeScheme scheme = DerivativeScheme::Central4);

/// First derivative along rows; one-sided stencils of matching order at both ends.
ComplexMatrix differentiate(const ComplexMatrix& f, double h, DerivativeScheme scheme);

/// Composite Simpson over uniform samples; the last three intervals use the
/// 3/8 rule when the interval count is odd.
Complex simpson(std::span<const Complex> f, double h);

struct ChargeOptions {
  DerivativeScheme scheme = DerivativeScheme::Central4;
  double tail_tolerance = 1e-10;
};

struct ChargeValue {
  Complex value;  // raw integral of tr(R Gamma_p)
  bool tail_flag = false;

  /// Real conserved combination: 4 Re I_p for odd p, zero for even p.
  double symmetrized(int p) const noexcept { return p % 2 ? 4.0 * value.real() : 0.0; }
};

/// I_p = integral over the grid of Gamma_p R. The tail flag is raised when
/// |R| at the last grid point exceeds the tolerance.
ChargeValue charge(int p, const UniformGrid& grid, const ComplexMatrix& samples, int lambda,
                   const ChargeOptions& options = {});

/// All orders 1..P from one recursion.
std::vector<ChargeValue> charges(int max_order, const UniformGrid& grid, const ComplexMatrix& samples,
                                 int lambda, const ChargeOptions& options = {});

struct ChargeGrid {
  int n_x = 2000;
  /// Defaults to the farthest soliton centre over the requested times plus 25 widths.
  std::optional<double> x_max;
  double widths_beyond_centre = 25.0;
};

struct ChargeSeries {
  std::vector<int> orders;
  std::vector<double> times;
  ComplexMatrix values;             // times x orders
  std::vector<bool> tail_flags;     // per time
  std::vector<double> drift;        // max_t |I_p(t) - I_p(t_0)| per order
  std::vector<double> relative_drift;
  double x_max = 0.0;
  int n_x = 0;
};

/// Samples R on [0, x_max] at every time and integrates the requested orders.
ChargeSeries charges_over_time(const HalfLineProblem& problem, std::span<const double> times,
                               std::span<const int> orders, const ChargeGrid& grid = {},
                               const ChargeOptions& options = {});

}  // namespace vnls
