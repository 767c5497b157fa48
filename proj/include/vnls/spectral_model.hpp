#pragma once

#include <string>
#include <vector>

#include "vnls/types.hpp"

namespace vnls {

/// Discrete scattering data of the soliton sector.
///
/// `poles[j]` is the zero k_j of det a(k) in the upper half plane and
/// `norming[j]` the row vector C_j attached to it. The constants of the
/// conjugate poles k_j* are lambda * C_j^dagger and are never stored.
struct SpectralData {
  int lambda = -1;
  int n = 1;
  std::vector<Complex> poles;
  std::vector<ComplexRow> norming;

  std::size_t size() const noexcept { return poles.size(); }
  bool empty() const noexcept { return poles.empty(); }
};

struct Violation {
  std::string subject;  // e.g. "k_2", "C_1", "lambda"
  std::string rule;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<std::string> warnings;

  bool ok() const noexcept { return violations.empty(); }
  std::string summary() const;
};

/// Which region the poles must lie in. Physical input data lives in the
/// first quadrant; assembled half-line data (with the mirror poles -k_j*)
/// only in the upper half plane.
enum class PoleDomain { FirstQuadrant, UpperHalfPlane };

ValidationReport validate_spectral(const SpectralData& data,
                                   PoleDomain domain = PoleDomain::FirstQuadrant);

enum class BoundaryKind { Robin, MixedND, Rotated };

struct RotationAngles {
  double theta = 0.0;
  double zeta = 0.0;
  double xi = 0.0;
};

/// Integrable boundary condition at x = 0.
///
/// Robin:   R_x(0,t) - 2 alpha R(0,t) = 0 on every component.
/// MixedND: sigma_j = +1 is Neumann, sigma_j = -1 is Dirichlet.
/// Rotated: MixedND in the polarization basis V(theta, zeta, xi), n = 2 only.
/// Pure Dirichlet is MixedND with all sigma = -1; Robin with alpha = 0 is pure Neumann.
struct BoundarySpec {
  BoundaryKind kind = BoundaryKind::MixedND;
  double alpha = 0.0;
  std::vector<int> signs;
  RotationAngles angles;

  static BoundarySpec robin(double alpha);
  static BoundarySpec mixed(std::vector<int> signs);
  static BoundarySpec rotated(std::vector<int> signs, RotationAngles angles);

  /// True when B does not depend on k (MixedND and Rotated).
  bool is_constant() const noexcept { return kind != BoundaryKind::Robin; }
};

ValidationReport validate_boundary(const BoundarySpec& bc, int n);

/// Signs reordered so that the +1 entries come first.
std::vector<int> canonical_signs(std::vector<int> signs);

/// V = [[cos(theta) e^{i zeta}, sin(theta) e^{i xi}], [-sin(theta) e^{-i xi}, cos(theta) e^{-i zeta}]].
ComplexMatrix unitary_from_angles(double theta, double zeta, double xi);

/// The n x n boundary matrix B(k).
///
/// Robin gives ((k - i alpha)/(k + i alpha)) I_n, MixedND gives diag(sigma),
/// Rotated gives V diag(sigma) V^dagger. Throws SingularEvaluation at
/// k = -i alpha for Robin and InvalidInput for an inconsistent spec.
ComplexMatrix boundary_matrix(const BoundarySpec& bc, Complex k, int n);

}  // namespace vnls
