#pragma once

#include <optional>
#include <vector>

#include "vnls/spectral_model.hpp"

namespace vnls {

/// Factor D(k) = I + ((k - kappa)/(k - kappa*) - 1) Pi of the dressing product.
struct DressingFactor {
  Complex pole;
  ComplexMatrix projector;
};

/// Pi = c^dagger c / (c c^dagger). Throws InvalidInput for a zero vector.
ComplexMatrix rank_one_projector(const ComplexRow& c);

/// Throws SingularEvaluation at k = kappa*.
ComplexMatrix dressing_factor_eval(const DressingFactor& df, Complex k);

/// (k1 + k1*) / (2 k1* (k1 - k1*)), the derivative of the scalar dressing
/// coefficient at the mirror pole -k1*. Throws SingularEvaluation for real k1.
Complex alpha_prime(Complex k1);

/// Boundary matrix as it enters the norming-constant relations: B(-k).
///
/// Taking the literal B(k) would realize R_x + 2 alpha R = 0 for Robin, the
/// opposite sign of the requested condition. For MixedND and Rotated the two
/// coincide because B is constant.
ComplexMatrix reflected_boundary_matrix(const BoundarySpec& bc, Complex k, int n);

struct MirrorConstantDetail {
  ComplexRow c1_prime;
  ComplexRow v1;       // unnormalized V_1
  double v1_norm2;     // V_1 V_1^dagger, real and positive
};

MirrorConstantDetail mirror_norming_constant_detail(Complex k1, const ComplexRow& c1,
                                                    const BoundarySpec& bc, int lambda = -1);

/// Mirror norming constant C1' of the single-soliton problem.
ComplexRow mirror_norming_constant(Complex k1, const ComplexRow& c1, const BoundarySpec& bc,
                                   int lambda = -1);

/// Max-norm residuals of the two bilinear relations tying C_j to C_j':
/// `direct` at k_j, `mirror` at -k_j*.
struct ConstraintResidual {
  double direct = 0.0;
  double mirror = 0.0;

  double worst() const noexcept { return direct > mirror ? direct : mirror; }
};

ConstraintResidual verify_constraints(Complex k1, const ComplexRow& c1, const ComplexRow& c1_prime,
                                      const BoundarySpec& bc, int lambda = -1);

/// Projectors built recursively from the interleaved pole list: the j-th row is
/// C_j D_1(kappa_j) ... D_{j-1}(kappa_j) before normalization.
std::vector<DressingFactor> dressing_chain(const std::vector<Complex>& poles,
                                           const std::vector<ComplexRow>& norming);

/// Residuals of every (k_j, -k_j*) pair of assembled data, using the full
/// 2N-factor dressing product for the cofactor matrices. Reduces to
/// verify_constraints for a single pair.
std::vector<ConstraintResidual> verify_all_constraints(const SpectralData& assembled,
                                                       const BoundarySpec& bc);

struct HalfLineProblem {
  SpectralData base;
  BoundarySpec bc;
  std::vector<ComplexRow> mirror_norming;
  SpectralData assembled;
  std::vector<ConstraintResidual> residuals;
  bool mirror_supplied = false;

  int n() const noexcept { return base.n; }
  /// B(k) of the physical condition, constant for MixedND and Rotated.
  ComplexMatrix boundary(Complex k = Complex{1.0, 0.0}) const { return boundary_matrix(bc, k, base.n); }
};

struct AssembleOptions {
  double tolerance_computed = 1e-10;
  double tolerance_supplied = 1e-8;
};

/// Interleaves (k_j, C_j) with (-k_j*, C_j'). For N = 1 without user constants
/// C_1' comes from mirror_norming_constant; supplied constants are always
/// checked against the relations before acceptance.
HalfLineProblem assemble_halfline(const SpectralData& base, const BoundarySpec& bc,
                                  const std::optional<std::vector<ComplexRow>>& user_mirror = std::nullopt,
                                  const AssembleOptions& options = {});

}  // namespace vnls
