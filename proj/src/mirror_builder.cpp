#include "vnls/mirror_builder.hpp"

#include <cmath>
#include <sstream>

#include "linalg.hpp"

namespace vnls {

ComplexMatrix rank_one_projector(const ComplexRow& c) {
  const double norm2 = c.squaredNorm();
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
    throw Error(ErrorKind::InvalidInput, "projector needs a nonzero finite vector");
  }
  return c.adjoint() * c / norm2;
}

namespace {

Complex dressing_scalar(Complex pole, Complex k) {
  const Complex den = k - std::conj(pole);
  if (den == Complex{0.0, 0.0}) {
    throw Error(ErrorKind::SingularEvaluation, "dressing factor evaluated at the conjugate of its pole");
  }
  return (k - pole) / den;
}

}  // namespace

ComplexMatrix dressing_factor_eval(const DressingFactor& df, Complex k) {
  const Eigen::Index n = df.projector.rows();
  return ComplexMatrix::Identity(n, n) + (dressing_scalar(df.pole, k) - 1.0) * df.projector;
}

Complex alpha_prime(Complex k1) {
  const Complex gap = k1 - std::conj(k1);
  if (k1.imag() == 0.0 || k1 == Complex{0.0, 0.0}) {
    throw Error(ErrorKind::SingularEvaluation, "alpha' needs a pole off the real axis");
  }
  return (k1 + std::conj(k1)) / (2.0 * std::conj(k1) * gap);
}

ComplexMatrix reflected_boundary_matrix(const BoundarySpec& bc, Complex k, int n) {
  return boundary_matrix(bc, -k, n);
}

namespace {

void require_focusing(int lambda) {
  if (lambda != -1) {
    throw Error(ErrorKind::Unsupported, "mirror constants are only defined for lambda = -1");
  }
}

void require_nondegenerate(Complex k1) {
  if (!(k1.imag() > 0.0)) throw Error(ErrorKind::InvalidInput, "pole must lie in the upper half plane");
  if (!(k1.real() > 0.0)) {
    throw Error(ErrorKind::InvalidInput,
                "degenerate pole: Re k = 0 makes k and -conj(k) coincide");
  }
}

void require_robin_clear(const BoundarySpec& bc, Complex k1) {
  if (bc.kind != BoundaryKind::Robin) return;
  const Complex mirror = -std::conj(k1);
  const Complex ia = kI * bc.alpha;
  if (std::abs(mirror - ia) < 1e-14 || std::abs(mirror + ia) < 1e-14) {
    throw Error(ErrorKind::SingularEvaluation, "mirror pole collides with the Robin pole +-i*alpha");
  }
}

// (kappa_i - kappa_i*)^{-1} prod_{j != i} (kappa_i - kappa_j)/(kappa_i - kappa_j*)
Complex alpha_prime_general(const std::vector<Complex>& poles, std::size_t i) {
  const Complex k = poles[i];
  Complex a = 1.0 / (k - std::conj(k));
  for (std::size_t j = 0; j < poles.size(); ++j) {
    if (j != i) a *= dressing_scalar(poles[j], k);
  }
  return a;
}

// A(kappa_i)^t / alpha'(kappa_i) = (kappa_i - kappa_i*) D_J^{-1}..D_{i+1}^{-1} Pi_i D_{i-1}^{-1}..D_1^{-1}
ComplexMatrix cofactor_over_alpha(const std::vector<DressingFactor>& chain, std::size_t i) {
  const Complex k = chain[i].pole;
  const Eigen::Index n = chain[i].projector.rows();
  ComplexMatrix left = ComplexMatrix::Identity(n, n);
  for (std::size_t j = chain.size(); j-- > i + 1;) {
    left = left * detail::checked_inverse(dressing_factor_eval(chain[j], k), "dressing factor");
  }
  ComplexMatrix right = ComplexMatrix::Identity(n, n);
  for (std::size_t j = i; j-- > 0;) {
    right = right * detail::checked_inverse(dressing_factor_eval(chain[j], k), "dressing factor");
  }
  return (k - std::conj(k)) * left * chain[i].projector * right;
}

}  // namespace

std::vector<DressingFactor> dressing_chain(const std::vector<Complex>& poles,
                                           const std::vector<ComplexRow>& norming) {
  if (poles.size() != norming.size()) {
    throw Error(ErrorKind::InvalidInput, "pole and norming lists differ in length");
  }
  std::vector<DressingFactor> chain;
  chain.reserve(poles.size());
  for (std::size_t j = 0; j < poles.size(); ++j) {
    ComplexRow row = norming[j];
    for (std::size_t i = 0; i < j; ++i) row = row * dressing_factor_eval(chain[i], poles[j]);
    chain.push_back({poles[j], rank_one_projector(row)});
  }
  return chain;
}

std::vector<ConstraintResidual> verify_all_constraints(const SpectralData& assembled,
                                                       const BoundarySpec& bc) {
  require_focusing(assembled.lambda);
  if (assembled.size() % 2 != 0) {
    throw Error(ErrorKind::InvalidInput, "assembled data must hold (k_j, -conj(k_j)) pairs");
  }
  const int n = assembled.n;
  const auto chain = dressing_chain(assembled.poles, assembled.norming);
  const double lam = assembled.lambda;

  std::vector<ConstraintResidual> out;
  for (std::size_t a = 0; a < assembled.size(); a += 2) {
    const std::size_t b = a + 1;
    const Complex k = assembled.poles[a];
    const ComplexRow& c = assembled.norming[a];
    const ComplexRow& cp = assembled.norming[b];

    const Complex alpha_a = alpha_prime_general(assembled.poles, a);
    const Complex alpha_b = alpha_prime_general(assembled.poles, b);
    const ComplexMatrix rhs_a =
        reflected_boundary_matrix(bc, -k, n) * cofactor_over_alpha(chain, a) / alpha_a;
    const ComplexMatrix rhs_b =
        reflected_boundary_matrix(bc, std::conj(k), n) * cofactor_over_alpha(chain, b) / alpha_b;

    ConstraintResidual r;
    r.direct = max_abs(ComplexMatrix(lam * cp.adjoint() * c - rhs_a));
    r.mirror = max_abs(ComplexMatrix(lam * c.adjoint() * cp - rhs_b));
    out.push_back(r);
  }
  return out;
}

ConstraintResidual verify_constraints(Complex k1, const ComplexRow& c1, const ComplexRow& c1_prime,
                                      const BoundarySpec& bc, int lambda) {
  require_focusing(lambda);
  if (c1.size() != c1_prime.size()) {
    throw Error(ErrorKind::InvalidInput, "C_1 and C_1' differ in length");
  }
  SpectralData pair;
  pair.lambda = lambda;
  pair.n = static_cast<int>(c1.size());
  pair.poles = {k1, -std::conj(k1)};
  pair.norming = {c1, c1_prime};
  return verify_all_constraints(pair, bc).front();
}

MirrorConstantDetail mirror_norming_constant_detail(Complex k1, const ComplexRow& c1,
                                                    const BoundarySpec& bc, int lambda) {
  require_focusing(lambda);
  const int n = static_cast<int>(c1.size());
  SpectralData single{lambda, n, {k1}, {c1}};
  const ValidationReport rep = validate_spectral(single);
  if (!rep.ok()) throw Error(ErrorKind::InvalidInput, rep.summary());
  require_nondegenerate(k1);
  require_robin_clear(bc, k1);

  const Complex k2 = -std::conj(k1);
  const DressingFactor d1{k1, rank_one_projector(c1)};
  const Complex ap = alpha_prime(k1);

  const ComplexVector v1_dag = -(ap / (k1 - std::conj(k1))) * reflected_boundary_matrix(bc, k2, n) *
                               c1.adjoint();
  MirrorConstantDetail out;
  out.v1 = v1_dag.adjoint();
  const Complex vv = out.v1.dot(out.v1);  // conjugates the left operand: V_1 V_1^dagger
  out.v1_norm2 = vv.real();
  if (!(out.v1_norm2 > 0.0)) {
    throw Error(ErrorKind::SingularEvaluation, "V_1 vanishes; no mirror constant exists");
  }
  out.c1_prime = (out.v1 / out.v1_norm2) *
                 detail::checked_inverse(dressing_factor_eval(d1, k2), "D_1(-conj(k_1))");
  if (!all_finite(out.c1_prime)) throw Error(ErrorKind::SingularEvaluation, "mirror constant is not finite");
  return out;
}

ComplexRow mirror_norming_constant(Complex k1, const ComplexRow& c1, const BoundarySpec& bc, int lambda) {
  return mirror_norming_constant_detail(k1, c1, bc, lambda).c1_prime;
}

HalfLineProblem assemble_halfline(const SpectralData& base, const BoundarySpec& bc,
                                  const std::optional<std::vector<ComplexRow>>& user_mirror,
                                  const AssembleOptions& options) {
  const ValidationReport rep = validate_spectral(base);
  if (!rep.ok()) throw Error(ErrorKind::InvalidInput, rep.summary());
  const ValidationReport brep = validate_boundary(bc, base.n);
  if (!brep.ok()) throw Error(ErrorKind::InvalidInput, brep.summary());

  HalfLineProblem p;
  p.base = base;
  p.bc = bc;
  p.assembled.lambda = base.lambda;
  p.assembled.n = base.n;
  if (base.empty()) return p;

  require_focusing(base.lambda);
  for (Complex k : base.poles) {
    require_nondegenerate(k);
    require_robin_clear(bc, k);
  }

  const std::size_t N = base.size();
  double tolerance = options.tolerance_computed;
  if (user_mirror) {
    if (user_mirror->size() != N) {
      throw Error(ErrorKind::InvalidInput, "expected " + std::to_string(N) + " mirror constants, got " +
                                               std::to_string(user_mirror->size()));
    }
    for (const ComplexRow& c : *user_mirror) {
      if (c.size() != base.n || !all_finite(c)) {
        throw Error(ErrorKind::InvalidInput, "mirror constant has the wrong length or non-finite entries");
      }
    }
    p.mirror_norming = *user_mirror;
    p.mirror_supplied = true;
    tolerance = options.tolerance_supplied;
  } else if (N == 1) {
    p.mirror_norming = {mirror_norming_constant(base.poles[0], base.norming[0], bc, base.lambda)};
  } else {
    throw Error(ErrorKind::Unsupported,
                "no solver for mirror constants with N > 1; supply them explicitly for verification");
  }

  for (std::size_t j = 0; j < N; ++j) {
    p.assembled.poles.push_back(base.poles[j]);
    p.assembled.poles.push_back(-std::conj(base.poles[j]));
    p.assembled.norming.push_back(base.norming[j]);
    p.assembled.norming.push_back(p.mirror_norming[j]);
  }
  const ValidationReport arep = validate_spectral(p.assembled, PoleDomain::UpperHalfPlane);
  if (!arep.ok()) throw Error(ErrorKind::InvalidInput, "assembled data: " + arep.summary());

  p.residuals = verify_all_constraints(p.assembled, bc);
  std::ostringstream bad;
  for (std::size_t j = 0; j < N; ++j) {
    if (!(p.residuals[j].worst() < tolerance)) {
      bad << " pair " << j + 1 << ": r=" << p.residuals[j].direct << " r'=" << p.residuals[j].mirror;
    }
  }
  if (!bad.str().empty()) {
    throw Error(ErrorKind::ConstraintViolation,
                "norming-constant relations violated (tolerance " + std::to_string(tolerance) + "):" + bad.str());
  }
  return p;
}

}  // namespace vnls
