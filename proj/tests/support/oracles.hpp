#pragma once

// Reference values computed without the engine: closed-form one-soliton
// profiles and a fixed-point generator for N = 2 mirror constants.

#include <cmath>
#include <vector>

#include "vnls/mirror_builder.hpp"
#include "vnls/soliton_engine.hpp"

namespace oracle {

using vnls::Complex;
using vnls::ComplexRow;
using vnls::ComplexVector;

inline constexpr double kPi = 3.14159265358979323846;

// One pole k = xi + i eta on the line, lambda = -1:
//   R = -2i C^dagger e^{-2i k* x - 4i k*^2 t} / (1 + |C|^2 e^{-4 eta (x + 4 xi t)} / (4 eta^2))
inline ComplexVector line_soliton(Complex k, const ComplexRow& c, double x, double t) {
  const double eta = k.imag(), xi = k.real();
  const Complex kc = std::conj(k);
  const Complex carrier = std::exp(-2.0 * vnls::kI * kc * x - 4.0 * vnls::kI * kc * kc * t);
  const double den = 1.0 + c.squaredNorm() * std::exp(-4.0 * eta * (x + 4.0 * xi * t)) / (4.0 * eta * eta);
  return Complex{0.0, -2.0} * carrier / den * c.adjoint();
}

// |R| = 2 eta sech(2 eta (x - x0(t))), x0 = -4 xi t + ln(|C|^2 / (4 eta^2)) / (4 eta).
inline double line_soliton_modulus(Complex k, double c_norm, double x, double t) {
  const double eta = k.imag();
  const double x0 = -4.0 * k.real() * t + std::log(c_norm * c_norm / (4.0 * eta * eta)) / (4.0 * eta);
  return 2.0 * eta / std::cosh(2.0 * eta * (x - x0));
}

inline vnls::SpectralData line_data(Complex k, ComplexRow c) {
  return vnls::SpectralData{-1, static_cast<int>(c.size()), {k}, {std::move(c)}};
}

inline ComplexRow row(std::initializer_list<Complex> v) {
  ComplexRow r(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (Complex z : v) r(i++) = z;
  return r;
}

// Mirror constants for N poles by sweeping the pairs until the constants stop
// moving. Each sweep reorders the dressing product so the mirror pole of the
// pair comes last, where its constraint has the single-pair closed form.
inline std::vector<ComplexRow> generate_mirror_constants(const vnls::SpectralData& base, const vnls::BoundarySpec& bc,
                                                         int max_sweeps = 1000) {
  const int n = base.n;
  const std::size_t N = base.size();
  std::vector<Complex> kaps;
  for (Complex k : base.poles) {
    kaps.push_back(k);
    kaps.push_back(-std::conj(k));
  }
  std::vector<ComplexRow> mirror(N, ComplexRow::Constant(n, Complex{0.1, 0.0}));

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double moved = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      const std::size_t b = 2 * j + 1;
      std::vector<Complex> poles;
      std::vector<ComplexRow> consts;
      for (std::size_t i = 0; i < 2 * N; ++i) {
        if (i == b) continue;
        poles.push_back(kaps[i]);
        consts.push_back(i % 2 ? mirror[i / 2] : base.norming[i / 2]);
      }
      const auto chain = vnls::dressing_chain(poles, consts);
      const Complex kb = kaps[b];
      vnls::ComplexMatrix m = vnls::ComplexMatrix::Identity(n, n);
      for (const auto& df : chain) m = m * vnls::dressing_factor_eval(df, kb);

      Complex ap = 1.0 / (kb - std::conj(kb));
      for (std::size_t i = 0; i < 2 * N; ++i) {
        if (i != b) ap *= (kb - kaps[i]) / (kb - std::conj(kaps[i]));
      }
      const vnls::ComplexMatrix bm = vnls::reflected_boundary_matrix(bc, std::conj(base.poles[j]), n);
      const ComplexVector u_dag = (-1.0 * ap / (kb - std::conj(kb))) * bm.inverse() * base.norming[j].adjoint();
      const ComplexRow u = u_dag.adjoint();
      const ComplexRow next = (u / u.squaredNorm()) * m.inverse();
      moved = std::max(moved, (next - mirror[j]).cwiseAbs().maxCoeff());
      mirror[j] = next;
    }
    if (moved < 1e-15) break;
  }
  return mirror;
}

}  // namespace oracle
