#include "vnls/soliton_engine.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "linalg.hpp"

namespace vnls {

Complex phase(double x, double t, Complex k) { return k * x + 2.0 * k * k * t; }

namespace {

void require_valid(const SpectralData& data) {
  const ValidationReport rep = validate_spectral(data, PoleDomain::UpperHalfPlane);
  if (!rep.ok()) throw Error(ErrorKind::InvalidInput, rep.summary());
}

void guard(Complex exponent, double limit) {
  if (exponent.real() > limit) {
    std::ostringstream os;
    os << "exponent real part " << exponent.real() << " exceeds the window guard " << limit;
    throw Error(ErrorKind::DomainWindow, os.str());
  }
}

}  // namespace

ComplexMatrix mu_matrix(double x, double t, const SpectralData& data, const EngineOptions& options) {
  require_valid(data);
  const std::size_t J = data.size();
  const Eigen::Index n = data.n;
  ComplexMatrix mu = ComplexMatrix::Identity(J * n, J * n);
  const double lam = data.lambda;

  for (std::size_t m = 0; m < J; ++m) {
    const Complex km = std::conj(data.poles[m]);
    for (std::size_t j = 0; j < J; ++j) {
      const Complex kj = data.poles[j];
      const Complex ex = 2.0 * kI * (kj - km) * x + 4.0 * kI * (kj * kj - km * km) * t;
      guard(ex, options.exponent_guard);
      // C_m^dagger C_j is the n x n outer product.
      const ComplexMatrix outer = data.norming[m].adjoint() * data.norming[j];
      const Complex e = std::exp(ex) / (kj - km);
      for (std::size_t l = 0; l < J; ++l) {
        const Complex w = e / (std::conj(data.poles[l]) - kj);
        mu.block(m * n, l * n, n, n) -= lam * w * outer;
      }
    }
  }
  return mu;
}

ComplexVector mu_rhs(double x, double t, const SpectralData& data, const EngineOptions& options) {
  require_valid(data);
  const Eigen::Index n = data.n;
  ComplexVector rhs(data.size() * n);
  for (std::size_t j = 0; j < data.size(); ++j) {
    const Complex kc = std::conj(data.poles[j]);
    const Complex ex = -2.0 * kI * kc * x - 4.0 * kI * kc * kc * t;
    guard(ex, options.exponent_guard);
    rhs.segment(j * n, n) = data.norming[j].adjoint() * std::exp(ex);
  }
  return rhs;
}

ComplexVector reconstruct_field(double x, double t, const SpectralData& data, const EngineOptions& options) {
  require_valid(data);
  const Eigen::Index n = data.n;
  const Eigen::Index J = static_cast<Eigen::Index>(data.size());
  if (J == 0) return ComplexVector::Zero(n);
  const double lam = data.lambda;

  // rho_j = 2i k_j x + 4i k_j^2 t, e_j = exp(rho_j), f_j = conj(e_j).
  // Unknowns z_m (first block) and w_j (second block):
  //   z_m / f_m - lambda sum_j w_j / (k_j - k_m*) = 1
  //   w_j - e_j sum_p (C_j C_p^dagger) z_p / (k_p* - k_j) = 0
  // Each row is multiplied by whichever of e, 1/e keeps every entry bounded by one.
  std::vector<Complex> rho(J);
  for (Eigen::Index j = 0; j < J; ++j) {
    const Complex k = data.poles[j];
    rho[j] = 2.0 * kI * k * x + 4.0 * kI * k * k * t;
  }

  ComplexMatrix a = ComplexMatrix::Zero(2 * J, 2 * J);
  ComplexVector b = ComplexVector::Zero(2 * J);
  for (Eigen::Index m = 0; m < J; ++m) {
    const bool decaying = rho[m].real() < 0.0;
    const Complex scale = decaying ? std::exp(std::conj(rho[m])) : Complex{1.0, 0.0};
    a(m, m) = decaying ? Complex{1.0, 0.0} : std::exp(-std::conj(rho[m]));
    const Complex km = std::conj(data.poles[m]);
    for (Eigen::Index j = 0; j < J; ++j) a(m, J + j) = -lam * scale / (data.poles[j] - km);
    b(m) = scale;
  }
  for (Eigen::Index j = 0; j < J; ++j) {
    const bool decaying = rho[j].real() < 0.0;
    const Complex scale = decaying ? std::exp(rho[j]) : Complex{1.0, 0.0};
    a(J + j, J + j) = decaying ? Complex{1.0, 0.0} : std::exp(-rho[j]);
    const Complex kj = data.poles[j];
    for (Eigen::Index p = 0; p < J; ++p) {
      const Complex gram = data.norming[p].dot(data.norming[j]);  // C_j C_p^dagger
      a(J + j, p) = -scale * gram / (std::conj(data.poles[p]) - kj);
    }
  }

  // Row then column equilibration; large norming constants otherwise make the
  // condition estimate reflect the scaling rather than the problem.
  Eigen::VectorXd dr(2 * J), dc(2 * J);
  for (Eigen::Index i = 0; i < 2 * J; ++i) {
    const double m = a.row(i).cwiseAbs().maxCoeff();
    dr(i) = m > 0.0 ? 1.0 / m : 1.0;
  }
  a = dr.asDiagonal() * a;
  for (Eigen::Index i = 0; i < 2 * J; ++i) {
    const double m = a.col(i).cwiseAbs().maxCoeff();
    dc(i) = m > 0.0 ? 1.0 / m : 1.0;
  }
  a = a * dc.asDiagonal();
  const auto lu = detail::checked_lu(a, "reconstruction system", options.min_rcond);
  const ComplexVector z = dc.asDiagonal() * lu.solve(dr.asDiagonal() * b);

  ComplexVector r = ComplexVector::Zero(n);
  for (Eigen::Index p = 0; p < J; ++p) r += data.norming[p].adjoint() * z(p);
  r *= 2.0 * kI * lam;
  if (!all_finite(r)) throw Error(ErrorKind::SingularEvaluation, "reconstructed field is not finite");
  return r;
}

std::vector<double> Axis::values() const {
  std::vector<double> v(count > 0 ? count : 0);
  for (int i = 0; i < count; ++i) v[i] = at(i);
  return v;
}

void validate_axes(const GridAxes& axes) {
  for (const auto& [name, ax] : {std::pair{"x", axes.x}, std::pair{"t", axes.t}}) {
    if (ax.count < 1) throw Error(ErrorKind::InvalidInput, std::string(name) + " axis needs at least one point");
    if (!std::isfinite(ax.min) || !std::isfinite(ax.max)) {
      throw Error(ErrorKind::InvalidInput, std::string(name) + " axis bounds must be finite");
    }
    if (ax.count > 1 && !(ax.max > ax.min)) {
      throw Error(ErrorKind::InvalidInput, std::string(name) + " axis must be strictly increasing");
    }
  }
}

FieldGrid field_grid(const SpectralData& data, const GridAxes& axes, const EngineOptions& options,
                     unsigned threads) {
  validate_axes(axes);
  require_valid(data);
  FieldGrid grid;
  grid.axes = axes;
  grid.n = data.n;
  const std::size_t nx = axes.x.count, total = nx * static_cast<std::size_t>(axes.t.count);
  grid.samples.resize(total);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(total, 1)));

  // Each worker owns a contiguous range; the first failing index wins so the
  // reported error does not depend on scheduling.
  std::vector<std::size_t> fail_index(threads, total);
  std::vector<std::exception_ptr> fail(threads);
  auto work = [&](unsigned w) {
    const std::size_t lo = total * w / threads, hi = total * (w + 1) / threads;
    for (std::size_t i = lo; i < hi; ++i) {
      FieldSample& s = grid.samples[i];
      s.t = axes.t.at(static_cast<int>(i / nx));
      s.x = axes.x.at(static_cast<int>(i % nx));
      try {
        s.R = reconstruct_field(s.x, s.t, data, options);
      } catch (...) {
        fail_index[w] = i;
        fail[w] = std::current_exception();
        return;
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  for (unsigned w = 0; w < threads; ++w) {
    if (!fail[w]) continue;
    const FieldSample& s = grid.samples[fail_index[w]];
    try {
      std::rethrow_exception(fail[w]);
    } catch (const Error& e) {
      std::ostringstream os;
      os << e.what() << " at (x, t) = (" << s.x << ", " << s.t << ")";
      throw Error(e.kind(), os.str());
    }
  }
  return grid;
}

double soliton_width(const SpectralData& data) {
  if (data.empty()) return 0.0;
  double eta = std::numeric_limits<double>::infinity();
  for (Complex k : data.poles) eta = std::min(eta, k.imag());
  return 1.0 / (2.0 * eta);
}

double free_soliton_centre(Complex k, const ComplexRow& c, double t) {
  const double eta = k.imag();
  return -4.0 * k.real() * t + std::log(c.squaredNorm() / (4.0 * eta * eta)) / (4.0 * eta);
}

PeakReport peak_scan(const SpectralData& data, double t, double x_lo, double x_hi,
                     const PeakScanOptions& options, const EngineOptions& engine) {
  if (!(x_hi > x_lo)) throw Error(ErrorKind::InvalidInput, "peak window must have x_hi > x_lo");
  require_valid(data);
  PeakReport rep;
  rep.amplitudes.assign(data.n, 0.0);
  if (data.empty()) return rep;

  const double width = soliton_width(data);
  const double step = options.spacing > 0.0 ? options.spacing : width / 20.0;
  const int count = static_cast<int>(std::ceil((x_hi - x_lo) / step)) + 1;
  const double h = (x_hi - x_lo) / (count - 1);

  auto power = [&](double x) { return reconstruct_field(x, t, data, engine).squaredNorm(); };

  int best = 0;
  double best_power = -1.0;
  for (int i = 0; i < count; ++i) {
    const double p = power(x_lo + h * i);
    if (p > best_power) {
      best_power = p;
      best = i;
    }
  }
  if (best_power == 0.0) return rep;
  if (best == 0 || best == count - 1) {
    std::ostringstream os;
    os << "field maximum lies on the window edge x = " << (x_lo + h * best);
    throw Error(ErrorKind::PeakOnEdge, os.str());
  }

  double xc = x_lo + h * best;
  double fc = best_power;
  for (double s = h; s > options.refine_fraction * width; s /= 4.0) {
    const double fm = power(xc - s), fp = power(xc + s);
    const double curv = fm - 2.0 * fc + fp;
    if (!(curv < 0.0)) break;
    const double shift = std::clamp(0.5 * s * (fm - fp) / curv, -s, s);
    xc += shift;
    fc = power(xc);
  }

  const ComplexVector r = reconstruct_field(xc, t, data, engine);
  rep.x_peak = xc;
  for (Eigen::Index j = 0; j < r.size(); ++j) rep.amplitudes[j] = std::abs(r(j));
  rep.total = r.norm();
  return rep;
}

}  // namespace vnls
