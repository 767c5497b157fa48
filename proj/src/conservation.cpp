#include "vnls/conservation.hpp"

#include <algorithm>
#include <cmath>

#include "vnls/soliton_engine.hpp"

namespace vnls {

UniformGrid UniformGrid::from_points(std::span<const double> xs) {
  if (xs.size() < 2) throw Error(ErrorKind::InvalidInput, "grid needs at least two points");
  UniformGrid g;
  g.x0 = xs.front();
  g.count = static_cast<int>(xs.size());
  g.h = (xs.back() - xs.front()) / (g.count - 1);
  if (!(g.h > 0.0)) throw Error(ErrorKind::InvalidInput, "grid must be strictly increasing");
  for (int i = 0; i < g.count; ++i) {
    if (std::abs(xs[i] - g.at(i)) > 1e-9 * g.h * std::max(1, i)) {
      throw Error(ErrorKind::InvalidInput, "grid is not uniform at index " + std::to_string(i));
    }
  }
  return g;
}

ComplexMatrix differentiate(const ComplexMatrix& f, double h, DerivativeScheme scheme) {
  const Eigen::Index N = f.rows();
  ComplexMatrix d(N, f.cols());
  if (scheme == DerivativeScheme::Central2) {
    if (N < 3) throw Error(ErrorKind::InvalidInput, "second-order stencil needs at least 3 points");
    for (Eigen::Index i = 1; i + 1 < N; ++i) d.row(i) = (f.row(i + 1) - f.row(i - 1)) / (2.0 * h);
    d.row(0) = (-3.0 * f.row(0) + 4.0 * f.row(1) - f.row(2)) / (2.0 * h);
    d.row(N - 1) = (3.0 * f.row(N - 1) - 4.0 * f.row(N - 2) + f.row(N - 3)) / (2.0 * h);
    return d;
  }
  if (N < 5) throw Error(ErrorKind::InvalidInput, "fourth-order stencil needs at least 5 points");
  const double s = 12.0 * h;
  for (Eigen::Index i = 2; i + 2 < N; ++i) {
    d.row(i) = (f.row(i - 2) - 8.0 * f.row(i - 1) + 8.0 * f.row(i + 1) - f.row(i + 2)) / s;
  }
  d.row(0) = (-25.0 * f.row(0) + 48.0 * f.row(1) - 36.0 * f.row(2) + 16.0 * f.row(3) - 3.0 * f.row(4)) / s;
  d.row(1) = (-3.0 * f.row(0) - 10.0 * f.row(1) + 18.0 * f.row(2) - 6.0 * f.row(3) + f.row(4)) / s;
  const Eigen::Index e = N - 1;
  d.row(e) = (25.0 * f.row(e) - 48.0 * f.row(e - 1) + 36.0 * f.row(e - 2) - 16.0 * f.row(e - 3) +
              3.0 * f.row(e - 4)) / s;
  d.row(e - 1) = (3.0 * f.row(e) + 10.0 * f.row(e - 1) - 18.0 * f.row(e - 2) + 6.0 * f.row(e - 3) -
                  f.row(e - 4)) / s;
  return d;
}

Complex simpson(std::span<const Complex> f, double h) {
  const std::size_t m = f.size() < 2 ? 0 : f.size() - 1;  // interval count
  if (m == 0) return 0.0;
  if (m == 1) return 0.5 * h * (f[0] + f[1]);

  Complex total = 0.0;
  std::size_t simpson_end = m;
  if (m % 2 == 1) {
    simpson_end = m - 3;
    total += 3.0 * h / 8.0 * (f[m - 3] + 3.0 * f[m - 2] + 3.0 * f[m - 1] + f[m]);
  }
  if (simpson_end > 0) {
    Complex s = f[0] + f[simpson_end];
    for (std::size_t i = 1; i < simpson_end; ++i) s += (i % 2 ? 4.0 : 2.0) * f[i];
    total += h / 3.0 * s;
  }
  return total;
}

GammaCoefficients gamma_recursion(const UniformGrid& grid, const ComplexMatrix& samples, int lambda, int order,
                                  DerivativeScheme scheme) {
  if (order < 1 || order > 6) throw Error(ErrorKind::InvalidInput, "order must lie in 1..6");
  if (samples.rows() != grid.count) throw Error(ErrorKind::InvalidInput, "sample count does not match the grid");
  if (lambda != 1 && lambda != -1) throw Error(ErrorKind::InvalidInput, "lambda must be -1 or +1");

  GammaCoefficients out;
  out.order = order;
  out.gamma.reserve(order);
  out.gamma.push_back(-static_cast<double>(lambda) * samples.conjugate());

  // (Gamma_k R) per grid point, cached as the recursion grows.
  std::vector<ComplexVector> contracted;
  contracted.push_back(out.gamma[0].cwiseProduct(samples).rowwise().sum());

  for (int m = 1; m < order; ++m) {
    ComplexMatrix next = differentiate(out.gamma[m - 1], grid.h, scheme);
    for (int k = 1; k <= m - 1; ++k) {
      next += contracted[k - 1].asDiagonal() * out.gamma[m - k - 1];
    }
    out.gamma.push_back(std::move(next));
    contracted.push_back(out.gamma[m].cwiseProduct(samples).rowwise().sum());
  }
  return out;
}

std::vector<ChargeValue> charges(int max_order, const UniformGrid& grid, const ComplexMatrix& samples, int lambda,
                                 const ChargeOptions& options) {
  const GammaCoefficients g = gamma_recursion(grid, samples, lambda, max_order, options.scheme);
  const bool tail = samples.row(samples.rows() - 1).norm() > options.tail_tolerance;
  std::vector<ChargeValue> out;
  for (int p = 1; p <= max_order; ++p) {
    const ComplexVector density = g.gamma[p - 1].cwiseProduct(samples).rowwise().sum();
    out.push_back({simpson({density.data(), static_cast<std::size_t>(density.size())}, grid.h), tail});
  }
  return out;
}

ChargeValue charge(int p, const UniformGrid& grid, const ComplexMatrix& samples, int lambda,
                   const ChargeOptions& options) {
  return charges(p, grid, samples, lambda, options).back();
}

ChargeSeries charges_over_time(const HalfLineProblem& problem, std::span<const double> times,
                               std::span<const int> orders, const ChargeGrid& grid, const ChargeOptions& options) {
  if (grid.n_x < 5) throw Error(ErrorKind::InvalidInput, "charge grid needs at least 5 points");
  int max_order = 0;
  for (int p : orders) {
    if (p < 1 || p > 6) throw Error(ErrorKind::InvalidInput, "order must lie in 1..6");
    max_order = std::max(max_order, p);
  }

  const SpectralData& data = problem.assembled;
  ChargeSeries out;
  out.orders.assign(orders.begin(), orders.end());
  out.times.assign(times.begin(), times.end());
  out.n_x = grid.n_x;
  if (grid.x_max) {
    out.x_max = *grid.x_max;
  } else {
    double far = 0.0;
    for (double t : times) {
      for (std::size_t j = 0; j < data.size(); ++j) far = std::max(far, free_soliton_centre(data.poles[j], data.norming[j], t));
    }
    out.x_max = far + grid.widths_beyond_centre * std::max(soliton_width(data), 1.0);
  }
  if (!(out.x_max > 0.0)) throw Error(ErrorKind::InvalidInput, "x_max must be positive");

  const UniformGrid g{0.0, out.x_max / (grid.n_x - 1), grid.n_x};
  out.values = ComplexMatrix::Zero(static_cast<Eigen::Index>(times.size()), static_cast<Eigen::Index>(orders.size()));
  out.tail_flags.assign(times.size(), false);

  ComplexMatrix samples(grid.n_x, data.n);
  for (std::size_t it = 0; it < times.size(); ++it) {
    for (int i = 0; i < grid.n_x; ++i) samples.row(i) = reconstruct_field(g.at(i), times[it], data).transpose();
    if (max_order == 0) continue;
    const auto values = charges(max_order, g, samples, data.lambda, options);
    for (std::size_t o = 0; o < orders.size(); ++o) out.values(it, o) = values[orders[o] - 1].value;
    out.tail_flags[it] = values.front().tail_flag;
  }

  out.drift.assign(orders.size(), 0.0);
  out.relative_drift.assign(orders.size(), 0.0);
  for (std::size_t o = 0; o < orders.size(); ++o) {
    if (times.empty()) break;
    const Complex ref = out.values(0, o);
    double d = 0.0;
    for (std::size_t it = 0; it < times.size(); ++it) d = std::max(d, std::abs(out.values(it, o) - ref));
    out.drift[o] = d;
    out.relative_drift[o] = std::abs(ref) > 0.0 ? d / std::abs(ref) : d;
  }
  return out;
}

}  // namespace vnls
