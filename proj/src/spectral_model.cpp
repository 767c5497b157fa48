#include "vnls/spectral_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vnls {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::SingularEvaluation: return "singular-evaluation";
    case ErrorKind::DomainWindow: return "domain-window";
    case ErrorKind::IllConditioned: return "ill-conditioned";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::ConstraintViolation: return "constraint-violation";
    case ErrorKind::NotApplicable: return "not-applicable";
    case ErrorKind::Horizon: return "horizon";
    case ErrorKind::PeakOnEdge: return "peak-on-edge";
  }
  return "unknown";
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i].subject << ": " << violations[i].rule;
  }
  return os.str();
}

namespace {

std::string indexed(const char* stem, std::size_t j) { return std::string(stem) + "_" + std::to_string(j + 1); }

// Relative coincidence threshold for pole comparisons.
constexpr double kPoleTol = 1e-12;

bool close(Complex a, Complex b) {
  return std::abs(a - b) <= kPoleTol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

ValidationReport validate_spectral(const SpectralData& data, PoleDomain domain) {
  ValidationReport rep;
  auto fail = [&](std::string subject, std::string rule) {
    rep.violations.push_back({std::move(subject), std::move(rule)});
  };

  if (data.lambda != -1 && data.lambda != 1) fail("lambda", "lambda must be -1 or +1");
  if (data.lambda == 1 && !data.poles.empty()) fail("lambda", "soliton data requires lambda = -1");
  if (data.n < 1) fail("n", "number of components must be positive");
  if (data.norming.size() != data.poles.size()) {
    fail("norming", "expected " + std::to_string(data.poles.size()) + " norming constants, got " +
                        std::to_string(data.norming.size()));
  }

  for (std::size_t j = 0; j < data.poles.size(); ++j) {
    const Complex k = data.poles[j];
    const std::string name = indexed("k", j);
    if (!is_finite(k)) {
      fail(name, "pole is not finite");
      continue;
    }
    if (k.imag() <= 0.0) fail(name, "Im " + name + " <= 0");
    if (domain == PoleDomain::FirstQuadrant) {
      if (k.real() < 0.0) fail(name, "Re " + name + " < 0");
      else if (k.real() == 0.0) rep.warnings.push_back(name + " lies on the imaginary axis");
    }
    for (std::size_t i = 0; i < j; ++i) {
      const Complex q = data.poles[i];
      if (close(k, q)) fail(name, "coincides with " + indexed("k", i));
      if (domain == PoleDomain::FirstQuadrant && close(k, -std::conj(q))) fail(name, "equals -conj(" + indexed("k", i) + ")");
    }
  }

  for (std::size_t j = 0; j < data.norming.size(); ++j) {
    const ComplexRow& c = data.norming[j];
    const std::string name = indexed("C", j);
    if (c.size() != data.n) {
      fail(name, "has " + std::to_string(c.size()) + " entries, expected " + std::to_string(data.n));
      continue;
    }
    if (!all_finite(c)) fail(name, "entries are not finite");
    else if (!(c.norm() > 0.0)) fail(name, "norm must be positive");
  }
  return rep;
}

BoundarySpec BoundarySpec::robin(double alpha) {
  BoundarySpec bc;
  bc.kind = BoundaryKind::Robin;
  bc.alpha = alpha;
  return bc;
}

BoundarySpec BoundarySpec::mixed(std::vector<int> signs) {
  BoundarySpec bc;
  bc.kind = BoundaryKind::MixedND;
  bc.signs = std::move(signs);
  return bc;
}

BoundarySpec BoundarySpec::rotated(std::vector<int> signs, RotationAngles angles) {
  BoundarySpec bc;
  bc.kind = BoundaryKind::Rotated;
  bc.signs = std::move(signs);
  bc.angles = angles;
  return bc;
}

ValidationReport validate_boundary(const BoundarySpec& bc, int n) {
  ValidationReport rep;
  auto fail = [&](std::string rule) { rep.violations.push_back({"boundary", std::move(rule)}); };
  switch (bc.kind) {
    case BoundaryKind::Robin:
      if (!std::isfinite(bc.alpha)) fail("alpha must be finite");
      break;
    case BoundaryKind::Rotated:
      if (n != 2) fail("rotated boundary is defined for n = 2 only");
      if (!std::isfinite(bc.angles.theta) || !std::isfinite(bc.angles.zeta) ||
          !std::isfinite(bc.angles.xi)) {
        fail("angles must be finite");
      }
      [[fallthrough]];
    case BoundaryKind::MixedND:
      if (static_cast<int>(bc.signs.size()) != n) {
        fail("expected " + std::to_string(n) + " signs, got " + std::to_string(bc.signs.size()));
      }
      for (int s : bc.signs) {
        if (s != 1 && s != -1) {
          fail("signs must be +1 or -1");
          break;
        }
      }
      break;
  }
  return rep;
}

std::vector<int> canonical_signs(std::vector<int> signs) {
  std::stable_sort(signs.begin(), signs.end(), [](int a, int b) { return a > b; });
  return signs;
}

ComplexMatrix unitary_from_angles(double theta, double zeta, double xi) {
  const double c = std::cos(theta), s = std::sin(theta);
  ComplexMatrix v(2, 2);
  v(0, 0) = c * std::polar(1.0, zeta);
  v(0, 1) = s * std::polar(1.0, xi);
  v(1, 0) = -s * std::polar(1.0, -xi);
  v(1, 1) = c * std::polar(1.0, -zeta);
  return v;
}

ComplexMatrix boundary_matrix(const BoundarySpec& bc, Complex k, int n) {
  const ValidationReport rep = validate_boundary(bc, n);
  if (!rep.ok()) throw Error(ErrorKind::InvalidInput, rep.summary());

  switch (bc.kind) {
    case BoundaryKind::Robin: {
      const Complex den = k + kI * bc.alpha;
      if (den == Complex{0.0, 0.0}) {
        throw Error(ErrorKind::SingularEvaluation, "Robin boundary matrix has a pole at k = -i*alpha");
      }
      const Complex factor = (k - kI * bc.alpha) / den;
      return factor * ComplexMatrix::Identity(n, n);
    }
    case BoundaryKind::MixedND: {
      ComplexMatrix b = ComplexMatrix::Zero(n, n);
      for (int j = 0; j < n; ++j) b(j, j) = static_cast<double>(bc.signs[j]);
      return b;
    }
    case BoundaryKind::Rotated: {
      const ComplexMatrix v = unitary_from_angles(bc.angles.theta, bc.angles.zeta, bc.angles.xi);
      ComplexMatrix d = ComplexMatrix::Zero(2, 2);
      d(0, 0) = static_cast<double>(bc.signs[0]);
      d(1, 1) = static_cast<double>(bc.signs[1]);
      // V is unitary, so V^{-1} = V^dagger.
      return v * d * v.adjoint();
    }
  }
  throw Error(ErrorKind::InvalidInput, "unknown boundary kind");
}

}  // namespace vnls
