#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace vnls {

using Complex = std::complex<double>;

/// Dense complex matrix. Houses B(k), unitary rotations, projectors and mu blocks.
using ComplexMatrix = Eigen::MatrixXcd;

/// Column vector of field components R(x,t).
using ComplexVector = Eigen::VectorXcd;

/// Row vector; norming constants are rows (1 x n).
using ComplexRow = Eigen::RowVectorXcd;

inline constexpr Complex kI{0.0, 1.0};

enum class ErrorKind {
  InvalidInput,
  SingularEvaluation,
  DomainWindow,
  IllConditioned,
  Unsupported,
  ConstraintViolation,
  NotApplicable,
  Horizon,
  PeakOnEdge,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (!is_finite(m.derived().coeff(i))) return false;
  }
  return true;
}

/// Largest entry modulus, the max-norm used for all matrix residuals.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace vnls
