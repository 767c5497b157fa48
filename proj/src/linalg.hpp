#pragma once

#include <sstream>
#include <string>

#include "vnls/types.hpp"

namespace vnls::detail {

// Reciprocal condition estimate below which a dense solve is refused.
inline constexpr double kMinRcond = 1e-12;

inline Eigen::PartialPivLU<ComplexMatrix> checked_lu(const ComplexMatrix& m, const char* what,
                                                     double min_rcond = kMinRcond) {
  if (!all_finite(m)) throw Error(ErrorKind::SingularEvaluation, std::string(what) + " has non-finite entries");
  Eigen::PartialPivLU<ComplexMatrix> lu(m);
  const double rc = lu.rcond();
  if (!(rc > min_rcond)) {
    std::ostringstream os;
    os << what << " is ill-conditioned (rcond estimate " << rc << ")";
    throw Error(ErrorKind::IllConditioned, os.str());
  }
  return lu;
}

inline ComplexMatrix checked_inverse(const ComplexMatrix& m, const char* what) {
  return checked_lu(m, what).inverse();
}

}  // namespace vnls::detail
