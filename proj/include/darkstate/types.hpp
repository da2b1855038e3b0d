#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace darkstate {

using Cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using RVec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;

inline constexpr Cplx kI{0.0, 1.0};

// Error taxonomy: invalid inputs, runtime numerical breakdown, and
// requests that exceed configured resource limits.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw DomainError(what);
}

inline bool all_finite(const CMatrix& m) {
  return m.allFinite();
}

}  // namespace darkstate
