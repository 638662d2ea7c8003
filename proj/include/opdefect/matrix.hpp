#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>

#include "opdefect/errors.hpp"
#include "opdefect/tolerances.hpp"

namespace opdefect {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// max(1, x): turns an absolute tolerance into a relative one.
inline double rel_scale(double x) { return x < 1.0 ? 1.0 : x; }

/// Largest singular value.  Exact enough for tolerance scales; the
/// matrices in this library are small and dense.
inline double two_norm(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

inline bool all_finite(const Matrix& m) {
  return m.allFinite();
}

inline void require_square(const Matrix& m, const char* who) {
  if (m.rows() != m.cols())
    throw contract_violation(std::string(who) + ": matrix must be square");
}

inline void require_same_dim(const Matrix& a, const Matrix& b,
                             const char* who) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw contract_violation(std::string(who) + ": dimension mismatch");
}

/// Hermitian distance ||M - M*||_F relative to max(1, ||M||_F).
inline double hermitian_defect_norm(const Matrix& m) {
  return (m - m.adjoint()).norm() / rel_scale(m.norm());
}

/// A square matrix certified Hermitian.  The constructor verifies the
/// invariant and stores the exact symmetrization (M + M*)/2, so code
/// holding a HermitianMatrix may rely on mat() == mat().adjoint() up to
/// roundoff in the addition.
class HermitianMatrix {
public:
  /// Accepts M with ||M - M*||_F <= tol * max(1, ||M||_F), tol defaulting
  /// to the global Hermitian tolerance.  Throws contract_violation.
  explicit HermitianMatrix(const Matrix& m, double tol = tolerances().herm)
      : m_(0, 0) {
    require_square(m, "HermitianMatrix");
    if (!all_finite(m))
      throw contract_violation("HermitianMatrix: non-finite entry");
    if (hermitian_defect_norm(m) > tol)
      throw contract_violation("HermitianMatrix: input is not Hermitian");
    m_ = 0.5 * (m + m.adjoint());
  }

  const Matrix& mat() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

private:
  Matrix m_;
};

/// Symmetrize a matrix that is Hermitian in exact arithmetic but may
/// carry roundoff skew.  The discarded skew part must stay below
/// skew_tol * max(1, ||M||_F); a larger skew means the value was not
/// Hermitian to begin with and is reported as a consistency failure.
inline HermitianMatrix hermitize_checked(const Matrix& m,
                                         double skew_tol = tolerances().skew) {
  require_square(m, "hermitize_checked");
  const double skew = hermitian_defect_norm(m);
  if (skew > skew_tol)
    throw consistency_error(
        "hermitize_checked: skew part " + std::to_string(skew) +
        " exceeds tolerance; value is not Hermitian");
  return HermitianMatrix(m, skew_tol);
}

}  // namespace opdefect
