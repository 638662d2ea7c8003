#pragma once

#include <optional>

#include "opdefect/matrix.hpp"

namespace opdefect {

/// Eigensystem of a Hermitian matrix: real eigenvalues in ascending
/// order and a unitary matrix of eigenvectors (columns).
struct HermitianEig {
  RealVector eigenvalues;
  Matrix eigenvectors;
};

inline HermitianEig hermitian_eig(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.mat());
  if (es.info() != Eigen::Success)
    throw consistency_error("hermitian_eig: eigensolver did not converge");
  return HermitianEig{es.eigenvalues(), es.eigenvectors()};
}

/// Outcome of a positive-semidefiniteness test.  `scale` is
/// max(1, ||M||_2); the verdict is min_eig >= -psd_tol * scale, so it is
/// stable under rescaling of M.  `min_eig` is exactly the least value
/// hermitian_eig would report.
struct PsdVerdict {
  bool is_psd;
  double min_eig;
  double scale;
};

inline PsdVerdict psd_check(const HermitianMatrix& m,
                            double psd_tol = tolerances().psd) {
  if (m.dim() == 0) return PsdVerdict{true, 0.0, 1.0};
  const HermitianEig eig = hermitian_eig(m);
  const double lo = eig.eigenvalues(0);
  const double hi = eig.eigenvalues(eig.eigenvalues.size() - 1);
  const double scale = rel_scale(std::max(std::abs(lo), std::abs(hi)));
  return PsdVerdict{lo >= -psd_tol * scale, lo, scale};
}

/// True when M is positive definite with margin: min_eig >= +psd_tol*scale.
/// This is the acceptance test for metrics.
inline bool is_positive_invertible(const HermitianMatrix& m,
                                   double psd_tol = tolerances().psd) {
  if (m.dim() == 0) return false;
  const PsdVerdict v = psd_check(m, psd_tol);
  return v.min_eig >= psd_tol * v.scale;
}

/// Hermitian square root of a PSD matrix.  Eigenvalues in
/// [-psd_tol*scale, 0) are clamped to zero; anything lower is a domain
/// error.  The result R satisfies ||R*R - M||_F <= 1e-10 * max(1, ||M||_F)
/// for well-scaled inputs.
inline HermitianMatrix positive_sqrt(const HermitianMatrix& m,
                                     double psd_tol = tolerances().psd) {
  const HermitianEig eig = hermitian_eig(m);
  const double hi =
      m.dim() == 0 ? 0.0 : eig.eigenvalues(eig.eigenvalues.size() - 1);
  const double scale = rel_scale(std::abs(hi));
  RealVector roots(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    const double lam = eig.eigenvalues(i);
    if (lam < -psd_tol * scale)
      throw domain_error("positive_sqrt: matrix is not PSD");
    roots(i) = lam > 0.0 ? std::sqrt(lam) : 0.0;
  }
  const Matrix r = eig.eigenvectors * roots.asDiagonal() *
                   eig.eigenvectors.adjoint();
  return HermitianMatrix(0.5 * (r + r.adjoint()));
}

/// Inverse square root of a positive definite matrix.
inline HermitianMatrix positive_inv_sqrt(const HermitianMatrix& m,
                                         double psd_tol = tolerances().psd) {
  if (!is_positive_invertible(m, psd_tol))
    throw domain_error("positive_inv_sqrt: matrix is not positive definite");
  const HermitianEig eig = hermitian_eig(m);
  RealVector roots(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < roots.size(); ++i)
    roots(i) = 1.0 / std::sqrt(eig.eigenvalues(i));
  const Matrix r = eig.eigenvectors * roots.asDiagonal() *
                   eig.eigenvectors.adjoint();
  return HermitianMatrix(0.5 * (r + r.adjoint()));
}

/// Eigenvalues of a general square matrix (unordered).
inline Vector eigenvalues_of(const Matrix& t) {
  require_square(t, "eigenvalues_of");
  if (t.rows() == 0) return Vector(0);
  Eigen::ComplexEigenSolver<Matrix> es(t, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw consistency_error("eigenvalues_of: eigensolver did not converge");
  return es.eigenvalues();
}

inline double spectral_radius(const Matrix& t) {
  const Vector lam = eigenvalues_of(t);
  double r = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    r = std::max(r, std::abs(lam(i)));
  return r;
}

/// Number of singular values above rank_tol * max(1, sigma_max).
inline int numerical_rank(const Matrix& m,
                          double rank_tol = tolerances().rank_sv) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  const Eigen::JacobiSVD<Matrix> svd(m);
  const RealVector s = svd.singularValues();
  const double cut = rank_tol * rel_scale(s(0));
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++rank;
  return rank;
}

/// Moore-Penrose pseudoinverse with singular values below
/// rank_tol * max(1, sigma_max) treated as zero.
inline Matrix pseudo_inverse(const Matrix& m,
                             double rank_tol = tolerances().rank_sv) {
  if (m.rows() == 0 || m.cols() == 0) return Matrix(m.cols(), m.rows());
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector s = svd.singularValues();
  const double cut = rank_tol * rel_scale(s(0));
  RealVector inv(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    inv(i) = s(i) > cut ? 1.0 / s(i) : 0.0;
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

/// Range-inclusion factorization: if range(A) is contained in range(B),
/// returns the minimal-norm C with A = B*C (namely C = B^+ A); otherwise
/// nullopt.  The inclusion test compares numerical ranks of [B | A] and B
/// at a threshold taken from the stacked matrix, so both ranks are
/// measured on the same scale.
inline std::optional<Matrix> douglas_factor(
    const Matrix& a, const Matrix& b, double rank_tol = tolerances().rank_sv) {
  require_same_dim(a, b, "douglas_factor");
  Matrix stacked(b.rows(), b.cols() + a.cols());
  stacked << b, a;
  const Eigen::JacobiSVD<Matrix> svd_all(stacked);
  const double cut =
      rank_tol * rel_scale(svd_all.singularValues().size() > 0
                               ? svd_all.singularValues()(0)
                               : 0.0);
  const auto rank_at = [&](const Matrix& m) {
    const Eigen::JacobiSVD<Matrix> svd(m);
    int r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > cut) ++r;
    return r;
  };
  if (rank_at(stacked) != rank_at(b)) return std::nullopt;
  return pseudo_inverse(b, rank_tol) * a;
}

}  // namespace opdefect
