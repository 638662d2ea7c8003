#pragma once

#include <functional>

#include "opdefect/linalg.hpp"

namespace opdefect {

/// Complex Schur form T = unitary * triangular * unitary^* in which every
/// eigenvalue satisfying the selection predicate has been moved to the
/// leading diagonal positions.  `selected` is the number of such
/// eigenvalues; the first `selected` columns of `unitary` then span the
/// invariant subspace belonging to them.
struct OrderedSchur {
  Matrix unitary;
  Matrix triangular;
  int selected = 0;
};

namespace detail {

/// Unitary similarity swapping the diagonal entries of the 2x2 upper
/// triangular block at position i.  Rotation taken from the eigenvector
/// of the trailing eigenvalue, as in the LAPACK exchange routine.
inline void swap_schur_adjacent(Matrix& r, Matrix& q, Eigen::Index i) {
  const Complex a = r(i, i);
  const Complex b = r(i + 1, i + 1);
  const Complex c = r(i, i + 1);
  Eigen::Vector2cd v;
  v << c, b - a;
  const double vn = v.norm();
  if (vn <= 1e-300) return;  // identical eigenvalues: nothing to swap
  v /= vn;
  Eigen::Matrix2cd g;
  g << v(0), -std::conj(v(1)), v(1), std::conj(v(0));
  r.middleRows(i, 2) = g.adjoint() * r.middleRows(i, 2);
  r.middleCols(i, 2) = r.middleCols(i, 2) * g;
  q.middleCols(i, 2) = q.middleCols(i, 2) * g;
  r(i + 1, i) = Complex(0, 0);
}

}  // namespace detail

inline OrderedSchur ordered_schur(
    const Matrix& t, const std::function<bool(Complex)>& select) {
  require_square(t, "ordered_schur");
  const Eigen::Index n = t.rows();
  OrderedSchur out;
  if (n == 0) {
    out.unitary = Matrix(0, 0);
    out.triangular = Matrix(0, 0);
    return out;
  }
  Eigen::ComplexSchur<Matrix> schur(t, /*computeU=*/true);
  if (schur.info() != Eigen::Success)
    throw consistency_error("ordered_schur: Schur iteration did not converge");
  Matrix r = schur.matrixT();
  Matrix q = schur.matrixU();
  // Bubble selected eigenvalues to the front.  The predicate is
  // evaluated once per diagonal entry and carried through the swaps,
  // so roundoff in the rotations cannot flip a selection.
  std::vector<char> want(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    want[static_cast<size_t>(i)] = select(r(i, i)) ? 1 : 0;
  bool moved = true;
  while (moved) {
    moved = false;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      if (!want[static_cast<size_t>(i)] && want[static_cast<size_t>(i + 1)]) {
        detail::swap_schur_adjacent(r, q, i);
        std::swap(want[static_cast<size_t>(i)],
                  want[static_cast<size_t>(i + 1)]);
        moved = true;
      }
    }
  }
  out.selected = 0;
  for (char w : want) out.selected += w;
  out.unitary = std::move(q);
  out.triangular = std::move(r);
  return out;
}

namespace detail {

/// Solves R11 * W - W * R22 = R12 for upper triangular R11 (k x k) and
/// R22 (l x l) with disjoint spectra, by column back-substitution.
inline Matrix sylvester_triangular(const Matrix& r11, const Matrix& r12,
                                   const Matrix& r22) {
  const Eigen::Index k = r11.rows();
  const Eigen::Index l = r22.rows();
  Matrix w(k, l);
  for (Eigen::Index j = 0; j < l; ++j) {
    Vector rhs = r12.col(j);
    for (Eigen::Index i = 0; i < j; ++i) rhs += w.col(i) * r22(i, j);
    Matrix shifted = r11;
    shifted.diagonal().array() -= r22(j, j);
    // Guard the triangular solve: a (near-)zero pivot means the spectra
    // were not disjoint and the projector is not defined.
    for (Eigen::Index i = 0; i < k; ++i)
      if (std::abs(shifted(i, i)) <=
          1e-14 * rel_scale(std::abs(r11(i, i)) + std::abs(r22(j, j))))
        throw ill_conditioned_error(
            "spectral projector: coincident spectra in Sylvester solve");
    w.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  return w;
}

}  // namespace detail

/// Spectral projector onto the invariant subspace of the selected
/// eigenvalues, along the complementary invariant subspace.  Idempotent
/// and commuting with T up to roundoff.  Requires the selected and
/// unselected spectra to be disjoint.
inline Matrix spectral_projector(const Matrix& t,
                                 const std::function<bool(Complex)>& select) {
  const OrderedSchur os = ordered_schur(t, select);
  const Eigen::Index n = t.rows();
  const Eigen::Index k = os.selected;
  if (k == 0) return Matrix::Zero(n, n);
  if (k == n) return Matrix::Identity(n, n);
  const Matrix r11 = os.triangular.topLeftCorner(k, k);
  const Matrix r12 = os.triangular.topRightCorner(k, n - k);
  const Matrix r22 = os.triangular.bottomRightCorner(n - k, n - k);
  const Matrix w = detail::sylvester_triangular(r11, r12, r22);
  Matrix y = Matrix::Zero(n, n);
  y.topLeftCorner(k, k) = Matrix::Identity(k, k);
  y.topRightCorner(k, n - k) = w;
  return os.unitary * y * os.unitary.adjoint();
}

}  // namespace opdefect
