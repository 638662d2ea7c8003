#include <catch2/catch_amalgamated.hpp>

#include "opdefect/opdefect.hpp"

using namespace opdefect;

namespace {

Matrix diag2(Complex a, Complex b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_CASE("psd_check reports exact extremal eigenvalues on diagonals") {
  const PsdVerdict v = psd_check(HermitianMatrix(diag2(2.0, -0.5)));
  CHECK_FALSE(v.is_psd);
  CHECK_THAT(v.min_eig, Catch::Matchers::WithinAbs(-0.5, 1e-14));
  const PsdVerdict w = psd_check(HermitianMatrix(diag2(1.0, 0.0)));
  CHECK(w.is_psd);
  CHECK_THAT(w.min_eig, Catch::Matchers::WithinAbs(0.0, 1e-14));
}

TEST_CASE("psd_check tolerance scales with the matrix, floored at one") {
  // min eig -5e-10 on a unit-scale matrix: inside the default band.
  CHECK(psd_check(HermitianMatrix(diag2(1.0, -5e-10))).is_psd);
  // Same eigenvalue against a tiny matrix: still inside (floor at 1).
  CHECK(psd_check(HermitianMatrix(diag2(1e-12, -5e-10))).is_psd);
  // Outside the band once the violation clears tol * scale.
  CHECK_FALSE(psd_check(HermitianMatrix(diag2(1.0, -1e-8))).is_psd);
}

TEST_CASE("is_positive_invertible requires a uniform positive floor") {
  CHECK(is_positive_invertible(HermitianMatrix(diag2(0.5, 2.0))));
  CHECK_FALSE(is_positive_invertible(HermitianMatrix(diag2(1.0, 0.0))));
  CHECK_FALSE(is_positive_invertible(HermitianMatrix(diag2(1.0, -1.0))));
}

TEST_CASE("positive_sqrt squares back to the input") {
  Rng rng(21);
  const HermitianMatrix p(rng.positive_definite(4, 0.3, 3.0));
  const HermitianMatrix s = positive_sqrt(p);
  CHECK((s.mat() * s.mat() - p.mat()).norm() < 1e-12);
  const HermitianMatrix si = positive_inv_sqrt(p);
  CHECK((s.mat() * si.mat() - Matrix::Identity(4, 4)).norm() < 1e-12);
}

TEST_CASE("positive_sqrt rejects indefinite input") {
  CHECK_THROWS_AS(positive_sqrt(HermitianMatrix(diag2(1.0, -1.0))),
                  domain_error);
}

TEST_CASE("eigenvalues of a frozen companion-style matrix") {
  // [[0, -1], [-1, -1]] has eigenvalues (-1 +- sqrt(5)) / 2.
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(-1, 0), Complex(-1, 0), Complex(-1, 0);
  Vector ev = eigenvalues_of(m);
  std::vector<double> got = {ev(0).real(), ev(1).real()};
  std::sort(got.begin(), got.end());
  const double root5 = std::sqrt(5.0);
  CHECK_THAT(got[0], Catch::Matchers::WithinAbs((-1.0 - root5) / 2.0, 1e-12));
  CHECK_THAT(got[1], Catch::Matchers::WithinAbs((-1.0 + root5) / 2.0, 1e-12));
  CHECK(std::abs(ev(0).imag()) < 1e-12);
  CHECK(std::abs(ev(1).imag()) < 1e-12);
}

TEST_CASE("spectral_radius of a rotation-like matrix is one") {
  Matrix t(2, 2);
  t << Complex(0, 0), Complex(2, 0), Complex(-0.5, 0), Complex(0, 0);
  CHECK_THAT(spectral_radius(t), Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("numerical_rank sees through small singular values") {
  Matrix m = diag2(1.0, 1e-12);
  CHECK(numerical_rank(m) == 1);
  CHECK(numerical_rank(diag2(1.0, 1.0)) == 2);
  CHECK(numerical_rank(Matrix::Zero(3, 3)) == 0);
}

TEST_CASE("pseudo_inverse inverts invertible matrices") {
  Rng rng(22);
  const Matrix g = rng.ginibre(3) + 2.0 * Matrix::Identity(3, 3);
  const Matrix pinv = pseudo_inverse(g);
  CHECK((g * pinv - Matrix::Identity(3, 3)).norm() < 1e-10);
}

TEST_CASE("pseudo_inverse satisfies the Moore-Penrose identities on rank-deficient input") {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 2.0;
  m(0, 1) = 1.0;
  const Matrix p = pseudo_inverse(m);
  CHECK((m * p * m - m).norm() < 1e-12);
  CHECK((p * m * p - p).norm() < 1e-12);
  CHECK(hermitian_defect_norm(m * p) < 1e-12);
  CHECK(hermitian_defect_norm(p * m) < 1e-12);
}

TEST_CASE("douglas_factor solves the diagonal oracle") {
  // A = diag(1, 0), B = diag(2, 0): C = diag(1/2, 0).
  const auto c = douglas_factor(diag2(1.0, 0.0), diag2(2.0, 0.0));
  REQUIRE(c.has_value());
  CHECK((*c - diag2(0.5, 0.0)).norm() < 1e-14);
}

TEST_CASE("douglas_factor reports failure outside the range inclusion") {
  // A hits the second coordinate, B cannot.
  const auto c = douglas_factor(diag2(0.0, 1.0), diag2(2.0, 0.0));
  CHECK_FALSE(c.has_value());
}

TEST_CASE("douglas_factor returns the minimal-norm solution") {
  // B = [1 0; 0 0] has a nontrivial kernel; any C' = C + K with K in
  // ker(B) also factors A.  The returned C must not spend norm there.
  Matrix b = diag2(1.0, 0.0);
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 3.0;
  const auto c = douglas_factor(a, b);
  REQUIRE(c.has_value());
  CHECK((b * *c - a).norm() < 1e-13);
  CHECK(c->row(1).norm() < 1e-13);
}

TEST_CASE("ordered_schur moves selected eigenvalues to the leading block") {
  Matrix t = Matrix::Zero(3, 3);
  t(0, 0) = Complex(2.0, 0.0);
  t(1, 1) = Complex(0.25, 0.0);
  t(2, 2) = Complex(0.0, 1.0);
  Rng rng(23);
  const Matrix w = rng.haar_unitary(3);
  const Matrix conj = w * t * w.adjoint();
  const auto inner = [](Complex z) { return std::abs(z) < 0.5; };
  const OrderedSchur s = ordered_schur(conj, inner);
  REQUIRE(s.selected == 1);
  CHECK_THAT(std::abs(s.triangular(0, 0)),
             Catch::Matchers::WithinAbs(0.25, 1e-10));
  CHECK((s.unitary.adjoint() * s.unitary - Matrix::Identity(3, 3)).norm() <
        1e-12);
  CHECK((s.unitary * s.triangular * s.unitary.adjoint() - conj).norm() <
        1e-10);
  // Strictly lower part vanishes.
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < i; ++j) CHECK(std::abs(s.triangular(i, j)) < 1e-12);
}

TEST_CASE("spectral_projector is idempotent and commutes with the operator") {
  Matrix t = Matrix::Zero(3, 3);
  t(0, 0) = Complex(1.0, 0.0);
  t(0, 1) = Complex(1.0, 0.0);
  t(1, 1) = Complex(1.0, 0.0);
  t(2, 2) = Complex(3.0, 0.0);
  const auto near_one = [](Complex z) { return std::abs(z - 1.0) < 0.5; };
  const Matrix pi = spectral_projector(t, near_one);
  CHECK((pi * pi - pi).norm() < 1e-10);
  CHECK((pi * t - t * pi).norm() < 1e-10);
  CHECK_THAT(pi.trace().real(), Catch::Matchers::WithinAbs(2.0, 1e-10));
}
