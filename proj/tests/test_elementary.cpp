#include <catch2/catch_amalgamated.hpp>

#include "opdefect/opdefect.hpp"

using namespace opdefect;

namespace {

Matrix jordan2() {
  Matrix t(2, 2);
  t << Complex(1, 0), Complex(1, 0), Complex(0, 0), Complex(1, 0);
  return t;
}

}  // namespace

TEST_CASE("binomial is exact for small arguments") {
  CHECK(binomial(0, 0) == 1.0);
  CHECK(binomial(5, 2) == 10.0);
  CHECK(binomial(6, 3) == 20.0);
  CHECK(binomial(60, 30) == 118264581564861424.0);
}

TEST_CASE("defect order zero is the identity map") {
  Rng rng(31);
  const Matrix t = rng.ginibre(3);
  const Matrix x = rng.ginibre(3);
  CHECK((defect(t.adjoint(), t, x, 0) - x).norm() == 0.0);
}

TEST_CASE("defect order one is X - A X B") {
  Rng rng(32);
  const Matrix a = rng.ginibre(3);
  const Matrix b = rng.ginibre(3);
  const Matrix x = rng.ginibre(3);
  CHECK((defect(a, b, x, 1) - (x - a * x * b)).norm() < 1e-14);
}

TEST_CASE("scalar operators reduce the defect to a scalar factor") {
  // T = alpha I: Delta^m(P) = (1 - |alpha|^2)^m P.
  for (const Complex alpha : {Complex(0.5, 0), Complex(2, 0), Complex(1, 1)}) {
    const Matrix t = alpha * Matrix::Identity(2, 2);
    Rng rng(33);
    const HermitianMatrix p(rng.positive_definite(2, 0.5, 2.0));
    for (int m = 1; m <= 5; ++m) {
      const double factor = std::pow(1.0 - std::norm(alpha), m);
      const HermitianMatrix d = defect_hermitian(t, p, m);
      CHECK((d.mat() - factor * p.mat()).norm() <
            1e-12 * rel_scale(std::abs(factor) * p.mat().norm()));
    }
  }
}

TEST_CASE("Jordan block at one is 3-isometric but not 1-expansive") {
  const Matrix t = jordan2();
  const HermitianMatrix id(Matrix::Identity(2, 2));
  CHECK(defect_hermitian(t, id, 3).mat().norm() <= 1e-12);
  CHECK(defect_hermitian(t, id, 4).mat().norm() <= 1e-12);
  // Delta^1(I) = I - T*T = [[0, -1], [-1, -1]]: eigenvalues (-1 +- sqrt5)/2.
  const PsdVerdict v = psd_check(defect_hermitian(t, id, 1));
  CHECK_FALSE(v.is_psd);
  const HermitianEig eig = hermitian_eig(defect_hermitian(t, id, 1));
  const double root5 = std::sqrt(5.0);
  CHECK_THAT(eig.eigenvalues.maxCoeff(),
             Catch::Matchers::WithinAbs((-1.0 + root5) / 2.0, 1e-12));
  CHECK_THAT(eig.eigenvalues.minCoeff(),
             Catch::Matchers::WithinAbs((-1.0 - root5) / 2.0, 1e-12));
}

TEST_CASE("tilde_defect equals the sign-flipped defect bit for bit") {
  Rng rng(34);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 2 + static_cast<int>(rng.unif() * 4);
    const int m = 1 + static_cast<int>(rng.unif() * 6);
    const Matrix t = rng.ginibre(dim);
    const Matrix x = rng.ginibre(dim);
    const Matrix d = defect(t.adjoint(), t, x, m);
    const Matrix td = tilde_defect(t.adjoint(), t, x, m);
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    // Negation is exact in floating point, so equality is bitwise.
    CHECK((td - sign * d).norm() == 0.0);
  }
}

TEST_CASE("power_pair_defect passes its factorization cross-check") {
  Rng rng(35);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 2 + static_cast<int>(rng.unif() * 3);
    const int m = 1 + static_cast<int>(rng.unif() * 4);
    const int n = 1 + static_cast<int>(rng.unif() * 3);
    const Matrix t = 0.6 * rng.ginibre(dim);
    const HermitianMatrix p(rng.positive_definite(dim, 0.5, 2.0));
    CHECK_NOTHROW(power_pair_defect_hermitian(t, p, m, n));
  }
}

TEST_CASE("power_pair_defect at n = 1 equals the plain defect") {
  Rng rng(36);
  const Matrix t = rng.ginibre(3);
  const HermitianMatrix p(rng.positive_definite(3, 0.5, 2.0));
  const Matrix lhs = power_pair_defect(t.adjoint(), t, p.mat(), 3, 1);
  const Matrix rhs = defect(t.adjoint(), t, p.mat(), 3);
  CHECK((lhs - rhs).norm() < 1e-12);
}

TEST_CASE("defect_sequence is the full ladder under the recurrence") {
  const Matrix t = jordan2();
  const HermitianMatrix id(Matrix::Identity(2, 2));
  const DefectSequence s = defect_sequence(t, id, 3);
  REQUIRE(s.values.size() == 4);
  CHECK((s.values[0].mat() - id.mat()).norm() == 0.0);
  for (int tdx = 1; tdx <= 3; ++tdx)
    CHECK((s.values[static_cast<size_t>(tdx)].mat() -
           defect_hermitian(t, id, tdx).mat())
              .norm() < 1e-13);
}

TEST_CASE("defect input contracts are enforced") {
  const Matrix t = jordan2();
  const HermitianMatrix id(Matrix::Identity(2, 2));
  CHECK_THROWS_AS(defect_hermitian(t, id, -1), contract_violation);
  CHECK_THROWS_AS(defect_hermitian(t, id, kMaxDefectOrder + 1),
                  contract_violation);
  CHECK_THROWS_AS(defect(t, t, Matrix::Zero(3, 3), 1), contract_violation);
  CHECK_THROWS_AS(power_pair_defect(t.adjoint(), t, id.mat(), 1, 0),
                  contract_violation);
}
