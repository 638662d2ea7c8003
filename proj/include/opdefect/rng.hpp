#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "opdefect/matrix.hpp"

namespace opdefect {

/// splitmix64 step: the standard 64-bit finalizer used to derive
/// statistically independent child seeds from (seed, index) pairs.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Child seed for stream `stream`, element `index`.  Pure function, so
/// any (seed, stream, index) triple names the same child everywhere.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + 1) ^
                    splitmix64(index * 0xc2b2ae3d27d4eb4fULL + 2));
}

/// Deterministic random source.  Distribution code is written out
/// explicitly (instead of std::*_distribution) so that a given seed
/// yields the same stream on every standard library.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  /// Uniform in [0, 1).
  double unif() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

  double unif(double lo, double hi) { return lo + (hi - lo) * unif(); }

  /// Uniform integer in [lo, hi] inclusive.
  int unif_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(bits() % span);
  }

  /// Standard real Gaussian via Box-Muller.
  double gauss() {
    double u1 = unif();
    while (u1 <= 0.0) u1 = unif();
    const double u2 = unif();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Standard complex Gaussian (unit total variance).
  Complex cgauss() {
    const double s = std::numbers::sqrt2;
    return Complex(gauss() / s, gauss() / s);
  }

  /// Uniform phase factor e^{i theta}.
  Complex phase() { return std::polar(1.0, unif(0.0, 2.0 * std::numbers::pi)); }

  /// Complex Ginibre matrix: i.i.d. standard complex Gaussian entries.
  Matrix ginibre(int n) {
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = cgauss();
    return g;
  }

  /// Haar-distributed unitary: QR of a Ginibre matrix with the phase
  /// ambiguity of the R factor removed.
  Matrix haar_unitary(int n) {
    const Matrix g = ginibre(n);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
      const Complex d = r(j, j);
      const double a = std::abs(d);
      q.col(j) *= (a > 0.0) ? d / a : Complex(1.0, 0.0);
    }
    return q;
  }

  /// Random positive definite matrix with eigenvalues in [lo, hi].
  Matrix positive_definite(int n, double lo, double hi) {
    const Matrix v = haar_unitary(n);
    Matrix d = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = unif(lo, hi);
    Matrix p = v * d * v.adjoint();
    return 0.5 * (p + p.adjoint());
  }

  /// Random Hermitian matrix with entries of order one.
  Matrix hermitian(int n) {
    const Matrix g = ginibre(n);
    return 0.5 * (g + g.adjoint());
  }

private:
  std::mt19937_64 eng_;
};

}  // namespace opdefect
