#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "opdefect/linalg.hpp"
#include "opdefect/rng.hpp"

namespace opdefect {

/// Random-instance families.  Each family is designed to land in the
/// hypothesis region of specific verifiers with a margin that is either
/// exact or far from every tolerance boundary, so verdicts are stable.
enum class Generator {
  ginibre,        // small-norm random contraction
  unitary,        // Haar unitary
  jordan,         // Jordan blocks with unimodular eigenvalues
  unitary_plus_commuting_nilpotent,
  scaled_identity,
  direct_sum,     // unitary block + small-norm block, rotated
};

inline constexpr std::array<Generator, 6> kAllGenerators = {
    Generator::ginibre,
    Generator::unitary,
    Generator::jordan,
    Generator::unitary_plus_commuting_nilpotent,
    Generator::scaled_identity,
    Generator::direct_sum,
};

inline const char* to_string(Generator g) {
  switch (g) {
    case Generator::ginibre: return "ginibre";
    case Generator::unitary: return "unitary";
    case Generator::jordan: return "jordan";
    case Generator::unitary_plus_commuting_nilpotent:
      return "unitary_plus_commuting_nilpotent";
    case Generator::scaled_identity: return "scaled_identity";
    case Generator::direct_sum: return "direct_sum";
  }
  return "unknown";
}

inline std::optional<Generator> generator_from_string(std::string_view s) {
  for (Generator g : kAllGenerators)
    if (s == to_string(g)) return g;
  return std::nullopt;
}

enum class MetricKind { identity, random_positive };

inline const char* to_string(MetricKind k) {
  return k == MetricKind::identity ? "identity" : "random_positive";
}

inline std::optional<MetricKind> metric_kind_from_string(std::string_view s) {
  if (s == "identity") return MetricKind::identity;
  if (s == "random_positive") return MetricKind::random_positive;
  return std::nullopt;
}

/// Recipe for one reproducible instance.  Generation is a pure function
/// of this struct: equal specs give bit-identical matrices.
struct InstanceSpec {
  int dim = 2;  // 2..8
  Generator generator = Generator::unitary;
  std::uint64_t seed = 0;
  MetricKind metric = MetricKind::identity;
};

/// Operator together with the metric it is classified against.
struct Instance {
  Matrix op;
  HermitianMatrix metric;
};

/// Moduli used by scaled_identity (and by fuzzing for the closing-remark
/// scalar): one contraction, one exact isometry, two expansions.
inline constexpr std::array<double, 4> kScalePalette = {0.5, 1.0, 1.3, 2.0};

/// Eigenvalue phases are drawn from a 24-point grid, so distinct
/// eigenvalues are separated by at least |e^{2 pi i/24} - 1| > 0.26 and
/// never fall into the clustering guard band.
inline constexpr int kPhaseGridSize = 24;

namespace detail {

inline Complex grid_phase(int k) {
  const double theta =
      2.0 * 3.14159265358979323846 * double(k) / double(kPhaseGridSize);
  return Complex(std::cos(theta), std::sin(theta));
}

/// Splits dim into block sizes in {1,2,3}; the first block has size
/// >= 2 so the instance always carries a nontrivial nilpotent part.
inline std::vector<int> block_partition(Rng& rng, int dim) {
  std::vector<int> sizes;
  int remaining = dim;
  sizes.push_back(std::min(remaining, rng.unif_int(2, 3)));
  remaining -= sizes.back();
  while (remaining > 0) {
    sizes.push_back(rng.unif_int(1, std::min(remaining, 3)));
    remaining -= sizes.back();
  }
  return sizes;
}

inline Matrix jordan_block(int size, Complex lambda) {
  Matrix j = Matrix::Zero(size, size);
  j.diagonal().setConstant(lambda);
  for (int i = 0; i + 1 < size; ++i) j(i, i + 1) = Complex(1, 0);
  return j;
}

/// Conjugates by a random diagonal unitary.  Triangularity and (up to
/// one ulp) the diagonal are preserved, so eigenvalues stay decisively
/// clustered while entries stop looking canonical.
inline Matrix phase_conjugate(Rng& rng, const Matrix& t) {
  const Eigen::Index n = t.rows();
  Vector d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = rng.phase();
  return d.asDiagonal() * t * d.conjugate().asDiagonal();
}

inline Matrix make_ginibre_contraction(Rng& rng, int dim) {
  const double target = rng.unif(0.05, 0.3);
  Matrix g = rng.ginibre(dim);
  return g * (target / two_norm(g));
}

inline Matrix make_jordan(Rng& rng, int dim) {
  Matrix t = Matrix::Zero(dim, dim);
  if (dim == 2) {
    // Fixed shape: one 2-block at eigenvalue 1, random basis phases.
    t = jordan_block(2, Complex(1, 0));
  } else {
    const std::vector<int> sizes = block_partition(rng, dim);
    int at = 0;
    for (int s : sizes) {
      t.block(at, at, s, s) =
          jordan_block(s, grid_phase(rng.unif_int(0, kPhaseGridSize - 1)));
      at += s;
    }
  }
  return phase_conjugate(rng, t);
}

inline Matrix make_unitary_plus_commuting_nilpotent(Rng& rng, int dim) {
  const std::vector<int> sizes = block_partition(rng, dim);
  // Distinct grid indices per group keep eigenvalue clusters exact.
  std::vector<int> used;
  Matrix t = Matrix::Zero(dim, dim);
  int at = 0;
  for (int s : sizes) {
    int k;
    do {
      k = rng.unif_int(0, kPhaseGridSize - 1);
    } while (std::find(used.begin(), used.end(), k) != used.end());
    used.push_back(k);
    const Complex lambda = grid_phase(k);
    for (int i = 0; i < s; ++i) {
      t(at + i, at + i) = lambda;
      for (int j = i + 1; j < s; ++j) t(at + i, at + j) = 0.5 * rng.cgauss();
    }
    at += s;
  }
  return phase_conjugate(rng, t);
}

inline Matrix make_scaled_identity(Rng& rng, int dim) {
  const double c = kScalePalette[size_t(rng.unif_int(0, int(kScalePalette.size()) - 1))];
  return (c * rng.phase()) * Matrix::Identity(dim, dim);
}

inline Matrix make_direct_sum(Rng& rng, int dim) {
  const int k = rng.unif_int(1, dim - 1);
  Matrix t = Matrix::Zero(dim, dim);
  t.topLeftCorner(k, k) = rng.haar_unitary(k);
  t.bottomRightCorner(dim - k, dim - k) =
      make_ginibre_contraction(rng, dim - k);
  const Matrix w = rng.haar_unitary(dim);
  return w * t * w.adjoint();
}

/// Positive metric sharing T's eigenbasis, so T*QT = Q holds to
/// rounding for normal T.  T must be diagonalizable with a
/// well-conditioned eigenbasis; the caller guarantees that.
inline Matrix commuting_positive_metric(Rng& rng, const Matrix& t) {
  Eigen::ComplexEigenSolver<Matrix> es(t, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success)
    throw consistency_error("instance metric: eigensolver did not converge");
  const Eigen::Index n = t.rows();
  RealVector d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = rng.unif(0.5, 2.0);
  const Matrix& v = es.eigenvectors();
  Matrix q = v * d.asDiagonal() * v.adjoint();
  return 0.5 * (q + q.adjoint());
}

}  // namespace detail

/// Builds the (operator, metric) pair an InstanceSpec describes.  Pure
/// in its fields: the same fields always reproduce the same bits.
inline Instance make_instance(const InstanceSpec& spec) {
  if (spec.dim < 2 || spec.dim > 8)
    throw contract_violation("make_instance: dim must be in 2..8");
  Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(spec.generator) + 1,
                      static_cast<std::uint64_t>(spec.metric) + 1));
  Matrix t;
  switch (spec.generator) {
    case Generator::ginibre:
      t = detail::make_ginibre_contraction(rng, spec.dim);
      break;
    case Generator::unitary:
      t = rng.haar_unitary(spec.dim);
      break;
    case Generator::jordan:
      t = detail::make_jordan(rng, spec.dim);
      break;
    case Generator::unitary_plus_commuting_nilpotent:
      t = detail::make_unitary_plus_commuting_nilpotent(rng, spec.dim);
      break;
    case Generator::scaled_identity:
      t = detail::make_scaled_identity(rng, spec.dim);
      break;
    case Generator::direct_sum:
      t = detail::make_direct_sum(rng, spec.dim);
      break;
  }
  Matrix p;
  if (spec.metric == MetricKind::identity) {
    p = Matrix::Identity(spec.dim, spec.dim);
  } else if (spec.generator == Generator::unitary) {
    // A metric commuting with T keeps the instance exactly isometric,
    // which is what the unitary family exists to exercise.
    p = detail::commuting_positive_metric(rng, t);
  } else {
    p = rng.positive_definite(spec.dim, 0.5, 2.0);
  }
  return Instance{std::move(t), HermitianMatrix(p)};
}

}  // namespace opdefect
