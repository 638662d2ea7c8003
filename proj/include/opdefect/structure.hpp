#pragma once

#include <limits>
#include <optional>

#include "opdefect/classes.hpp"
#include "opdefect/schur.hpp"

namespace opdefect {

namespace detail {

struct EigenvalueCluster {
  Complex center;              // mean of the members
  std::vector<int> members;    // indices into the eigenvalue vector
};

/// Groups eigenvalues by single-linkage at merge_radius * scale.  When
/// guard_radius > 0, any two eigenvalues in *different* clusters closer
/// than guard_radius * scale make the grouping ambiguous and raise
/// ill_conditioned_error: such spectra cannot be separated reliably at
/// working precision.
inline std::vector<EigenvalueCluster> cluster_eigenvalues(
    const Vector& lam, double scale, double merge_radius,
    double guard_radius) {
  const Eigen::Index n = lam.size();
  std::vector<int> parent(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) parent[static_cast<size_t>(i)] = int(i);
  const auto find = [&parent](int i) {
    while (parent[static_cast<size_t>(i)] != i)
      i = parent[static_cast<size_t>(i)] =
          parent[static_cast<size_t>(parent[static_cast<size_t>(i)])];
    return i;
  };
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(lam(i) - lam(j)) <= merge_radius * scale)
        parent[static_cast<size_t>(find(int(i)))] = find(int(j));
  std::vector<EigenvalueCluster> clusters;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int root = find(int(i));
    EigenvalueCluster* c = nullptr;
    for (auto& existing : clusters)
      if (find(existing.members.front()) == root) { c = &existing; break; }
    if (!c) {
      clusters.push_back(EigenvalueCluster{Complex(0, 0), {}});
      c = &clusters.back();
    }
    c->members.push_back(int(i));
  }
  for (auto& c : clusters) {
    Complex sum(0, 0);
    for (int i : c.members) sum += lam(i);
    c.center = sum / double(c.members.size());
  }
  if (guard_radius > 0.0) {
    for (size_t a = 0; a < clusters.size(); ++a)
      for (size_t b = a + 1; b < clusters.size(); ++b)
        for (int i : clusters[a].members)
          for (int j : clusters[b].members)
            if (std::abs(lam(i) - lam(j)) <= guard_radius * scale)
              throw ill_conditioned_error(
                  "eigenvalue clustering: two clusters closer than the "
                  "resolution guard band");
  }
  return clusters;
}

}  // namespace detail

/// Positive invertible solution of T*QT = Q, when one exists, together
/// with its residual.  Q is normalized to have largest eigenvalue one.
struct InvariantMetric {
  HermitianMatrix q;
  double residual;
};

namespace detail {

/// Builds Q = (V V*)^{-1} from a (numerically) full eigenbasis V with
/// unit columns, or nullopt when V is too close to singular.
inline std::optional<InvariantMetric> metric_from_eigenbasis(
    const Matrix& t, const Matrix& v) {
  const Eigen::Index n = t.rows();
  if (numerical_rank(v) < n) return std::nullopt;
  Matrix gram = v * v.adjoint();
  const HermitianEig ge = hermitian_eig(HermitianMatrix(gram));
  if (ge.eigenvalues(0) <= 0.0) return std::nullopt;
  RealVector inv(n);
  for (Eigen::Index i = 0; i < n; ++i) inv(i) = 1.0 / ge.eigenvalues(i);
  Matrix q = ge.eigenvectors * inv.asDiagonal() * ge.eigenvectors.adjoint();
  q = 0.5 * (q + q.adjoint());
  // Normalize so the top eigenvalue is one; for an inverse Gram matrix
  // that is 1 / min_eig(V V*).
  q /= 1.0 / ge.eigenvalues(0);
  const double residual = (t.adjoint() * q * t - q).norm();
  return InvariantMetric{HermitianMatrix(q), residual};
}

}  // namespace detail

/// If T is diagonalizable with every eigenvalue on the unit circle
/// (equivalently: similar to a unitary), returns an invariant metric Q
/// with ||T*QT - Q||_F within tolerance of max(1, ||Q||_F).  Otherwise
/// none.
inline std::optional<InvariantMetric> invariant_metric(const Matrix& t) {
  require_square(t, "invariant_metric");
  const Eigen::Index n = t.rows();
  if (n == 0)
    return InvariantMetric{HermitianMatrix(Matrix(0, 0)), 0.0};
  Eigen::ComplexEigenSolver<Matrix> es(t, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success)
    throw consistency_error("invariant_metric: eigensolver did not converge");
  const Vector lam = es.eigenvalues();
  const double band = tolerances().spectral_band;
  double radius = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mod = std::abs(lam(i));
    radius = std::max(radius, mod);
    if (mod < 1.0 - band || mod > 1.0 + band) return std::nullopt;
  }
  // Semisimplicity, tested once per distinct eigenvalue.
  const std::vector<detail::EigenvalueCluster> clusters =
      detail::cluster_eigenvalues(lam, rel_scale(radius),
                                  tolerances().cluster_merge, 0.0);
  for (const auto& c : clusters)
    if (!detail::eigenvalue_semisimple(t, c.center)) return std::nullopt;

  const auto bound = [](const InvariantMetric& im) {
    return tolerances().metric_residual * rel_scale(im.q.mat().norm());
  };
  std::optional<InvariantMetric> im =
      detail::metric_from_eigenbasis(t, es.eigenvectors());
  if (im && im->residual <= bound(*im)) return im;
  // Fallback basis: per-cluster null spaces of T - lambda I.  More
  // robust than the solver's eigenvectors when eigenvalues repeat.
  Matrix v(n, n);
  Eigen::Index col = 0;
  for (const auto& c : clusters) {
    Matrix shifted = t;
    shifted.diagonal().array() -= c.center;
    Eigen::JacobiSVD<Matrix> svd(shifted,
                                 Eigen::ComputeThinU | Eigen::ComputeFullV);
    const RealVector s = svd.singularValues();
    const double cut = tolerances().rank_sv * rel_scale(s(0));
    Eigen::Index kernel = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) <= cut) ++kernel;
    if (kernel != Eigen::Index(c.members.size())) return std::nullopt;
    v.middleCols(col, kernel) = svd.matrixV().rightCols(kernel);
    col += kernel;
  }
  if (col != n) return std::nullopt;
  im = detail::metric_from_eigenbasis(t, v);
  if (im && im->residual <= bound(*im)) return im;
  return std::nullopt;
}

/// Invertible change of basis S carrying T to a unitary: the `target`
/// U is exactly unitary (polar factor) and `residual` measures
/// ||S T S^{-1} - U||_F.  None when T is not similar to a unitary.
struct SimilarityWitness {
  Matrix transform;            // S, positive definite
  Matrix target;               // U, unitary
  double residual;             // ||S T S^{-1} - U||_F
  double transform_condition;  // cond_2(S)
};

inline std::optional<SimilarityWitness> similar_to_unitary(const Matrix& t) {
  const std::optional<InvariantMetric> im = invariant_metric(t);
  if (!im) return std::nullopt;
  const Eigen::Index n = t.rows();
  if (n == 0)
    return SimilarityWitness{Matrix(0, 0), Matrix(0, 0), 0.0, 1.0};
  const HermitianMatrix s = positive_sqrt(im->q);
  const HermitianMatrix sinv = positive_inv_sqrt(im->q);
  const Matrix w = s.mat() * t * sinv.mat();
  Eigen::JacobiSVD<Matrix> svd(w, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix u = svd.matrixU() * svd.matrixV().adjoint();
  const double residual = (w - u).norm();
  if (residual > tolerances().similarity_residual * rel_scale(w.norm()))
    return std::nullopt;
  const RealVector sv = Eigen::JacobiSVD<Matrix>(s.mat()).singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                              : std::numeric_limits<double>::infinity();
  return SimilarityWitness{s.mat(), u, residual, cond};
}

/// Decomposition of the space into the spectral subspace of the
/// eigenvalues inside the open unit disc (orbits decay there) and the
/// one for the unit circle (orbits stay bounded below).  Each basis is
/// orthonormal and spans a T-invariant subspace; together they span
/// everything, though they need not be mutually orthogonal.
struct SpectralSplit {
  Matrix inner_basis;
  Matrix peripheral_basis;
  Matrix inner_block;       // compression of T to the inner subspace
  Matrix peripheral_block;  // compression of T to the peripheral subspace
  double invariance_residual;
};

inline SpectralSplit kerchy_split(const Matrix& t) {
  require_square(t, "kerchy_split");
  if (!stability(t).power_bounded)
    throw domain_error("kerchy_split: operator is not power bounded");
  const double band = tolerances().spectral_band;
  const auto inner = [band](Complex z) { return std::abs(z) < 1.0 - band; };
  const auto peripheral = [&inner](Complex z) { return !inner(z); };
  const OrderedSchur si = ordered_schur(t, inner);
  const OrderedSchur sp = ordered_schur(t, peripheral);
  SpectralSplit out;
  out.inner_basis = si.unitary.leftCols(si.selected);
  out.peripheral_basis = sp.unitary.leftCols(sp.selected);
  out.inner_block = si.triangular.topLeftCorner(si.selected, si.selected);
  out.peripheral_block =
      sp.triangular.topLeftCorner(sp.selected, sp.selected);
  const auto invariance = [&t](const Matrix& basis) {
    if (basis.cols() == 0) return 0.0;
    const Matrix tb = t * basis;
    return (tb - basis * (basis.adjoint() * tb)).norm();
  };
  out.invariance_residual =
      std::max(invariance(out.inner_basis), invariance(out.peripheral_basis));
  return out;
}

/// Sub-cluster data attached to a Dunford decomposition.
struct SpectralClusterInfo {
  Complex eigenvalue;    // cluster center
  int multiplicity;      // algebraic multiplicity
  int pole_order;        // nilpotency index of the cluster's N-part
};

/// T = T0 + N with T0 diagonalizable, N nilpotent, and [T0, N] = 0.
struct DunfordPair {
  Matrix semisimple;   // T0
  Matrix nilpotent;    // N
  int nilpotency_index;  // least p with N^p = 0 (p = 1 when N = 0)
  std::vector<SpectralClusterInfo> clusters;
};

inline DunfordPair dunford_decompose(const Matrix& t) {
  require_square(t, "dunford_decompose");
  const Eigen::Index n = t.rows();
  if (n == 0) return DunfordPair{Matrix(0, 0), Matrix(0, 0), 1, {}};
  const double scale = rel_scale(two_norm(t));
  const Vector lam = eigenvalues_of(t);
  const std::vector<detail::EigenvalueCluster> clusters =
      detail::cluster_eigenvalues(lam, scale, tolerances().cluster_merge,
                                  tolerances().cluster_guard);
  Matrix t0 = Matrix::Zero(n, n);
  if (clusters.size() == 1) {
    t0 = clusters[0].center * Matrix::Identity(n, n);
  } else {
    // Projector per cluster; a Schur diagonal entry belongs to the
    // cluster whose center is nearest, which is stable against the
    // eigenvalues being recomputed inside ordered_schur.
    for (size_t c = 0; c < clusters.size(); ++c) {
      const auto nearest_is_c = [&clusters, c](Complex z) {
        size_t best = 0;
        double dist = std::abs(z - clusters[0].center);
        for (size_t k = 1; k < clusters.size(); ++k) {
          const double d = std::abs(z - clusters[k].center);
          if (d < dist) { dist = d; best = k; }
        }
        return best == c;
      };
      t0 += clusters[c].center * spectral_projector(t, nearest_is_c);
    }
  }
  DunfordPair out;
  out.semisimple = t0;
  out.nilpotent = t - t0;
  const double zero_cut = tolerances().nilpotent * rel_scale(t.norm());
  Matrix pw = out.nilpotent;
  int index = 1;
  while (pw.norm() > zero_cut) {
    if (index > n)
      throw consistency_error(
          "dunford_decompose: nilpotent part does not vanish");
    pw = pw * out.nilpotent;
    ++index;
  }
  out.nilpotency_index = index;
  // Pole order per cluster: least q with N^q vanishing on the cluster's
  // spectral subspace.
  for (const auto& c : clusters) {
    const auto nearest_is_c = [&clusters, &c](Complex z) {
      double dist = std::abs(z - c.center);
      for (const auto& other : clusters)
        if (std::abs(z - other.center) < dist) return false;
      return true;
    };
    const Matrix proj = clusters.size() == 1
                            ? Matrix(Matrix::Identity(n, n))
                            : spectral_projector(t, nearest_is_c);
    Matrix npow = Matrix::Identity(n, n);
    int order = 0;
    do {
      npow = npow * out.nilpotent;
      ++order;
    } while ((npow * proj).norm() > zero_cut && order <= n);
    out.clusters.push_back(SpectralClusterInfo{
        c.center, static_cast<int>(c.members.size()), order});
  }
  return out;
}

/// Minimal polynomial q with q(T) = 0: the product over eigenvalue
/// clusters of (x - lambda)^{pole order}.  Coefficients ascending,
/// monic (last coefficient is exactly one).
struct MinimalPolynomial {
  std::vector<Complex> coefficients;
  int degree;
  double residual;  // ||q(T)||_F
};

inline MinimalPolynomial minimal_polynomial(const Matrix& t) {
  const DunfordPair dp = dunford_decompose(t);
  std::vector<Complex> coeff{Complex(1, 0)};
  for (const auto& c : dp.clusters) {
    for (int k = 0; k < c.pole_order; ++k) {
      std::vector<Complex> next(coeff.size() + 1, Complex(0, 0));
      for (size_t i = 0; i < coeff.size(); ++i) {
        next[i] -= c.eigenvalue * coeff[i];
        next[i + 1] += coeff[i];
      }
      coeff = std::move(next);
    }
  }
  const int degree = static_cast<int>(coeff.size()) - 1;
  const std::vector<Matrix> pw = detail::power_cache(t, degree);
  Matrix value = Matrix::Zero(t.rows(), t.cols());
  double mass = 0.0;
  for (size_t k = 0; k < coeff.size(); ++k) {
    value += coeff[k] * pw[k];
    mass += std::abs(coeff[k]) * pw[k].norm();
  }
  const double residual = value.norm();
  if (residual > tolerances().minpoly_residual * rel_scale(mass))
    throw consistency_error(
        "minimal_polynomial: candidate polynomial does not annihilate T");
  return MinimalPolynomial{std::move(coeff), degree, residual};
}

/// Invertibility decided on singular values; when 0 is in the spectrum,
/// reports the order of 0 as a pole of the resolvent (the nilpotency
/// index of the Dunford block at 0).
struct InvertibilityReport {
  bool invertible;
  double sigma_min;
  int zero_is_pole_order;  // 0 when invertible
};

inline InvertibilityReport invertibility_check(const Matrix& t) {
  require_square(t, "invertibility_check");
  if (t.rows() == 0) return InvertibilityReport{true, 0.0, 0};
  const Eigen::JacobiSVD<Matrix> svd(t);
  const RealVector s = svd.singularValues();
  const double smin = s(s.size() - 1);
  const bool invertible =
      smin >= tolerances().invertibility * rel_scale(s(0));
  InvertibilityReport rep{invertible, smin, 0};
  if (!invertible) {
    const DunfordPair dp = dunford_decompose(t);
    const double zero_radius =
        tolerances().cluster_guard * rel_scale(two_norm(t));
    for (const auto& c : dp.clusters)
      if (std::abs(c.eigenvalue) <= zero_radius)
        rep.zero_is_pole_order = c.pole_order;
  }
  return rep;
}

/// C = P^{-1/2} T* P^{1/2}.  When the one-step defect of (T*, T) on P is
/// PSD this is a contraction; it is the operator whose adjoint T
/// imitates in the geometry induced by P.
inline Matrix contraction_extract(const Matrix& t, const HermitianMatrix& p) {
  require_square(t, "contraction_extract");
  require_same_dim(t, p.mat(), "contraction_extract");
  if (!is_positive_invertible(p))
    throw domain_error("contraction_extract: metric is not positive invertible");
  const HermitianMatrix root = positive_sqrt(p);
  const HermitianMatrix inv_root = positive_inv_sqrt(p);
  return inv_root.mat() * t.adjoint() * root.mat();
}

}  // namespace opdefect
