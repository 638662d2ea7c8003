#pragma once

namespace opdefect {

/// Global tolerance policy.  Every threshold is relative: a quantity x is
/// compared against tol * max(1, scale) where scale is a norm of the data
/// it is measured against, so behaviour is invariant under moderate
/// rescaling of the inputs.
struct Tolerances {
  /// PSD verdicts: min eigenvalue >= -psd_tol * max(1, ||M||_2).
  double psd = 1e-9;
  /// Hermitian inputs: ||M - M*||_F <= herm * max(1, ||M||_F).
  double herm = 1e-9;
  /// Skew part discarded when symmetrizing a computed defect value.
  double skew = 1e-8;
  /// Agreement between the two independent defect evaluations,
  /// relative to the total mass of the binomial terms.
  double defect_cross = 1e-9;
  /// Agreement between the direct and factored power-pair defects.
  double power_pair = 1e-8;
  /// Half-width of the unit-circle band used for spectral classification.
  double spectral_band = 1e-7;
  /// Numerical rank: singular values below rank_sv * max(1, sigma_max)
  /// count as zero.
  double rank_sv = 1e-8;
  /// Eigenvalues closer than cluster_merge * scale are one cluster.
  double cluster_merge = 1e-9;
  /// Distinct clusters closer than cluster_guard * scale are rejected
  /// as numerically unresolvable.
  double cluster_guard = 1e-7;
  /// Residual bound for the invariant metric: ||T*QT - Q||_F.
  double metric_residual = 1e-9;
  /// Residual bound for similarity witnesses and subspace invariance.
  double similarity_residual = 1e-8;
  /// Norm threshold below which a nilpotent power counts as zero.
  double nilpotent = 1e-8;
  /// Residual bound for the minimal polynomial evaluated at T.
  double minpoly_residual = 1e-7;
  /// Invertibility: sigma_min >= invertibility * max(1, sigma_max).
  double invertibility = 1e-9;
  /// Residual bound for decomposition identities (unitary part,
  /// commutators, subspace invariance inside verifiers).
  double structure_residual = 1e-8;
  /// Allowance above 1 for the norm of an extracted contraction.
  double contraction_norm = 1e-8;
  /// Relative bound for the alternating-sum test in the equivalent
  /// norm induced by an invariant metric.
  double equiv_norm = 1e-8;
};

/// Mutable global configuration.  Set once (e.g. from the command line)
/// before computation starts; all library functions read it.
inline Tolerances& tolerances() {
  static Tolerances t;
  return t;
}

}  // namespace opdefect
