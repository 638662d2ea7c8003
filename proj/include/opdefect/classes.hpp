#pragma once

#include <string>
#include <vector>

#include "opdefect/elementary.hpp"
#include "opdefect/rng.hpp"

namespace opdefect {

/// Extremal eigenvalues of the t-fold defect of (T*, T) on the metric.
struct ClassMargin {
  int t;
  double min_eig;
  double max_eig;
};

/// Membership verdicts for the defect-positivity classes of order m.
/// All verdicts refer to the same metric; `margins` records the
/// eigenvalue range of every defect in the ladder so a reader can judge
/// how decisively each sign test passed.
struct ClassReport {
  int m = 0;
  std::string metric_id;
  bool expansive = false;          // Delta^m(P) <= 0
  bool contractive = false;        // Delta^m(P) >= 0
  bool isometric = false;          // Delta^m(P) = 0 (both of the above)
  bool hyperexpansive = false;     // Delta^t(P) <= 0 for all 1 <= t <= m
  bool hypercontractive = false;   // Delta^t(P) >= 0 for all 1 <= t <= m
  bool alternatingly_expansive = false;  // (-1)^t Delta^t(P) >= 0, t <= m
  std::vector<ClassMargin> margins;      // t = 1..m
};

namespace detail {

/// PSD verdict from precomputed extremal eigenvalues, with the same
/// semantics as psd_check: min >= -tol * max(1, ||.||_2).
inline bool psd_from_margin(double min_eig, double max_eig, double tol) {
  const double scale = rel_scale(std::max(std::abs(min_eig),
                                          std::abs(max_eig)));
  return min_eig >= -tol * scale;
}

inline bool nsd_from_margin(double min_eig, double max_eig, double tol) {
  return psd_from_margin(-max_eig, -min_eig, tol);
}

}  // namespace detail

/// Classifies T against the metric P at order m.  P must be positive
/// definite and invertible at tolerance.  Note the sign conventions:
/// "expansive" means the defect is negative semidefinite.
inline ClassReport classify(const Matrix& t, const HermitianMatrix& p, int m,
                            std::string metric_id = "P") {
  if (m < 1) throw contract_violation("classify: order m must be >= 1");
  if (!is_positive_invertible(p))
    throw domain_error("classify: metric is not positive invertible");
  const DefectSequence seq = defect_sequence(t, p, m);
  ClassReport rep;
  rep.m = m;
  rep.metric_id = std::move(metric_id);
  const double tol = tolerances().psd;
  bool hyper_exp = true, hyper_con = true, alternating = true;
  for (int lvl = 1; lvl <= m; ++lvl) {
    const HermitianEig eig =
        hermitian_eig(seq.values[static_cast<size_t>(lvl)]);
    const double lo = eig.eigenvalues(0);
    const double hi = eig.eigenvalues(eig.eigenvalues.size() - 1);
    rep.margins.push_back(ClassMargin{lvl, lo, hi});
    const bool psd = detail::psd_from_margin(lo, hi, tol);
    const bool nsd = detail::nsd_from_margin(lo, hi, tol);
    hyper_exp = hyper_exp && nsd;
    hyper_con = hyper_con && psd;
    alternating = alternating && (lvl % 2 == 0 ? psd : nsd);
    if (lvl == m) {
      rep.expansive = nsd;
      rep.contractive = psd;
      rep.isometric = nsd && psd;
    }
  }
  rep.hyperexpansive = hyper_exp;
  rep.hypercontractive = hyper_con;
  rep.alternatingly_expansive = alternating;
  return rep;
}

/// Decides whether X >= 0 implies A X B >= 0.  The structural
/// characterization (B is a nonnegative real multiple of A*, or one of
/// the factors vanishes) is evaluated directly and cross-checked against
/// randomized probes on PSD inputs; disagreement raises consistency_error.
inline bool is_order_preserving_pair(const Matrix& a, const Matrix& b,
                                     int trials = 16,
                                     std::uint64_t seed = 0x0bdefec7u) {
  require_square(a, "is_order_preserving_pair");
  require_same_dim(a, b, "is_order_preserving_pair");
  const double tol = 1e-8;

  bool structural;
  if (a.norm() <= 1e-14 || b.norm() <= 1e-14) {
    structural = true;
  } else {
    const Matrix astar = a.adjoint();
    const Complex c = (astar.adjoint() * b).trace() /
                      (astar.adjoint() * astar).trace();
    const bool real_nonneg =
        std::abs(c.imag()) <= tol * rel_scale(std::abs(c)) &&
        c.real() >= -tol;
    structural = real_nonneg &&
                 (b - c * astar).norm() <= tol * rel_scale(b.norm());
  }

  Rng rng(seed);
  bool probes = true;
  const int n = static_cast<int>(a.rows());
  for (int i = 0; i < trials && probes; ++i) {
    const Matrix g = rng.ginibre(n);
    const Matrix x = g * g.adjoint();
    const Matrix m = a * x * b;
    if (hermitian_defect_norm(m) > tol) {
      probes = false;
      break;
    }
    const PsdVerdict v = psd_check(HermitianMatrix(m, tol), tol);
    probes = v.is_psd;
  }
  if (structural != probes)
    throw consistency_error(
        "is_order_preserving_pair: structural test and randomized probes "
        "disagree");
  return structural;
}

/// Spectral orbit classification.  In finite dimension every orbit
/// statement reduces to the spectrum: T is power bounded iff its
/// spectral radius is at most one and every eigenvalue on the unit
/// circle is semisimple; all orbits decay iff the radius is below one;
/// no orbit decays iff no eigenvalue lies inside the circle.
struct StabilityReport {
  bool power_bounded = false;
  bool c0_dot = false;  // ||T^n x|| -> 0 for every x
  bool c1_dot = false;  // inf_n ||T^n x|| > 0 for every x != 0
  bool c_dot0 = false;  // the same for T*
  bool c_dot1 = false;
  double sup_norm_estimate = 0.0;  // max_{n <= 64} ||T^n||_2
};

namespace detail {

/// Eigenvalue lambda is semisimple iff rank(T - lambda I) equals
/// rank((T - lambda I)^2).
inline bool eigenvalue_semisimple(const Matrix& t, Complex lambda) {
  Matrix shifted = t;
  shifted.diagonal().array() -= lambda;
  return numerical_rank(shifted) == numerical_rank(shifted * shifted);
}

struct SpectralClassification {
  double radius = 0.0;
  double min_modulus = 0.0;
  bool peripheral_semisimple = true;
};

inline SpectralClassification classify_spectrum(const Matrix& t) {
  SpectralClassification out;
  const Vector lam = eigenvalues_of(t);
  if (lam.size() == 0) return out;
  out.min_modulus = std::abs(lam(0));
  const double band = tolerances().spectral_band;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    const double mod = std::abs(lam(i));
    out.radius = std::max(out.radius, mod);
    out.min_modulus = std::min(out.min_modulus, mod);
  }
  // Test semisimplicity once per distinct peripheral eigenvalue;
  // exact repeats collapse to one test point.
  const double merge =
      tolerances().cluster_merge * rel_scale(out.radius);
  std::vector<Complex> tested;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (std::abs(lam(i)) < 1.0 - band) continue;
    bool seen = false;
    for (const Complex& c : tested)
      if (std::abs(c - lam(i)) <= merge) { seen = true; break; }
    if (seen) continue;
    tested.push_back(lam(i));
    if (!eigenvalue_semisimple(t, lam(i)))
      out.peripheral_semisimple = false;
  }
  return out;
}

}  // namespace detail

inline StabilityReport stability(const Matrix& t) {
  require_square(t, "stability");
  if (!all_finite(t)) throw contract_violation("stability: non-finite entry");
  const double band = tolerances().spectral_band;
  const detail::SpectralClassification fwd = detail::classify_spectrum(t);
  const detail::SpectralClassification adj =
      detail::classify_spectrum(t.adjoint());
  StabilityReport rep;
  rep.power_bounded =
      fwd.radius < 1.0 + band && fwd.peripheral_semisimple;
  rep.c0_dot = fwd.radius < 1.0 - band;
  rep.c1_dot = fwd.min_modulus >= 1.0 - band;
  rep.c_dot0 = adj.radius < 1.0 - band;
  rep.c_dot1 = adj.min_modulus >= 1.0 - band;
  Matrix pw = Matrix::Identity(t.rows(), t.cols());
  rep.sup_norm_estimate = two_norm(pw);
  for (int n = 1; n <= 64; ++n) {
    pw = pw * t;
    rep.sup_norm_estimate = std::max(rep.sup_norm_estimate, two_norm(pw));
  }
  return rep;
}

}  // namespace opdefect
