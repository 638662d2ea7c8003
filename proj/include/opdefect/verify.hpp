#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "opdefect/elementary.hpp"
#include "opdefect/generators.hpp"
#include "opdefect/structure.hpp"

namespace opdefect {

enum class TheoremId {
  PRO_00,              // contractive descent, odd order
  PRO_01,              // expansive descent, even order
  THM_30,              // power bounded + classified => hyper-classified
  THM_31,              // power bounded expansive => similar to unitary
  THM_32,              // ... with invariant metric, C1., equivalent norm
  THM_310,             // power bounded contractive => contraction + split
  SPECTRAL_INCLUSION,  // expansive => spectrum meets the unit circle rule
  NO_SINGULAR_DRAZIN,  // expansive => invertible
  THM_10,              // expansive, r <= 1 => unitary + commuting nilpotent
  PRO_11,              // expansive with T*T >= I => alternatingly expansive
  REMARK_CONTRACTIVE,  // the singular contractive block example
};

inline constexpr int kTheoremCount = 11;

inline constexpr std::array<TheoremId, kTheoremCount> kAllTheorems = {
    TheoremId::PRO_00,          TheoremId::PRO_01,
    TheoremId::THM_30,          TheoremId::THM_31,
    TheoremId::THM_32,          TheoremId::THM_310,
    TheoremId::SPECTRAL_INCLUSION, TheoremId::NO_SINGULAR_DRAZIN,
    TheoremId::THM_10,          TheoremId::PRO_11,
    TheoremId::REMARK_CONTRACTIVE,
};

inline const char* to_string(TheoremId id) {
  switch (id) {
    case TheoremId::PRO_00: return "PRO_00";
    case TheoremId::PRO_01: return "PRO_01";
    case TheoremId::THM_30: return "THM_30";
    case TheoremId::THM_31: return "THM_31";
    case TheoremId::THM_32: return "THM_32";
    case TheoremId::THM_310: return "THM_310";
    case TheoremId::SPECTRAL_INCLUSION: return "SPECTRAL_INCLUSION";
    case TheoremId::NO_SINGULAR_DRAZIN: return "NO_SINGULAR_DRAZIN";
    case TheoremId::THM_10: return "THM_10";
    case TheoremId::PRO_11: return "PRO_11";
    case TheoremId::REMARK_CONTRACTIVE: return "REMARK_CONTRACTIVE";
  }
  return "unknown";
}

inline std::optional<TheoremId> theorem_from_string(std::string_view s) {
  for (TheoremId id : kAllTheorems)
    if (s == to_string(id)) return id;
  return std::nullopt;
}

/// Outcome of checking one implication on one instance.  The statement
/// is an implication, so a failed hypothesis leaves nothing to check:
/// conclusion_holds is empty exactly when hypotheses_hold is false.
/// Residual values of -1 mark quantities that were never computed
/// because an earlier step already failed.
struct TheoremVerdict {
  TheoremId theorem_id;
  bool hypotheses_hold = false;
  std::optional<bool> conclusion_holds;
  std::vector<std::pair<std::string, double>> residuals;
  std::vector<std::pair<std::string, Matrix>> witness;
};

namespace detail {

inline bool expansive_at(const ClassReport& cr, int t) {
  if (t == 0) return true;  // order-zero defect is the metric itself
  const ClassMargin& m = cr.margins.at(size_t(t - 1));
  return nsd_from_margin(m.min_eig, m.max_eig, tolerances().psd);
}

inline bool contractive_at(const ClassReport& cr, int t) {
  if (t == 0) return true;
  const ClassMargin& m = cr.margins.at(size_t(t - 1));
  return psd_from_margin(m.min_eig, m.max_eig, tolerances().psd);
}

inline void require_order(int m, const char* where) {
  if (m < 1) throw contract_violation(std::string(where) + ": m must be >= 1");
}

}  // namespace detail

/// Order-descent statements: an even-order expansive operator is
/// expansive at the next order down, and dually an odd-order
/// contractive operator is contractive one order down.
inline TheoremVerdict verify_descent(const Matrix& t, const HermitianMatrix& p,
                                     int m) {
  detail::require_order(m, "verify_descent");
  const ClassReport cr = classify(t, p, m);
  const bool even = (m % 2 == 0);
  TheoremVerdict v;
  v.theorem_id = even ? TheoremId::PRO_01 : TheoremId::PRO_00;
  v.hypotheses_hold = even ? cr.expansive : cr.contractive;
  const ClassMargin& top = cr.margins.back();
  v.residuals.emplace_back("hypothesis_defect_min_eig", top.min_eig);
  v.residuals.emplace_back("hypothesis_defect_max_eig", top.max_eig);
  double lo = 0.0, hi = 0.0;
  if (m >= 2) {
    lo = cr.margins[size_t(m - 2)].min_eig;
    hi = cr.margins[size_t(m - 2)].max_eig;
  } else {
    // The order-zero defect is P itself.
    const HermitianEig pe = hermitian_eig(p);
    lo = pe.eigenvalues(0);
    hi = pe.eigenvalues(pe.eigenvalues.size() - 1);
  }
  v.residuals.emplace_back("conclusion_defect_min_eig", lo);
  v.residuals.emplace_back("conclusion_defect_max_eig", hi);
  if (v.hypotheses_hold)
    v.conclusion_holds =
        even ? detail::expansive_at(cr, m - 1) : detail::contractive_at(cr, m - 1);
  return v;
}

/// A power bounded operator that is expansive (contractive) at order m
/// is hyperexpansive (hypercontractive) at that order: every level of
/// the defect ladder has the same sign.
inline TheoremVerdict verify_power_bounded_hyper(const Matrix& t,
                                                 const HermitianMatrix& p,
                                                 int m) {
  detail::require_order(m, "verify_power_bounded_hyper");
  const ClassReport cr = classify(t, p, m);
  const StabilityReport st = stability(t);
  const bool hyp_exp = st.power_bounded && cr.expansive;
  const bool hyp_con = st.power_bounded && cr.contractive;
  TheoremVerdict v;
  v.theorem_id = TheoremId::THM_30;
  v.hypotheses_hold = hyp_exp || hyp_con;
  double worst_max = cr.margins[0].max_eig, worst_min = cr.margins[0].min_eig;
  for (const ClassMargin& mg : cr.margins) {
    worst_max = std::max(worst_max, mg.max_eig);
    worst_min = std::min(worst_min, mg.min_eig);
  }
  v.residuals.emplace_back("worst_level_max_eig", worst_max);
  v.residuals.emplace_back("worst_level_min_eig", worst_min);
  v.residuals.emplace_back("sup_norm_estimate", st.sup_norm_estimate);
  if (v.hypotheses_hold)
    v.conclusion_holds = (!hyp_exp || cr.hyperexpansive) &&
                         (!hyp_con || cr.hypercontractive);
  return v;
}

/// Power bounded + expansive forces similarity to a unitary.  Checked
/// as four facts: a similarity witness exists, an invariant metric Q
/// exists, orbits are bounded below (no vector is flattened), and the
/// norm induced by Q makes T an exact isometry (all higher defects of
/// Q vanish on sample vectors).  The two theorem ids share this
/// implication; the id parameter only labels the verdict.
inline TheoremVerdict verify_similarity(const Matrix& t,
                                        const HermitianMatrix& p, int m,
                                        TheoremId id = TheoremId::THM_31) {
  detail::require_order(m, "verify_similarity");
  if (id != TheoremId::THM_31 && id != TheoremId::THM_32)
    throw contract_violation("verify_similarity: id must be THM_31 or THM_32");
  const ClassReport cr = classify(t, p, m);
  const StabilityReport st = stability(t);
  TheoremVerdict v;
  v.theorem_id = id;
  v.hypotheses_hold = st.power_bounded && cr.expansive;
  v.residuals.emplace_back("hypothesis_defect_max_eig",
                           cr.margins.back().max_eig);
  double sim_res = -1.0, met_res = -1.0, cond = -1.0, equiv = -1.0;
  if (v.hypotheses_hold) {
    const std::optional<SimilarityWitness> sw = similar_to_unitary(t);
    const std::optional<InvariantMetric> im = invariant_metric(t);
    if (sw) { sim_res = sw->residual; cond = sw->transform_condition; }
    if (im) met_res = im->residual;
    bool equiv_ok = false;
    if (im) {
      // Alternating binomial sums of ||T^j x||_Q^2 vanish for an exact
      // Q-isometry; check a few deterministic sample vectors.
      const Matrix& q = im->q.mat();
      const std::vector<Matrix> pw = detail::power_cache(t, 4);
      Rng xr(derive_seed(0x5a3d0c9bULL, 0, 0));
      double worst = 0.0;
      for (int rep = 0; rep < 8; ++rep) {
        Vector x(t.rows());
        for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = xr.cgauss();
        x /= x.norm();
        std::vector<double> qnorm(5);
        for (int j = 0; j <= 4; ++j) {
          const Vector y = pw[size_t(j)] * x;
          qnorm[size_t(j)] = (y.adjoint() * q * y)(0).real();
        }
        for (int n = 1; n <= 4; ++n) {
          double s = 0.0, mass = 0.0;
          for (int j = 0; j <= n; ++j) {
            const double c = double(binomial(n, j)) * qnorm[size_t(j)];
            s += (j % 2 == 0) ? c : -c;
            mass += std::abs(c);
          }
          worst = std::max(worst, std::abs(s) / rel_scale(mass));
        }
      }
      equiv = worst;
      equiv_ok = worst <= tolerances().equiv_norm;
    }
    v.conclusion_holds = sw.has_value() && im.has_value() && st.c1_dot && equiv_ok;
    if (sw) {
      v.witness.emplace_back("transform", sw->transform);
      v.witness.emplace_back("target", sw->target);
    }
    if (im) v.witness.emplace_back("invariant_metric", im->q.mat());
  }
  v.residuals.emplace_back("similarity_residual", sim_res);
  v.residuals.emplace_back("transform_condition", cond);
  v.residuals.emplace_back("metric_residual", met_res);
  v.residuals.emplace_back("equivalent_norm_defect", equiv);
  v.residuals.emplace_back("c1_dot", st.c1_dot ? 1.0 : 0.0);
  return v;
}

/// Power bounded + contractive: the extracted operator C has norm at
/// most one, and the space splits into a decaying part and a part on
/// which T acts like a unitary.
inline TheoremVerdict verify_contractive_split(const Matrix& t,
                                               const HermitianMatrix& p,
                                               int m) {
  detail::require_order(m, "verify_contractive_split");
  const ClassReport cr = classify(t, p, m);
  const StabilityReport st = stability(t);
  TheoremVerdict v;
  v.theorem_id = TheoremId::THM_310;
  v.hypotheses_hold = st.power_bounded && cr.contractive;
  v.residuals.emplace_back("hypothesis_defect_min_eig",
                           cr.margins.back().min_eig);
  double cnorm = -1.0, r_inner = -1.0, inv_res = -1.0, peri_dim = -1.0;
  if (v.hypotheses_hold) {
    const Matrix c = contraction_extract(t, p);
    cnorm = two_norm(c);
    const bool norm_ok = cnorm <= 1.0 + tolerances().contraction_norm;
    const SpectralSplit split = kerchy_split(t);
    r_inner = split.inner_block.rows() > 0 ? spectral_radius(split.inner_block)
                                           : 0.0;
    const bool inner_ok = r_inner < 1.0;
    const bool peri_ok =
        similar_to_unitary(split.peripheral_block).has_value();
    inv_res = split.invariance_residual;
    const bool inv_ok =
        inv_res <= tolerances().structure_residual * rel_scale(two_norm(t));
    peri_dim = double(split.peripheral_basis.cols());
    v.conclusion_holds = norm_ok && inner_ok && peri_ok && inv_ok;
    v.witness.emplace_back("contraction", c);
    v.witness.emplace_back("inner_basis", split.inner_basis);
    v.witness.emplace_back("peripheral_basis", split.peripheral_basis);
  }
  v.residuals.emplace_back("contraction_norm", cnorm);
  v.residuals.emplace_back("inner_spectral_radius", r_inner);
  v.residuals.emplace_back("invariance_residual", inv_res);
  v.residuals.emplace_back("peripheral_dim", peri_dim);
  return v;
}

/// Location of the spectrum of an expansive operator: inside nothing.
/// Every eigenvalue has modulus at least one; at even orders the
/// spectrum is pinned to the unit circle.
inline TheoremVerdict verify_spectral_inclusion(const Matrix& t,
                                                const HermitianMatrix& p,
                                                int m) {
  detail::require_order(m, "verify_spectral_inclusion");
  const ClassReport cr = classify(t, p, m);
  TheoremVerdict v;
  v.theorem_id = TheoremId::SPECTRAL_INCLUSION;
  v.hypotheses_hold = cr.expansive;
  const Vector lam = eigenvalues_of(t);
  double lo = std::abs(lam(0)), hi = lo;
  for (Eigen::Index i = 1; i < lam.size(); ++i) {
    lo = std::min(lo, std::abs(lam(i)));
    hi = std::max(hi, std::abs(lam(i)));
  }
  v.residuals.emplace_back("min_modulus", lo);
  v.residuals.emplace_back("max_modulus", hi);
  if (v.hypotheses_hold) {
    const double band = tolerances().spectral_band;
    v.conclusion_holds = (m % 2 == 0)
                             ? (lo >= 1.0 - band && hi <= 1.0 + band)
                             : (lo >= 1.0 - band);
  }
  return v;
}

/// An expansive operator is invertible; equivalently, zero can never be
/// a pole of its resolvent, so a singular one would contradict the
/// hypothesis.
inline TheoremVerdict verify_invertibility(const Matrix& t,
                                           const HermitianMatrix& p, int m) {
  detail::require_order(m, "verify_invertibility");
  const ClassReport cr = classify(t, p, m);
  TheoremVerdict v;
  v.theorem_id = TheoremId::NO_SINGULAR_DRAZIN;
  v.hypotheses_hold = cr.expansive;
  const InvertibilityReport rep = invertibility_check(t);
  v.residuals.emplace_back("sigma_min", rep.sigma_min);
  v.residuals.emplace_back("zero_is_pole_order", double(rep.zero_is_pole_order));
  if (v.hypotheses_hold) v.conclusion_holds = rep.invertible;
  return v;
}

/// Structure of an expansive operator with spectral radius one: it is a
/// unitary perturbed by a commuting nilpotent, it is isometric at order
/// 2n-1 where n is the nilpotency index, and n is at least (m0+1)/2 for
/// the least odd expansive order m0.  Stated for the identity metric.
inline TheoremVerdict verify_algebraic_structure(const Matrix& t,
                                                 const HermitianMatrix& p,
                                                 int m) {
  detail::require_order(m, "verify_algebraic_structure");
  require_same_dim(t, p.mat(), "verify_algebraic_structure");
  const Eigen::Index n_dim = t.rows();
  const Matrix eye = Matrix::Identity(n_dim, n_dim);
  if ((p.mat() - eye).norm() > tolerances().psd * rel_scale(std::sqrt(double(n_dim))))
    throw contract_violation(
        "verify_algebraic_structure: stated for the identity metric only");
  const HermitianMatrix pid(eye);
  const ClassReport cr = classify(t, pid, m);
  const double radius = spectral_radius(t);
  int m0 = 0;
  for (int odd = 1; odd <= m; odd += 2)
    if (detail::expansive_at(cr, odd)) { m0 = odd; break; }
  TheoremVerdict v;
  v.theorem_id = TheoremId::THM_10;
  v.hypotheses_hold =
      cr.expansive && radius <= 1.0 + tolerances().spectral_band && m0 > 0;
  v.residuals.emplace_back("spectral_radius", radius);
  v.residuals.emplace_back("least_odd_expansive_order", double(m0));
  double u_res = -1.0, c_res = -1.0, n_index = -1.0, proof_margin = -1.0;
  double power_form = -1.0;
  if (v.hypotheses_hold) {
    const DunfordPair dp = dunford_decompose(t);
    const Matrix gram = dp.semisimple.adjoint() * dp.semisimple;
    u_res = (gram - eye).norm();
    const bool unitary_ok =
        u_res <= tolerances().structure_residual * rel_scale(gram.norm());
    const Matrix comm = dp.semisimple * dp.nilpotent - dp.nilpotent * dp.semisimple;
    c_res = comm.norm();
    const bool commute_ok =
        c_res <= tolerances().structure_residual *
                     rel_scale(dp.semisimple.norm() * dp.nilpotent.norm());
    const int n = dp.nilpotency_index;
    n_index = double(n);
    const bool isometric_ok = classify(t, pid, 2 * n - 1).isometric;
    // The stated bound n >= (m0+1)/2 gates the conclusion.  The
    // equivalent power form, nonvanishing of N^k for every
    // k <= (m0-1)/2, is recorded alongside it but does not gate.
    proof_margin = double(n) - double(m0 + 1) / 2.0;
    const bool order_ok = proof_margin >= 0.0;
    for (int k = 1; 2 * k <= m0 - 1; ++k) {
      const double pk = detail::power_cache(dp.nilpotent, k)[size_t(k)].norm();
      if (power_form < 0.0 || pk < power_form) power_form = pk;
    }
    v.conclusion_holds = unitary_ok && commute_ok && isometric_ok && order_ok;
    v.witness.emplace_back("semisimple", dp.semisimple);
    v.witness.emplace_back("nilpotent", dp.nilpotent);
  }
  v.residuals.emplace_back("unitary_residual", u_res);
  v.residuals.emplace_back("commutator_residual", c_res);
  v.residuals.emplace_back("nilpotency_index", n_index);
  v.residuals.emplace_back("order_margin", proof_margin);
  v.residuals.emplace_back("min_nilpotent_power_norm", power_form);
  return v;
}

/// An invertible expansive operator whose Gram matrix dominates the
/// identity is alternatingly expansive: the defect ladder alternates
/// sign levelwise.
inline TheoremVerdict verify_alternating(const Matrix& t,
                                         const HermitianMatrix& p, int m) {
  detail::require_order(m, "verify_alternating");
  const ClassReport cr = classify(t, p, m);
  const InvertibilityReport iv = invertibility_check(t);
  const Matrix gram =
      t.adjoint() * t - Matrix::Identity(t.rows(), t.cols());
  const PsdVerdict gram_psd = psd_check(HermitianMatrix(gram));
  TheoremVerdict v;
  v.theorem_id = TheoremId::PRO_11;
  v.hypotheses_hold = iv.invertible && cr.expansive && gram_psd.is_psd;
  v.residuals.emplace_back("sigma_min", iv.sigma_min);
  v.residuals.emplace_back("gram_min_eig", gram_psd.min_eig);
  v.residuals.emplace_back("hypothesis_defect_max_eig",
                           cr.margins.back().max_eig);
  if (v.hypotheses_hold) v.conclusion_holds = cr.alternatingly_expansive;
  return v;
}

/// The closing example: T = alpha I + 0 on a split space, with a block
/// metric.  At even orders (any alpha), and at odd orders when
/// |alpha| <= 1, T is contractive yet singular with zero a pole of
/// order one, so contractive operators need not be invertible.
inline TheoremVerdict verify_remark(Complex alpha, int m,
                                    const HermitianMatrix& p1,
                                    const HermitianMatrix& p2) {
  detail::require_order(m, "verify_remark");
  if (!is_positive_invertible(p1) || !is_positive_invertible(p2))
    throw domain_error("verify_remark: both metric blocks must be positive");
  const Eigen::Index k = p1.dim(), j = p2.dim();
  Matrix t = Matrix::Zero(k + j, k + j);
  t.topLeftCorner(k, k) = alpha * Matrix::Identity(k, k);
  Matrix pm = Matrix::Zero(k + j, k + j);
  pm.topLeftCorner(k, k) = p1.mat();
  pm.bottomRightCorner(j, j) = p2.mat();
  const HermitianMatrix p(pm);
  TheoremVerdict v;
  v.theorem_id = TheoremId::REMARK_CONTRACTIVE;
  const double mod = std::abs(alpha);
  v.hypotheses_hold = (m % 2 == 0) || mod <= 1.0 + 1e-12;
  v.residuals.emplace_back("alpha_modulus", mod);
  double lo = -1.0, pole = -1.0;
  if (v.hypotheses_hold) {
    const ClassReport cr = classify(t, p, m);
    const InvertibilityReport iv = invertibility_check(t);
    lo = cr.margins.back().min_eig;
    pole = double(iv.zero_is_pole_order);
    v.conclusion_holds = cr.contractive && iv.zero_is_pole_order >= 1;
    v.witness.emplace_back("operator", t);
  }
  v.residuals.emplace_back("defect_min_eig", lo);
  v.residuals.emplace_back("zero_is_pole_order", pole);
  return v;
}

/// Which family each implication's hypotheses are engineered by; the
/// fuzzer's vacuity accounting is checked against this map.
inline Generator targeted_family(TheoremId id) {
  switch (id) {
    case TheoremId::PRO_00:
    case TheoremId::PRO_01:
    case TheoremId::THM_30:
    case TheoremId::THM_31:
    case TheoremId::THM_32:
    case TheoremId::SPECTRAL_INCLUSION:
      return Generator::unitary;
    case TheoremId::THM_310:
      return Generator::direct_sum;
    case TheoremId::NO_SINGULAR_DRAZIN:
    case TheoremId::PRO_11:
    case TheoremId::REMARK_CONTRACTIVE:
      return Generator::scaled_identity;
    case TheoremId::THM_10:
      return Generator::jordan;
  }
  return Generator::unitary;
}

struct FuzzConfig {
  long trials = 1000;
  std::uint64_t seed = 42;
  int dim_min = 2;
  int dim_max = 6;
  int m_min = 1;
  int m_max = 6;
  std::vector<Generator> families{kAllGenerators.begin(), kAllGenerators.end()};
  int max_stored_counterexamples = 25;
};

struct TheoremCounts {
  long evaluated = 0;
  long applicable = 0;
  long passed = 0;
  long counterexamples = 0;
};

/// Everything needed to replay a failed evaluation bit-exactly.
struct Counterexample {
  InstanceSpec spec;
  int m = 0;
  TheoremVerdict verdict;
  Matrix op;
  Matrix metric;
  Tolerances tolerances;
};

struct FuzzSummary {
  FuzzConfig config;
  std::array<TheoremCounts, kTheoremCount> totals{};
  std::map<Generator, std::array<TheoremCounts, kTheoremCount>> by_family;
  std::vector<Counterexample> counterexamples;
  long total_counterexamples = 0;

  const TheoremCounts& for_theorem(TheoremId id) const {
    return totals[size_t(id)];
  }
  double applicability(Generator g, TheoremId id) const {
    const auto it = by_family.find(g);
    if (it == by_family.end()) return 0.0;
    const TheoremCounts& c = it->second[size_t(id)];
    return c.evaluated == 0 ? 0.0 : double(c.applicable) / double(c.evaluated);
  }
};

namespace detail {

inline void record_verdict(FuzzSummary& summary, const FuzzConfig& config,
                           const InstanceSpec& spec, int m,
                           const Instance& inst, TheoremVerdict&& verdict) {
  const size_t idx = size_t(verdict.theorem_id);
  TheoremCounts& total = summary.totals[idx];
  TheoremCounts& fam = summary.by_family[spec.generator][idx];
  ++total.evaluated;
  ++fam.evaluated;
  if (!verdict.hypotheses_hold) return;
  ++total.applicable;
  ++fam.applicable;
  if (verdict.conclusion_holds.value_or(false)) {
    ++total.passed;
    ++fam.passed;
    return;
  }
  ++total.counterexamples;
  ++fam.counterexamples;
  ++summary.total_counterexamples;
  if (long(summary.counterexamples.size()) < config.max_stored_counterexamples)
    summary.counterexamples.push_back(Counterexample{
        spec, m, std::move(verdict), inst.op, inst.metric.mat(), tolerances()});
}

}  // namespace detail

/// Runs every verifier against seeded random instances from each
/// family, at every order in the configured range, and tallies
/// applicable / passed / failed per theorem and per family.  The
/// entire run is a pure function of the config.
inline FuzzSummary fuzz(const FuzzConfig& config) {
  if (config.trials < 1)
    throw contract_violation("fuzz: trials must be >= 1");
  if (config.dim_min < 2 || config.dim_max > 8 || config.dim_min > config.dim_max)
    throw contract_violation("fuzz: dim range must lie in 2..8");
  if (config.m_min < 1 || config.m_min > config.m_max)
    throw contract_violation("fuzz: order range must start at 1 or above");
  FuzzSummary summary;
  summary.config = config;
  for (Generator family : config.families)
    summary.by_family.emplace(family,
                              std::array<TheoremCounts, kTheoremCount>{});
  for (Generator family : config.families) {
    const std::uint64_t fam_idx = static_cast<std::uint64_t>(family);
    for (long trial = 0; trial < config.trials; ++trial) {
      Rng draw(derive_seed(config.seed, 100 + fam_idx,
                           static_cast<std::uint64_t>(trial)));
      InstanceSpec spec;
      spec.dim = draw.unif_int(config.dim_min, config.dim_max);
      spec.generator = family;
      spec.seed = derive_seed(config.seed, fam_idx,
                              static_cast<std::uint64_t>(trial));
      spec.metric = draw.unif() < 0.5 ? MetricKind::identity
                                      : MetricKind::random_positive;
      const Instance inst = make_instance(spec);
      const HermitianMatrix pid(Matrix::Identity(spec.dim, spec.dim));
      // Scalar and block metrics for the closing-remark example, drawn
      // once per trial from the same deterministic stream.
      const double c = kScalePalette[size_t(
          draw.unif_int(0, int(kScalePalette.size()) - 1))];
      const Complex alpha = c * draw.phase();
      const int k_dim = (spec.dim + 1) / 2;
      const int j_dim = spec.dim - k_dim;
      const HermitianMatrix rp1(
          spec.metric == MetricKind::identity
              ? Matrix(Matrix::Identity(k_dim, k_dim))
              : draw.positive_definite(k_dim, 0.5, 2.0));
      const HermitianMatrix rp2(
          spec.metric == MetricKind::identity
              ? Matrix(Matrix::Identity(j_dim, j_dim))
              : draw.positive_definite(j_dim, 0.5, 2.0));
      for (int m = config.m_min; m <= config.m_max; ++m) {
        const auto record = [&](TheoremVerdict&& v) {
          detail::record_verdict(summary, config, spec, m, inst, std::move(v));
        };
        record(verify_descent(inst.op, inst.metric, m));
        record(verify_power_bounded_hyper(inst.op, inst.metric, m));
        TheoremVerdict sim =
            verify_similarity(inst.op, inst.metric, m, TheoremId::THM_31);
        TheoremVerdict sim2 = sim;
        sim2.theorem_id = TheoremId::THM_32;
        record(std::move(sim));
        record(std::move(sim2));
        record(verify_contractive_split(inst.op, inst.metric, m));
        record(verify_spectral_inclusion(inst.op, inst.metric, m));
        record(verify_invertibility(inst.op, inst.metric, m));
        record(verify_algebraic_structure(inst.op, pid, m));
        record(verify_alternating(inst.op, inst.metric, m));
        record(verify_remark(alpha, m, rp1, rp2));
      }
    }
  }
  return summary;
}

}  // namespace opdefect
