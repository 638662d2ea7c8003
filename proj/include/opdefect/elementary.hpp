#pragma once

#include <vector>

#include "opdefect/linalg.hpp"

namespace opdefect {

/// Largest defect order supported.  C(60, 30) still fits an unsigned
/// 128-bit integer (and in fact a 64-bit one) exactly.
inline constexpr int kMaxDefectOrder = 60;

/// Binomial coefficient C(m, j), computed in exact integer arithmetic
/// and rounded once on conversion to double.
inline double binomial(int m, int j) {
  if (m < 0 || m > kMaxDefectOrder)
    throw contract_violation("binomial: order out of range");
  if (j < 0 || j > m) return 0.0;
  unsigned __int128 c = 1;
  for (int i = 1; i <= j; ++i) {
    c *= static_cast<unsigned>(m - j + i);
    c /= static_cast<unsigned>(i);
  }
  return static_cast<double>(c);
}

namespace detail {

/// [I, M, M^2, ..., M^maxexp] by repeated multiplication.  Keeping the
/// powers as literal products (never through an eigendecomposition)
/// preserves exact zeros for nilpotent inputs.
inline std::vector<Matrix> power_cache(const Matrix& m, int maxexp) {
  std::vector<Matrix> p;
  p.reserve(static_cast<size_t>(maxexp) + 1);
  p.push_back(Matrix::Identity(m.rows(), m.cols()));
  for (int j = 1; j <= maxexp; ++j) p.push_back(p.back() * m);
  return p;
}

struct DefectEvaluation {
  Matrix recurrence;  // Horner form: X_{t+1} = X_t - A X_t B
  Matrix binomial;    // sum_j (-1)^j C(m,j) A^j X B^j
  double term_mass;   // sum_j C(m,j) ||A^j X B^j||_F, the cancellation scale
};

inline DefectEvaluation defect_eval(const Matrix& a, const Matrix& b,
                                    const Matrix& x, int m) {
  DefectEvaluation out;
  out.recurrence = x;
  for (int t = 0; t < m; ++t)
    out.recurrence = out.recurrence - a * out.recurrence * b;
  const std::vector<Matrix> pa = power_cache(a, m);
  const std::vector<Matrix> pb = power_cache(b, m);
  out.binomial = Matrix::Zero(x.rows(), x.cols());
  out.term_mass = 0.0;
  for (int j = 0; j <= m; ++j) {
    const Matrix term = pa[static_cast<size_t>(j)] * x *
                        pb[static_cast<size_t>(j)];
    const double c = binomial(m, j);
    out.term_mass += c * term.norm();
    out.binomial += (j % 2 == 0 ? c : -c) * term;
  }
  return out;
}

inline void check_defect_inputs(const Matrix& a, const Matrix& b,
                                const Matrix& x, int m) {
  require_square(a, "defect");
  require_square(b, "defect");
  require_square(x, "defect");
  require_same_dim(a, b, "defect");
  require_same_dim(a, x, "defect");
  if (m < 0 || m > kMaxDefectOrder)
    throw contract_violation("defect: order m out of [0, 60]");
  if (!all_finite(a) || !all_finite(b) || !all_finite(x))
    throw contract_violation("defect: non-finite entry");
}

}  // namespace detail

/// m-fold defect of the pair (A, B) applied to X:
///
///   (I - L_A R_B)^m (X) = sum_{j=0}^{m} (-1)^j C(m,j) A^j X B^j.
///
/// Evaluated both as the literal binomial sum and in Horner form; the
/// two must agree within tolerance relative to the total term mass (the
/// scale at which the sum cancels).  The Horner value is returned, as it
/// loses less to cancellation when the defect is near zero.
inline Matrix defect(const Matrix& a, const Matrix& b, const Matrix& x,
                     int m) {
  detail::check_defect_inputs(a, b, x, m);
  const detail::DefectEvaluation ev = detail::defect_eval(a, b, x, m);
  const double gap = (ev.recurrence - ev.binomial).norm();
  if (gap > tolerances().defect_cross * rel_scale(ev.term_mass))
    throw consistency_error(
        "defect: binomial and Horner evaluations disagree");
  return ev.recurrence;
}

/// Sign-reversed defect (L_A R_B - I)^m (X).  Computed as
/// (-1)^m * defect(...): negation is exact in floating point, so the sign
/// identity between the two defects holds to the last bit.
inline Matrix tilde_defect(const Matrix& a, const Matrix& b, const Matrix& x,
                           int m) {
  const Matrix d = defect(a, b, x, m);
  return (m % 2 == 0) ? d : Matrix(-d);
}

/// Defect of the operator pair (T*, T) applied to a Hermitian metric.
/// The value is Hermitian in exact arithmetic; roundoff skew is removed
/// and bounded.
inline HermitianMatrix defect_hermitian(const Matrix& t,
                                        const HermitianMatrix& p, int m) {
  require_square(t, "defect_hermitian");
  require_same_dim(t, p.mat(), "defect_hermitian");
  return hermitize_checked(defect(t.adjoint(), t, p.mat(), m));
}

inline HermitianMatrix tilde_defect_hermitian(const Matrix& t,
                                              const HermitianMatrix& p,
                                              int m) {
  require_square(t, "tilde_defect_hermitian");
  require_same_dim(t, p.mat(), "tilde_defect_hermitian");
  return hermitize_checked(tilde_defect(t.adjoint(), t, p.mat(), m));
}

/// m-fold defect of the power pair (A^n, B^n) applied to X, with the
/// factorization
///
///   (I - L_A^n R_B^n)^m = (sum_{k<n} L_A^k R_B^k)^m (I - L_A R_B)^m
///
/// verified as an internal cross-check: the direct evaluation and the
/// factored one must agree within tolerance of the direct term mass.
inline Matrix power_pair_defect(const Matrix& a, const Matrix& b,
                                const Matrix& x, int m, int n) {
  detail::check_defect_inputs(a, b, x, m);
  if (n < 1)
    throw contract_violation("power_pair_defect: power n must be >= 1");
  const std::vector<Matrix> pa = detail::power_cache(a, n);
  const std::vector<Matrix> pb = detail::power_cache(b, n);
  const detail::DefectEvaluation direct =
      detail::defect_eval(pa[static_cast<size_t>(n)],
                          pb[static_cast<size_t>(n)], x, m);
  // Factored form: m-fold application of Y -> sum_{k<n} A^k Y B^k to the
  // m-fold defect of the base pair.
  Matrix factored = defect(a, b, x, m);
  for (int t = 0; t < m; ++t) {
    Matrix acc = Matrix::Zero(x.rows(), x.cols());
    for (int k = 0; k < n; ++k)
      acc += pa[static_cast<size_t>(k)] * factored * pb[static_cast<size_t>(k)];
    factored = acc;
  }
  const double gap = (direct.recurrence - factored).norm();
  if (gap > tolerances().power_pair * rel_scale(direct.term_mass))
    throw consistency_error(
        "power_pair_defect: direct and factored evaluations disagree");
  return direct.recurrence;
}

inline HermitianMatrix power_pair_defect_hermitian(const Matrix& t,
                                                   const HermitianMatrix& p,
                                                   int m, int n) {
  require_square(t, "power_pair_defect_hermitian");
  require_same_dim(t, p.mat(), "power_pair_defect_hermitian");
  return hermitize_checked(power_pair_defect(t.adjoint(), t, p.mat(), m, n));
}

/// The full ladder Delta^0(P), ..., Delta^m(P) for the pair (T*, T),
/// built by the defining recurrence values[t+1] = values[t] - T* values[t] T.
struct DefectSequence {
  Matrix a;  // T*
  Matrix b;  // T
  HermitianMatrix metric;
  int m;
  std::vector<HermitianMatrix> values;  // index t = 0..m
};

inline DefectSequence defect_sequence(const Matrix& t,
                                      const HermitianMatrix& p, int m) {
  require_square(t, "defect_sequence");
  require_same_dim(t, p.mat(), "defect_sequence");
  if (m < 0 || m > kMaxDefectOrder)
    throw contract_violation("defect_sequence: order m out of [0, 60]");
  DefectSequence seq{t.adjoint(), t, p, m, {}};
  seq.values.reserve(static_cast<size_t>(m) + 1);
  seq.values.push_back(p);
  Matrix cur = p.mat();
  for (int step = 0; step < m; ++step) {
    cur = cur - seq.a * cur * seq.b;
    seq.values.push_back(hermitize_checked(cur));
  }
  return seq;
}

}  // namespace opdefect
