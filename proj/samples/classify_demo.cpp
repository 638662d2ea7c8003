// Walks one operator through the classification pipeline: defect
// ladder, class membership, stability, and the invariant metric.

#include <cstdio>

#include "opdefect/opdefect.hpp"

using namespace opdefect;

int main() {
  // A weighted rotation: isometric in the right metric, but not in the
  // Euclidean one.
  Matrix t(2, 2);
  t << Complex(0, 0), Complex(2, 0), Complex(-0.5, 0), Complex(0, 0);

  std::printf("operator T = [[0, 2], [-1/2, 0]]\n\n");

  const HermitianMatrix eye(Matrix::Identity(2, 2));
  const ClassReport euclid = classify(t, eye, 2, "I");
  std::printf("in the Euclidean metric: expansive=%d contractive=%d\n",
              euclid.expansive, euclid.contractive);

  const auto im = invariant_metric(t);
  if (!im) {
    std::printf("no invariant metric found\n");
    return 1;
  }
  std::printf("invariant metric found, residual %.3g:\n", im->residual);
  for (int i = 0; i < 2; ++i)
    std::printf("  [%8.4f  %8.4f]\n", im->q.mat()(i, 0).real(),
                im->q.mat()(i, 1).real());

  const ClassReport natural = classify(t, im->q, 3, "Q");
  std::printf("\nin its own metric: isometric=%d (all defect levels vanish)\n",
              natural.isometric);
  for (const ClassMargin& mg : natural.margins)
    std::printf("  level %d: eigenvalues in [%.2e, %.2e]\n", mg.t, mg.min_eig,
                mg.max_eig);

  const StabilityReport st = stability(t);
  std::printf("\nstability: power_bounded=%d c1_dot=%d sup_n |T^n| = %.3f\n",
              st.power_bounded, st.c1_dot, st.sup_norm_estimate);

  const auto w = similar_to_unitary(t);
  if (w)
    std::printf("similar to a unitary via S with condition number %.3f\n",
                w->transform_condition);
  return 0;
}
