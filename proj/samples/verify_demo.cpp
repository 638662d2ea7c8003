// Runs every theorem verifier against a Jordan block and then a short
// randomized search, printing the per-theorem verdict counts.

#include <cstdio>

#include "opdefect/opdefect.hpp"

using namespace opdefect;

namespace {

const char* verdict_text(const TheoremVerdict& v) {
  if (!v.hypotheses_hold) return "not-applicable";
  return *v.conclusion_holds ? "holds" : "VIOLATED";
}

}  // namespace

int main() {
  Matrix t(2, 2);
  t << Complex(1, 0), Complex(1, 0), Complex(0, 0), Complex(1, 0);
  const HermitianMatrix eye(Matrix::Identity(2, 2));

  std::printf("Jordan block at 1, identity metric, order m = 3:\n");
  const TheoremVerdict checks[] = {
      verify_descent(t, eye, 3),
      verify_power_bounded_hyper(t, eye, 3),
      verify_similarity(t, eye, 3),
      verify_contractive_split(t, eye, 3),
      verify_spectral_inclusion(t, eye, 3),
      verify_invertibility(t, eye, 3),
      verify_algebraic_structure(t, eye, 3),
      verify_alternating(t, eye, 3),
  };
  for (const TheoremVerdict& v : checks)
    std::printf("  %-22s %s\n", to_string(v.theorem_id), verdict_text(v));

  std::printf("\nrandomized search, 50 trials per family:\n");
  FuzzConfig cfg;
  cfg.trials = 50;
  cfg.seed = 2024;
  const FuzzSummary s = fuzz(cfg);
  for (const TheoremId id : kAllTheorems) {
    const TheoremCounts c = s.for_theorem(id);
    std::printf("  %-22s applicable %5ld / %5ld, counterexamples %ld\n",
                to_string(id), c.applicable, c.evaluated, c.counterexamples);
  }
  std::printf("total counterexamples: %ld\n", s.total_counterexamples);
  return s.total_counterexamples == 0 ? 0 : 1;
}
