#include <catch2/catch_amalgamated.hpp>

#include "opdefect/opdefect.hpp"

using namespace opdefect;

TEST_CASE("generator names round-trip through the string mapping") {
  for (const Generator g : kAllGenerators) {
    const auto back = generator_from_string(to_string(g));
    REQUIRE(back.has_value());
    CHECK(*back == g);
  }
  CHECK_FALSE(generator_from_string("nope").has_value());
  CHECK(metric_kind_from_string("identity") == MetricKind::identity);
  CHECK(metric_kind_from_string("random_positive") ==
        MetricKind::random_positive);
}

TEST_CASE("make_instance is deterministic for a fixed spec") {
  for (const Generator g : kAllGenerators) {
    InstanceSpec spec;
    spec.dim = 4;
    spec.generator = g;
    spec.seed = 99;
    spec.metric = MetricKind::random_positive;
    const Instance a = make_instance(spec);
    const Instance b = make_instance(spec);
    CHECK((a.op - b.op).norm() == 0.0);
    CHECK((a.metric.mat() - b.metric.mat()).norm() == 0.0);
    spec.seed = 100;
    const Instance c = make_instance(spec);
    CHECK((a.op - c.op).norm() != 0.0);
  }
}

TEST_CASE("make_instance enforces the dimension contract") {
  InstanceSpec spec;
  spec.generator = Generator::ginibre;
  spec.dim = 1;
  CHECK_THROWS_AS(make_instance(spec), contract_violation);
  spec.dim = 9;
  CHECK_THROWS_AS(make_instance(spec), contract_violation);
}

TEST_CASE("ginibre instances are strict contractions") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    InstanceSpec spec;
    spec.dim = 5;
    spec.generator = Generator::ginibre;
    spec.seed = seed;
    const double norm = two_norm(make_instance(spec).op);
    CHECK(norm >= 0.05 - 1e-12);
    CHECK(norm <= 0.3 + 1e-12);
  }
}

TEST_CASE("unitary instances are unitary with a compatible metric") {
  InstanceSpec spec;
  spec.dim = 4;
  spec.generator = Generator::unitary;
  spec.seed = 3;
  spec.metric = MetricKind::random_positive;
  const Instance inst = make_instance(spec);
  CHECK((inst.op.adjoint() * inst.op - Matrix::Identity(4, 4)).norm() <
        1e-12);
  // The metric is built to satisfy the isometry relation exactly.
  CHECK((inst.op.adjoint() * inst.metric.mat() * inst.op -
         inst.metric.mat())
            .norm() < 1e-10);
  CHECK(is_positive_invertible(inst.metric));
}

TEST_CASE("identity metric kind always yields the identity") {
  InstanceSpec spec;
  spec.dim = 3;
  spec.generator = Generator::ginibre;
  spec.seed = 17;
  spec.metric = MetricKind::identity;
  const Instance inst = make_instance(spec);
  CHECK((inst.metric.mat() - Matrix::Identity(3, 3)).norm() == 0.0);
}

TEST_CASE("jordan instances at dim 2 are the block at one up to phases") {
  // Deterministic up to diagonal-phase conjugation: ones on the
  // diagonal, a unimodular superdiagonal, zero below.
  InstanceSpec spec;
  spec.dim = 2;
  spec.generator = Generator::jordan;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    spec.seed = seed;
    const Matrix t = make_instance(spec).op;
    CHECK(std::abs(t(0, 0) - Complex(1, 0)) < 1e-12);
    CHECK(std::abs(t(1, 1) - Complex(1, 0)) < 1e-12);
    CHECK_THAT(std::abs(t(0, 1)), Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK(std::abs(t(1, 0)) < 1e-15);
    // Still the canonical chain: nilpotency index two at eigenvalue one.
    const DunfordPair d = dunford_decompose(t);
    CHECK(d.nilpotency_index == 2);
  }
}

TEST_CASE("jordan instances at higher dims have unimodular spectrum") {
  InstanceSpec spec;
  spec.dim = 5;
  spec.generator = Generator::jordan;
  spec.seed = 8;
  const Matrix t = make_instance(spec).op;
  const Vector ev = eigenvalues_of(t);
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    CHECK_THAT(std::abs(ev(i)), Catch::Matchers::WithinAbs(1.0, 1e-9));
}

TEST_CASE("scaled identity instances take values from the palette") {
  InstanceSpec spec;
  spec.dim = 3;
  spec.generator = Generator::scaled_identity;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    spec.seed = seed;
    const Matrix t = make_instance(spec).op;
    const Complex alpha = t(0, 0);
    CHECK((t - alpha * Matrix::Identity(3, 3)).norm() < 1e-15);
    bool in_palette = false;
    for (const double c : kScalePalette)
      in_palette = in_palette ||
                   std::abs(std::abs(alpha) - c) < 1e-12;
    CHECK(in_palette);
  }
}

TEST_CASE("unitary plus commuting nilpotent instances decompose cleanly") {
  InstanceSpec spec;
  spec.dim = 4;
  spec.generator = Generator::unitary_plus_commuting_nilpotent;
  spec.seed = 5;
  const Matrix t = make_instance(spec).op;
  const DunfordPair d = dunford_decompose(t);
  // Semisimple part has unimodular spectrum; parts commute by construction.
  const Vector ev = eigenvalues_of(d.semisimple);
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    CHECK_THAT(std::abs(ev(i)), Catch::Matchers::WithinAbs(1.0, 1e-9));
  CHECK((d.semisimple * d.nilpotent - d.nilpotent * d.semisimple).norm() <
        1e-9);
}

TEST_CASE("direct sum instances split under kerchy_split") {
  InstanceSpec spec;
  spec.dim = 5;
  spec.generator = Generator::direct_sum;
  spec.seed = 12;
  const Matrix t = make_instance(spec).op;
  const SpectralSplit split = kerchy_split(t);
  CHECK(split.inner_basis.cols() >= 1);
  CHECK(split.peripheral_basis.cols() >= 1);
  CHECK(split.inner_basis.cols() + split.peripheral_basis.cols() == 5);
  CHECK(split.invariance_residual < 1e-9);
}
