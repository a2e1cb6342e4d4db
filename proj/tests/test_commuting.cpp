#include <gtest/gtest.h>

#include <cmath>

#include "otk/commuting.hpp"
#include "otk/properties.hpp"
#include "otk/reproduce.hpp"

using namespace otk;

namespace {

const CMatrix kAndoT = CMatrix::from_rows({{0.9, 0.1}, {0.0, 0.3}});

double isometry_residual(const GrowingMap& g) { return op_norm(g.op.adjoint() * g.op - CMatrix::identity(g.op.cols())); }

}  // namespace

TEST(GrowingMaps, ShapesAndIsometry) {
  const CMatrix t = CMatrix::from_rows({{0.5, 0.2}, {0.1, 0.4}});
  const CMatrix d = defect_pair(t).d_t;
  const GrowingMap w = shift_map(t, d, 5, "W_T");
  EXPECT_EQ(w.in_slots, 5u);
  EXPECT_EQ(w.out_slots, 7u);
  EXPECT_EQ(w.op.rows(), 14u);
  EXPECT_LE(isometry_residual(w), 1e-12);
  // (x0, x1) -> (T x0, D x0, 0, x1).
  const CMatrix x0 = CMatrix::column({1.0, 0.0}), x1 = CMatrix::column({0.0, 1.0});
  CMatrix in = CMatrix::zeros(10, 1);
  in.set_block(0, 0, x0);
  in.set_block(2, 0, x1);
  const CMatrix out = w.op * in;
  EXPECT_LE(vnorm(out.block(0, 0, 2, 1) - t * x0), 1e-15);
  EXPECT_LE(vnorm(out.block(2, 0, 2, 1) - d * x0), 1e-15);
  EXPECT_LE(vnorm(out.block(4, 0, 2, 1)), 1e-15);
  EXPECT_LE(vnorm(out.block(6, 0, 2, 1) - x1), 1e-15);
  EXPECT_THROW(shift_map(t, d, 0, "W"), InputError);

  const GrowingMap g = group_map(CMatrix::identity(2) * Complex(0, 1), 9, "G");
  EXPECT_LE(unitarity_residual(g.op), 1e-15);
  EXPECT_EQ(g.op(2, 2), Complex(0, 1));   // slot 1
  EXPECT_EQ(g.op(10, 10), Complex(0, 1)); // slot 5
  EXPECT_EQ(g.op(4, 4), Complex(1, 0));   // slot 2
  EXPECT_THROW(compose(w, w, "bad"), InputError);
}

TEST(Ando, ResidualsForNegativeIdentity) {
  const CMatrix s = CMatrix::identity(2) * Complex(-1.0);
  const AndoBundle b = ando_pair(kAndoT, s, 13);
  EXPECT_LE(b.isometry_residual_t, 1e-9);
  EXPECT_LE(b.isometry_residual_a, 1e-9);
  EXPECT_LE(b.commutation_residual, 1e-9);
  EXPECT_LE(b.intertwining_residual, 1e-9);
  EXPECT_LE(b.defect_residual, 1e-9);
  EXPECT_LE(b.max_dilation_residual(), 1e-8);
  EXPECT_LE((b.a - s * kAndoT).max_abs(), 0.0);
  for (const auto& [k, g] : b.v_t) EXPECT_LE(isometry_residual(g), 1e-9) << k;
  for (const auto& [k, g] : b.v_a) EXPECT_LE(isometry_residual(g), 1e-9) << k;
  // Powers with n1 + n2 <= (m - 1) / 2 are covered.
  EXPECT_TRUE(b.dilation_residuals.count({3, 3}));
  EXPECT_TRUE(b.dilation_residuals.count({0, 6}));
}

TEST(Ando, NegativeIdentityWitness) {
  const CMatrix s = CMatrix::identity(2) * Complex(-1.0);
  const AndoBundle b = ando_pair(kAndoT, s, 13);
  ASSERT_TRUE(b.witness.has_value());
  const AndoWitness& w = *b.witness;
  EXPECT_NEAR(w.beta, -1.0, 1e-9);
  EXPECT_NEAR(w.eta, 1.0 / std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(w.zeta, 1.0 / std::sqrt(2.0), 1e-9);
  EXPECT_LE(std::abs(w.inner_product), 1e-7);
  EXPECT_LE(w.closed_form_residual, 1e-9);
  EXPECT_LE(w.scalar_identity_residual, 1e-12);
  EXPECT_NEAR(vnorm(w.y), 1.0, 1e-12);
  EXPECT_EQ(is_bj_orthogonal(kAndoT, kAndoT * Complex(-1.0)).orthogonal, Tri::False);
  EXPECT_EQ(is_bj_orthogonal(kAndoT * Complex(-1.0), kAndoT).orthogonal, Tri::False);
}

TEST(Ando, IdentityHasNoWitness) {
  const AndoBundle b = ando_pair(kAndoT, CMatrix::identity(2), 9);
  EXPECT_FALSE(b.witness.has_value());
  EXPECT_LE(b.max_dilation_residual(), 1e-8);
  EXPECT_LE(b.commutation_residual, 1e-9);
}

TEST(Ando, RotationCrossingTheAxis) {
  const double th = 3 * M_PI / 4;
  const CMatrix s = CMatrix::diag({std::polar(1.0, th), std::polar(1.0, -th)});
  const CMatrix t = CMatrix::diag({0.7, Complex(0.2, 0.4)});
  const AndoBundle b = ando_pair(t, s, 13);
  ASSERT_TRUE(b.witness.has_value());
  EXPECT_NEAR(b.witness->beta, std::cos(th), 1e-9);
  EXPECT_LE(std::abs(b.witness->inner_product), 1e-7);
  EXPECT_LE(std::abs(b.witness->inner_product - b.witness->closed_form), 1e-9);
}

TEST(Ando, Errors) {
  const CMatrix s = CMatrix::identity(2) * Complex(-1.0);
  EXPECT_THROW(ando_pair(kAndoT, s, 12), InputError);
  EXPECT_THROW(ando_pair(kAndoT, s, 5), InputError);
  EXPECT_THROW(ando_pair(kAndoT, s * Complex(0.5), 9), PreconditionError);
  const CMatrix swap = CMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
  EXPECT_THROW(ando_pair(kAndoT, swap, 9), PreconditionError);
  EXPECT_THROW(ando_pair(CMatrix::identity(2) * Complex(1.5), s, 9), PreconditionError);
}

TEST(Ando, DisplayedLeadingTermsOfVA) {
  // V_A (x0, x1, 0, ...) = (A x0, D x0, 0, S x1, ...).
  Rng rng(3);
  auto [s, t] = sample::commuting_pair(rng, 2);
  const AndoBundle b = ando_pair(t, s, 9);
  const GrowingMap& va = b.v_a.at(9);
  const CMatrix x0 = rng.unit_vector(2), x1 = rng.unit_vector(2);
  CMatrix in = CMatrix::zeros(18, 1);
  in.set_block(0, 0, x0);
  in.set_block(2, 0, x1);
  const CMatrix out = va.op * in;
  EXPECT_LE(vnorm(out.block(0, 0, 2, 1) - b.a * x0), 1e-12);
  EXPECT_LE(vnorm(out.block(2, 0, 2, 1) - b.d_t * x0), 1e-12);
  EXPECT_LE(vnorm(out.block(4, 0, 2, 1)), 1e-12);
  EXPECT_LE(vnorm(out.block(6, 0, 2, 1) - s * x1), 1e-12);
}

TEST(StCriterion, Examples) {
  const CMatrix s = CMatrix::identity(2) * Complex(-1.0);
  const OrthVerdict v = schaffer_ST_criterion(kAndoT, s);
  EXPECT_EQ(v.orthogonal, Tri::True);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_LE(v.inner_product_at_witness.real(), 1e-7);
  EXPECT_EQ(halmos_orth_criterion(kAndoT, s * kAndoT).orthogonal, Tri::True);

  EXPECT_EQ(schaffer_ST_criterion(CMatrix::zeros(2, 2), Rng(5).unitary(2)).orthogonal, Tri::False);
  EXPECT_THROW(schaffer_ST_criterion(kAndoT, s * Complex(2.0)), PreconditionError);
}

TEST(Brehmer, DiagonalExample) {
  const BrehmerReport r = brehmer_check(examples::diag10(), examples::diag1half());
  EXPECT_TRUE(r.passes);
  ASSERT_EQ(r.residual_matrices.size(), 3u);
  EXPECT_LE((r.residual_matrices[2] - CMatrix::diag({0.0, 0.75})).max_abs(), 1e-15);
  const std::vector<double> ev = herm_eigvals(r.residual_matrices[2]);
  EXPECT_NEAR(ev[0], 0.75, 1e-10);
  EXPECT_NEAR(ev[1], 0.0, 1e-10);
  EXPECT_EQ(r.empty_set_min_eigenvalue, 1.0);
}

TEST(Brehmer, FailureModes) {
  // Non-commuting and fails positivity.
  const CMatrix a = CMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}});
  EXPECT_FALSE(brehmer_check(a, a.adjoint()).passes);
  // Commuting scalars always pass: (1 - a)(1 - b) >= 0.
  EXPECT_TRUE(brehmer_check(CMatrix::identity(2) * Complex(0.9), CMatrix::identity(2) * Complex(0.9)).passes);
  // T = T2 nilpotent: I - 2 T*T = diag(1, -1).
  const BrehmerReport r = brehmer_check(a, a);
  EXPECT_LE(r.commute_residual, 0.0);
  EXPECT_FALSE(r.passes);
  EXPECT_NEAR(r.min_eigenvalues[2], -1.0, 1e-12);
  EXPECT_THROW(brehmer_check(CMatrix::identity(2), CMatrix::identity(3)), InputError);
}

TEST(Brehmer, PassesIffInvariant) {
  Rng rng(7);
  ToleranceConfig tol;
  for (int trial = 0; trial < 30; ++trial) {
    const CMatrix t1 = CMatrix::diag({rng.uniform(), rng.uniform()}), t2 = CMatrix::diag({rng.uniform(), rng.uniform()});
    const BrehmerReport r = brehmer_check(t1, t2, tol);
    bool expect = r.commute_residual <= tol.structural_tol;
    for (double e : r.min_eigenvalues) expect = expect && e >= -tol.structural_tol;
    EXPECT_EQ(r.passes, expect);
  }
}

TEST(Regular, DiagonalExample) {
  const RegularReport r = regular_orth_predicate(examples::diag10(), examples::diag1half());
  EXPECT_TRUE(r.brehmer.passes);
  EXPECT_EQ(r.classical_zero.verdict, Tri::True);
  ASSERT_TRUE(r.classical_witness.has_value());
  EXPECT_NEAR(std::abs((*r.classical_witness)(1, 0)), 1.0, 1e-9);
  EXPECT_LE(std::abs(r.witness_value), 1e-7);
  EXPECT_EQ(r.maximal_zero.verdict, Tri::False);
  EXPECT_EQ(r.bj.orthogonal, Tri::False);
  EXPECT_EQ(r.predicate, Tri::True);
}

TEST(Regular, IdentityPairFails) {
  const RegularReport r = regular_orth_predicate(CMatrix::identity(2), CMatrix::identity(2));
  EXPECT_EQ(r.classical_zero.verdict, Tri::False);
  EXPECT_EQ(r.predicate, Tri::False);
}

TEST(Properties, AndoSuite) {
  SuiteConfig cfg;
  cfg.trials = 30;
  cfg.seed = 19;
  const SuiteResult r = run_suites("ando", cfg).at(0);
  for (const auto& p : r.properties) EXPECT_TRUE(p.ok()) << p.to_json().dump();
}
