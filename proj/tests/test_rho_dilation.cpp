#include <gtest/gtest.h>

#include <cmath>

#include "otk/properties.hpp"
#include "otk/reproduce.hpp"
#include "otk/rho_dilation.hpp"

using namespace otk;

namespace {

// min |Ax| over unit x in the column span of m: random sampling, then a local climb from the best sample.
double sampled_min_norm(const CMatrix& a, const CMatrix& m, int samples, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t k = m.cols();
  CMatrix best = rng.unit_vector(k);
  double bv = vnorm(a * m * best);
  for (int s = 1; s < samples; ++s) {
    const CMatrix c = rng.unit_vector(k);
    const double v = vnorm(a * m * c);
    if (v < bv) bv = v, best = c;
  }
  double step = 0.05;
  while (step > 1e-9) {
    bool improved = false;
    for (int j = 0; j < 100; ++j) {
      const CMatrix c = normalized(best + rng.gaussian(k, 1) * Complex(step));
      const double v = vnorm(a * m * c);
      if (v < bv) bv = v, best = c, improved = true;
    }
    if (!improved) step *= 0.5;
  }
  return bv;
}

}  // namespace

TEST(Permutation, MapsAgreeWithSpecifiedValues) {
  const PermutationSpec f = permutation_f(16), g = permutation_g(16);
  EXPECT_TRUE(f.is_bijection());
  EXPECT_TRUE(g.is_bijection());
  EXPECT_EQ(f(-1), 4);
  EXPECT_EQ(f(0), 1);
  EXPECT_EQ(f(1), 2);
  EXPECT_EQ(f(2), 5);
  EXPECT_EQ(f(3), 6);
  EXPECT_EQ(f(4), 3);
  EXPECT_EQ(g(-2), 4);
  EXPECT_EQ(g(-1), 3);
  EXPECT_EQ(g(0), 1);
  EXPECT_EQ(g(1), 2);
  for (int m = f.lo; m <= f.hi - 2; ++m)
    if (m < -1 || m > 4) { EXPECT_EQ(f(m), m + 2) << m; }
  for (int m = g.lo; m <= g.hi - 3; ++m)
    if (m < -2 || m > 1) { EXPECT_EQ(g(m), m + 3) << m; }
  // The range covers -16..16 in whole slots of four.
  EXPECT_LE(f.lo, -16);
  EXPECT_GE(f.hi, 16);
  EXPECT_EQ(f.size() % 4, 0);
  EXPECT_EQ(((f.lo - 1) % 4 + 4) % 4, 0);
}

TEST(Permutation, WindowIsAPermutationUnitary) {
  for (int w : {12, 16, 20}) {
    const PermutationSpec f = permutation_f(w);
    const DilationWindow u = permutation_window(f, 1.0, 4);
    EXPECT_EQ(u.slot_dim, 4u);
    EXPECT_EQ(u.slots * 4, std::size_t(f.size()));
    EXPECT_LE(unitarity_residual(u.op), 1e-15);
    EXPECT_EQ(u.kind, "permutation-f");
  }
  PermutationSpec broken = permutation_f(12);
  broken.images[0] = broken.images[1];
  EXPECT_THROW(permutation_window(broken, 1.0, 1), PreconditionError);
}

TEST(Nilpotent, ValidPowersPerWindow) {
  EXPECT_EQ(nilpotent_rho_example(1.0, 12).u_a.valid_powers, 4);
  EXPECT_EQ(nilpotent_rho_example(1.0, 12).u_t.valid_powers, 2);
  const NilpotentBundle b16 = nilpotent_rho_example(1.0, 16);
  EXPECT_EQ(b16.u_a.valid_powers, 6);
  EXPECT_EQ(b16.u_t.valid_powers, 4);
  EXPECT_EQ(b16.u_a.slots, 9u);
}

TEST(Nilpotent, FullReportAtRhoOne) {
  const NilpotentBundle b = nilpotent_rho_example(1.0, 16);
  const NilpotentReport& r = b.report;
  EXPECT_TRUE(r.maps_bijective);
  EXPECT_EQ(r.n_checked, 4);
  for (double x : r.residuals_t) EXPECT_LE(x, 1e-10);
  for (double x : r.residuals_a) EXPECT_LE(x, 1e-10);
  EXPECT_EQ(r.a_orth_t.orthogonal, Tri::True);
  ASSERT_TRUE(r.a_orth_t.witness.has_value());
  EXPECT_NEAR(std::abs((*r.a_orth_t.witness)(3, 0)), 1.0, 1e-9);
  EXPECT_EQ(r.t_orth_a.orthogonal, Tri::False);
  EXPECT_NEAR(std::abs(r.te1_ae1 - 1.0), 0.0, 1e-12);
  EXPECT_EQ(r.ae4_te4, Complex(0.0));
  EXPECT_NEAR(vnorm(b.a * CMatrix::basis(4, 3)), op_norm(b.a), 1e-15);
  EXPECT_EQ(r.dilations_zero.verdict, Tri::True);
  EXPECT_LE(r.dilations_zero.inner_distance, 1e-6);
}

TEST(Nilpotent, RhoThreeInnerProduct) {
  const NilpotentBundle b = nilpotent_rho_example(3.0, 16);
  EXPECT_NEAR(b.report.te1_ae1.real(), 9.0, 1e-10);
  EXPECT_NEAR(b.report.te1_ae1.imag(), 0.0, 1e-15);
  for (double x : b.report.residuals_a) EXPECT_LE(x, 1e-10);
}

TEST(Nilpotent, FifthPowerVanishesOnLargerWindow) {
  for (double rho : {1.0, 2.0}) {
    const NilpotentBundle b = nilpotent_rho_example(rho, 20);
    ASSERT_GE(b.u_t.valid_powers, 5);
    ASSERT_GE(b.u_a.valid_powers, 5);
    EXPECT_EQ(mpow(b.t, 5).max_abs(), 0.0);
    EXPECT_EQ(mpow(b.a, 5).max_abs(), 0.0);
    EXPECT_LE(verify_power_dilation(b.u_t, b.t, 5).max_residual(), 1e-10);
    EXPECT_LE(verify_power_dilation(b.u_a, b.a, 5).max_residual(), 1e-10);
  }
}

TEST(Nilpotent, Errors) {
  try {
    nilpotent_rho_example(1.0, 8);
    FAIL();
  } catch (const WindowSizeError& e) {
    EXPECT_EQ(e.minimal_slots(), 12);
  }
  EXPECT_THROW(nilpotent_rho_example(0.0, 16), InputError);
  const NilpotentBundle b = nilpotent_rho_example(1.0, 12);
  EXPECT_THROW(verify_power_dilation(b.u_t, b.t, 3), WindowSizeError);
}

TEST(Kappa, ExampleI) {
  const KappaReport k = kappa_bound(examples::example_i_t(), examples::example_i_a(), 1.0);
  EXPECT_NEAR(k.eta0, 1.0 / std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(k.kappa, 0.5, 1e-9);
  EXPECT_EQ(k.eta0, std::min(k.eta1, k.eta2));
}

TEST(Kappa, FullNormGivesZero) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const double rho = rng.uniform(0.5, 3);
    const KappaReport k = kappa_bound(rng.with_norm(3, rho), rng.with_norm(3, rng.uniform(0.1, rho)), rho);
    EXPECT_LE(k.kappa, 1e-6);
  }
}

TEST(Kappa, EtaMatchesSphereSamplingOnH0) {
  Rng rng(7);
  const double rho = 2.0;
  // Two-dimensional H0 so the sampling is over a genuine sphere.
  const CMatrix t = rng.with_singular_values({1.5, 1.5, 0.7, 0.2});
  const CMatrix a = rng.with_norm(4, 1.8);
  const KappaReport k = kappa_bound(t, a, rho);
  const CMatrix m = norm_attainment_basis(t).basis;
  ASSERT_EQ(m.cols(), 2u);
  const double mn = sampled_min_norm(a, m, 100000, 3);
  const double eta1 = std::sqrt(1.0 - mn * mn / (rho * rho));
  EXPECT_NEAR(k.eta1, eta1, 1e-4);
  EXPECT_NEAR(vnorm(a * k.attaining_t), mn, 1e-4);
  EXPECT_NEAR(k.kappa, k.eta0 * std::sqrt(1.0 - 1.5 * 1.5 / (rho * rho)), 1e-12);
}

TEST(Kappa, Errors) {
  EXPECT_THROW(kappa_bound(CMatrix::identity(2) * Complex(1.5), CMatrix::identity(2), 1.0), PreconditionError);
  EXPECT_THROW(kappa_bound(CMatrix::identity(2), CMatrix::identity(2), -1.0), InputError);
  const KappaReport z = kappa_bound(CMatrix::zeros(2, 2), CMatrix::identity(2) * Complex(0.5), 1.0);
  EXPECT_GE(z.kappa, 0.0);
  EXPECT_LE(z.kappa, 1.0);
}

TEST(NormIdentity, HoldsForRhoDilations) {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix t = rng.contraction(3);
    const DilationWindow w = schaffer_window(t, 8);
    EXPECT_LE(std::abs(norm_identity_residual(w, t, rng.unit_vector(3))), 1e-8);
  }
  for (double rho : {1.0, 2.0}) {
    const NilpotentBundle b = nilpotent_rho_example(rho, 16);
    for (std::size_t k = 0; k < 4; ++k) {
      EXPECT_LE(std::abs(norm_identity_residual(b.u_t, b.t, CMatrix::basis(4, k))), 1e-8);
      EXPECT_LE(std::abs(norm_identity_residual(b.u_a, b.a, CMatrix::basis(4, k))), 1e-8);
    }
  }
}

TEST(Transfer, NilpotentRolesReversed) {
  for (double rho : {1.0, 2.0}) {
    const NilpotentBundle b = nilpotent_rho_example(rho, 16);
    const RhoTransferReport r = rho_orth_transfer_check(b.a, b.t, rho, b.u_a, b.u_t);
    EXPECT_EQ(r.t_orth_a.orthogonal, Tri::True);
    EXPECT_TRUE(r.norm_equals_rho);
    ASSERT_FALSE(r.identity_residuals.empty());
    for (double x : r.identity_residuals) EXPECT_LE(std::abs(x), 1e-8);
    EXPECT_EQ(r.dilations_zero.verdict, Tri::True);
    EXPECT_EQ(r.dilations_zero_reversed.verdict, Tri::True);
    EXPECT_NEAR(r.kappa.kappa, 0.0, 1e-12);
    EXPECT_TRUE(r.epsilon_within_kappa);
  }
}

TEST(Transfer, ExampleIDoesNotTransfer) {
  const CMatrix t = examples::example_i_t(), a = examples::example_i_a();
  const RhoTransferReport r = rho_orth_transfer_check(t, a, 1.0, schaffer_window(t, 16), schaffer_window(a, 16));
  EXPECT_EQ(r.t_orth_a.orthogonal, Tri::True);
  EXPECT_FALSE(r.norm_equals_rho);
  EXPECT_EQ(r.dilations_zero.verdict, Tri::False);
  EXPECT_NEAR(r.window_epsilon, 0.5, 1e-3);
  EXPECT_NEAR(r.kappa.kappa, 0.5, 1e-9);
  EXPECT_TRUE(r.epsilon_within_kappa);
}

TEST(Transfer, UnitNormSchafferPairs) {
  Rng rng(13);
  for (int trial = 0; trial < 3; ++trial) {
    const sample::Pair p = sample::unit_orthogonal_pair(rng, 2);
    const RhoTransferReport r = rho_orth_transfer_check(p.t, p.a, 1.0, schaffer_window(p.t, 8), schaffer_window(p.a, 8));
    EXPECT_TRUE(r.norm_equals_rho);
    EXPECT_EQ(r.dilations_zero.verdict, Tri::True);
    EXPECT_EQ(halmos_orth_criterion(p.t, p.a).orthogonal, Tri::True);
  }
}

TEST(Transfer, Errors) {
  const CMatrix t = examples::example_i_t(), a = examples::example_i_a();
  EXPECT_THROW(rho_orth_transfer_check(t, a, 1.0, schaffer_window(t, 8), schaffer_window(a, 10)), InputError);
  EXPECT_THROW(rho_orth_transfer_check(t, a, 1.0, schaffer_window(t, 8), schaffer_window(t, 8)), PreconditionError);
}

TEST(Properties, RhoSuite) {
  SuiteConfig cfg;
  cfg.trials = 30;
  cfg.seed = 17;
  const SuiteResult r = run_suites("rho", cfg).at(0);
  for (const auto& p : r.properties) EXPECT_TRUE(p.ok()) << p.to_json().dump();
}
