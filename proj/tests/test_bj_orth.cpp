#include <gtest/gtest.h>

#include <cmath>

#include "otk/bj_orth.hpp"
#include "otk/properties.hpp"
#include "otk/reproduce.hpp"
#include "otk/rho_dilation.hpp"

using namespace otk;

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

TEST(NormAttainment, Examples) {
  const NormAttainmentBasis a = norm_attainment_basis(CMatrix::diag({1.0, 0.5}));
  ASSERT_EQ(a.basis.cols(), 1u);
  EXPECT_NEAR(std::abs(a.basis(0, 0)), 1.0, 1e-12);
  EXPECT_NEAR(a.gap, 0.75, 1e-12);

  const NormAttainmentBasis b = norm_attainment_basis(nilpotent_t(1.0));
  ASSERT_EQ(b.basis.cols(), 1u);
  EXPECT_NEAR(std::abs(b.basis(0, 0)), 1.0, 1e-12);

  const NormAttainmentBasis c = norm_attainment_basis(examples::example_i_t());
  EXPECT_EQ(c.basis.cols(), 2u);
  EXPECT_NEAR(c.norm, kInvSqrt2, 1e-15);

  EXPECT_THROW(norm_attainment_basis(CMatrix::zeros(2, 2)), PreconditionError);
}

TEST(NormAttainment, ColumnsAttainNorm) {
  Rng rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix t = rng.contraction(4);
    const NormAttainmentBasis nb = norm_attainment_basis(t);
    EXPECT_LE(op_norm(nb.basis.adjoint() * nb.basis - CMatrix::identity(nb.basis.cols())), 1e-9);
    for (std::size_t k = 0; k < nb.basis.cols(); ++k) EXPECT_NEAR(vnorm(t * nb.basis.col(k)), nb.norm, 1e-10);
  }
}

TEST(IsBjOrthogonal, ExampleI) {
  const OrthVerdict v = is_bj_orthogonal(examples::example_i_t(), examples::example_i_a());
  EXPECT_EQ(v.orthogonal, Tri::True);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_LE(std::abs(v.inner_product_at_witness), 1e-7 * 0.5);
  EXPECT_NEAR(vnorm(examples::example_i_t() * *v.witness), kInvSqrt2, 1e-12);
  EXPECT_EQ(v.epsilon_min, 0.0);
  EXPECT_EQ(v.method, "compression");
}

TEST(IsBjOrthogonal, ScalarMultiplesOfIdentity) {
  const CMatrix id = CMatrix::identity(2);
  EXPECT_EQ(is_bj_orthogonal(id * Complex(0.6), id * Complex(-0.8)).orthogonal, Tri::False);
  EXPECT_EQ(is_bj_orthogonal(id * Complex(0.6), id * Complex(0.3, 0.2)).orthogonal, Tri::False);
}

TEST(IsBjOrthogonal, NilpotentPairIsAsymmetric) {
  for (double rho : {1.0, 3.0}) {
    const CMatrix t = nilpotent_t(rho), a = nilpotent_a(rho);
    const OrthVerdict at = is_bj_orthogonal(a, t);
    EXPECT_EQ(at.orthogonal, Tri::True);
    ASSERT_TRUE(at.witness.has_value());
    EXPECT_NEAR(vnorm(a * *at.witness), rho, 1e-10 * rho);
    EXPECT_EQ(is_bj_orthogonal(t, a).orthogonal, Tri::False);
    const CMatrix e1 = CMatrix::basis(4, 0);
    EXPECT_NEAR(std::abs(inner(t * e1, a * e1) - rho * rho), 0.0, 1e-12);
  }
}

TEST(IsBjOrthogonal, ZeroConventionsAndShape) {
  const CMatrix z = CMatrix::zeros(2, 2);
  EXPECT_EQ(is_bj_orthogonal(z, CMatrix::identity(2)).orthogonal, Tri::True);
  EXPECT_EQ(is_bj_orthogonal(CMatrix::identity(2), z).orthogonal, Tri::True);
  EXPECT_EQ(epsilon_min(z, CMatrix::identity(2)), 0.0);
  EXPECT_THROW(is_bj_orthogonal(CMatrix::identity(2), CMatrix::identity(3)), InputError);
}

TEST(IsBjOrthogonal, VerdictInvariants) {
  Rng rng(73);
  ToleranceConfig tol;
  for (int trial = 0; trial < 30; ++trial) {
    const sample::Pair p = trial % 2 ? sample::orthogonal_pair(rng, 3) : sample::Pair{rng.contraction(3), rng.contraction(3)};
    const OrthVerdict v = is_bj_orthogonal(p.t, p.a, tol);
    const double nt = op_norm(p.t), na = op_norm(p.a);
    EXPECT_GE(v.epsilon_min, 0.0);
    EXPECT_LE(v.epsilon_min, 1.0);
    if (v.orthogonal == Tri::True) {
      ASSERT_TRUE(v.witness.has_value());
      EXPECT_GE(vnorm(p.t * *v.witness), nt - tol.verdict_tol);
      EXPECT_LE(std::abs(inner(p.t * *v.witness, p.a * *v.witness)), tol.verdict_tol * nt * na);
      EXPECT_LE(v.epsilon_min, tol.verdict_tol);
    }
    if (v.orthogonal == Tri::False) { EXPECT_GT(v.epsilon_min, 0.0); }
  }
}

TEST(EpsilonMin, HalmosBlocksOfExampleI) {
  const HalmosPair hp = halmos_pair(examples::example_i_t(), examples::example_i_a());
  EXPECT_NEAR(epsilon_min(hp.t_block.block, hp.a_block.block), 0.5, 1e-4);
  EXPECT_NEAR(approx_grid_oracle(hp.t_block.block, hp.a_block.block), 0.5, 1e-3);
}

TEST(EpsilonMin, MatchesGridOracleOnFrozenPair) {
  Rng rng(79);
  const CMatrix t = rng.contraction(4), a = rng.contraction(4);
  EXPECT_NEAR(epsilon_min(t, a), approx_grid_oracle(t, a), 1e-4);
}

TEST(IsApproxOrthogonal, Examples) {
  const sample::Pair p = [] {
    Rng rng(83);
    return sample::orthogonal_pair(rng, 3);
  }();
  EXPECT_EQ(is_approx_orthogonal(p.t, p.a, 0.0), Tri::True);

  const HalmosPair hp = halmos_pair(examples::example_i_t(), examples::example_i_a());
  EXPECT_EQ(is_approx_orthogonal(hp.t_block.block, hp.a_block.block, 0.4), Tri::False);
  EXPECT_EQ(is_approx_orthogonal(hp.t_block.block, hp.a_block.block, 0.5), Tri::True);

  Rng rng(89);
  const CMatrix t = rng.contraction(3), a = rng.contraction(3);
  EXPECT_EQ(is_approx_orthogonal(t, a, std::min(0.99, epsilon_min(t, a) + 0.05)), Tri::True);

  EXPECT_THROW(is_approx_orthogonal(t, a, 1.0), InputError);
  EXPECT_THROW(is_approx_orthogonal(t, a, -0.1), InputError);
}

TEST(IsApproxOrthogonal, DefinitionalInequalityOnGrid) {
  // eps = epsilon_min + 0.05 satisfies |T + lA|^2 >= |T|^2 - 2 eps |T| |lA| at every grid point.
  Rng rng(97);
  for (int trial = 0; trial < 3; ++trial) {
    const CMatrix t = rng.contraction(3), a = rng.contraction(3);
    const double eps = std::min(0.99, epsilon_min(t, a) + 0.05);
    const double nt = op_norm(t), na = op_norm(a);
    double worst = 1e9;
    for (int i = 1; i <= 24; ++i)
      for (int j = 0; j < 24; ++j) {
        const Complex lam = std::polar(4.0 * nt / na * i / 24.0, 2 * M_PI * j / 24.0);
        const double lhs = std::pow(op_norm(t + a * lam), 2);
        const double rhs = nt * nt - 2 * eps * nt * std::abs(lam) * na;
        worst = std::min(worst, lhs - rhs);
      }
    EXPECT_GE(worst, -1e-12);
  }
}

TEST(GridOracle, Examples) {
  const GridMinimum ii = bj_grid_oracle(CMatrix::identity(2), CMatrix::identity(2));
  EXPECT_LE(ii.min_norm, 1e-6);
  EXPECT_NEAR(std::abs(ii.argmin_lambda + 1.0), 0.0, 1e-4);

  const GridMinimum ex = bj_grid_oracle(examples::example_i_t(), examples::example_i_a());
  EXPECT_NEAR(ex.min_norm, kInvSqrt2, 1e-6);

  const GridMinimum z = bj_grid_oracle(CMatrix::zeros(2, 2), CMatrix::identity(2));
  EXPECT_EQ(z.min_norm, 0.0);

  const sample::Pair p = [] {
    Rng rng(101);
    return sample::orthogonal_pair(rng, 3);
  }();
  EXPECT_NEAR(approx_grid_oracle(p.t, p.a), 0.0, 1e-6);

  GridOracleConfig bad;
  bad.angular = 8;
  bad.radial = 8;
  EXPECT_THROW(bj_grid_oracle(CMatrix::identity(2), CMatrix::identity(2), bad), InputError);
}

TEST(Extension, Examples) {
  const CMatrix e = norm_preserving_extension(CMatrix::identity(2), 1);
  EXPECT_EQ((e - CMatrix::diag({1.0, 1.0, 0.0})).max_abs(), 0.0);
  EXPECT_THROW(norm_preserving_extension(CMatrix::identity(2), -1), InputError);
  Rng rng(103);
  for (int trial = 0; trial < 50; ++trial) {
    const CMatrix t = rng.gaussian(3, 3);
    const CMatrix x = norm_preserving_extension(t, rng.integer(0, 3));
    EXPECT_NEAR(op_norm(x), op_norm(t), 1e-10 * op_norm(t));
    EXPECT_EQ((x.block(0, 0, 3, 3) - t).max_abs(), 0.0);
  }
}

TEST(Properties, BjSuite) {
  SuiteConfig cfg;
  cfg.trials = 30;
  cfg.seed = 11;
  cfg.dims = {2, 3, 4, 5, 6};
  const SuiteResult r = run_suites("bj", cfg).at(0);
  for (const auto& p : r.properties) {
    EXPECT_TRUE(p.ok()) << p.to_json().dump();
    EXPECT_GT(p.passed, 0) << p.name;
  }
}
