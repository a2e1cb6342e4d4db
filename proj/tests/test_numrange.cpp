#include <gtest/gtest.h>

#include <cmath>

#include "otk/numrange.hpp"
#include "otk/random.hpp"
#include "otk/reproduce.hpp"

using namespace otk;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void expect_valid_polygon(const NRPolygon& p) {
  const std::size_t n = p.vertices.size();
  ASSERT_EQ(p.witnesses.size(), n);
  const double scale = 1.0 + geom::extent(p.vertices);
  for (std::size_t k = 0; k < n; ++k) {
    EXPECT_NEAR(vnorm(p.witnesses[k]), 1.0, 1e-10);
    EXPECT_LE(std::abs(quad_form(p.source, p.witnesses[k]) - p.vertices[k]), 1e-9 * scale);
    const Complex a = p.vertices[k], b = p.vertices[(k + 1) % n], c = p.vertices[(k + 2) % n];
    EXPECT_GE(geom::cross(b - a, c - b), -1e-9 * scale * scale);
    EXPECT_LE(outer_excess(p, a), 1e-12 * scale);
  }
}

}  // namespace

TEST(NrBoundary, IdentityIsAPoint) {
  const NRPolygon p = nr_boundary(CMatrix::identity(3));
  EXPECT_TRUE(p.is_degenerate);
  for (Complex z : p.vertices) EXPECT_LE(std::abs(z - 1.0), 1e-14);
}

TEST(NrBoundary, HermitianGivesRealSegment) {
  const NRPolygon p = nr_boundary(CMatrix::diag({1.0, -1.0}));
  EXPECT_TRUE(p.is_degenerate);
  double lo = 1e9, hi = -1e9;
  for (Complex z : p.vertices) {
    EXPECT_LE(std::abs(z.imag()), 1e-14);
    lo = std::min(lo, z.real());
    hi = std::max(hi, z.real());
  }
  EXPECT_NEAR(lo, -1.0, 1e-14);
  EXPECT_NEAR(hi, 1.0, 1e-14);
}

TEST(NrBoundary, NilpotentJordanGivesUnitDisk) {
  const CMatrix b = CMatrix::from_rows({{0.0, 2.0}, {0.0, 0.0}});
  const NRPolygon p = nr_boundary(b, 64);
  EXPECT_FALSE(p.is_degenerate);
  for (Complex z : p.vertices) EXPECT_NEAR(std::abs(z), 1.0, 1e-6);
  expect_valid_polygon(p);
  // Sampling oracle: max modulus over random unit vectors.
  Rng rng(9);
  double best = 0;
  for (int s = 0; s < 20000; ++s) best = std::max(best, std::abs(quad_form(b, rng.unit_vector(2))));
  EXPECT_LE(best, 1.0 + 1e-12);
  EXPECT_GE(best, 0.99);
}

TEST(NrBoundary, RejectsBadInput) {
  EXPECT_THROW(nr_boundary(CMatrix::identity(2), 8), InputError);
  EXPECT_THROW(nr_boundary(CMatrix(2, 3)), InputError);
}

TEST(NrBoundary, RandomPolygonsAreValid) {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t d = std::size_t(rng.integer(2, 6));
    expect_valid_polygon(nr_boundary(rng.gaussian(d, d), 48));
  }
}

TEST(NrContainsZero, Examples) {
  EXPECT_EQ(nr_contains_zero(nr_boundary(CMatrix::diag({1.0, -1.0})), 1e-9).verdict, Tri::True);
  EXPECT_EQ(nr_contains_zero(nr_boundary(CMatrix::identity(2)), 1e-9).verdict, Tri::False);
  const NRPolygon p = nr_boundary(examples::halmos_product(), 128);
  EXPECT_EQ(nr_contains_zero(p, 1e-9).verdict, Tri::False);
  for (Complex z : p.vertices) EXPECT_GE(z.real(), 0.5 - 1e-9);
}

TEST(NrContainsZero, AgreesWithIndependentZeroDistance) {
  Rng rng(43);
  int decided = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = std::size_t(rng.integer(2, 4));
    const CMatrix b = rng.gaussian(d, d) + CMatrix::identity(d) * Complex(rng.uniform(-1.5, 1.5));
    const double tol = 1e-7;
    const auto [m, poly] = contains_point_adaptive(nr_boundary(b), 0.0, tol);
    const double dist = zero_distance(b);
    if (m.verdict == Tri::True) {
      EXPECT_LE(dist, tol + 1e-9);
      ++decided;
    }
    if (m.verdict == Tri::False) {
      EXPECT_GT(dist, tol);
      ++decided;
    }
  }
  EXPECT_GE(decided, 38);
}

TEST(NrMeetsNonpositive, Examples) {
  const auto w = nr_meets_nonpositive_reals(nr_boundary(CMatrix::diag({-1.0, 1.0})), 1e-9);
  ASSERT_TRUE(w.has_value());
  EXPECT_NEAR(w->point.real(), -1.0, 1e-12);
  EXPECT_NEAR(std::abs(w->vector(0, 0)), 1.0, 1e-9);
  EXPECT_FALSE(nr_meets_nonpositive_reals(nr_boundary(CMatrix::identity(2)), 1e-9).has_value());
}

TEST(NrMeetsNonpositive, OppositeSignsWithSignedDefects) {
  // lambda = -mu = 1/sqrt2 with the defects taken as the signed scalars mu I and lambda I:
  // the quadratic form at (x, 0) is 2 lambda mu = -1.
  const double lam = kInvSqrt2, mu = -kInvSqrt2;
  const CMatrix id = CMatrix::identity(2);
  auto block = [&](double t, double dt) {
    CMatrix b = CMatrix::zeros(4, 4);
    b.set_block(0, 0, id * Complex(dt));
    b.set_block(0, 2, id * Complex(-t));
    b.set_block(2, 0, id * Complex(t));
    b.set_block(2, 2, id * Complex(dt));
    return b;
  };
  const CMatrix prod = block(mu, lam).adjoint() * block(lam, mu);
  const auto w = nr_meets_nonpositive_reals(nr_boundary(prod, 64), 1e-9);
  ASSERT_TRUE(w.has_value());
  EXPECT_NEAR(w->point.real(), 2 * lam * mu, 1e-9);
  EXPECT_LE(w->residual, 1e-9);
}

TEST(NrWitness, Examples) {
  const RegionWitness a = nr_witness(CMatrix::diag({1.0, -1.0}), 0.0, 1e-10);
  EXPECT_LE(std::abs(quad_form(CMatrix::diag({1.0, -1.0}), a.vector)), 1e-10);
  EXPECT_NEAR(vnorm(a.vector), 1.0, 1e-10);

  const RegionWitness b = nr_witness(CMatrix::diag({1.0, 0.0}), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(b.vector(1, 0)), 1.0, 1e-9);

  EXPECT_THROW(nr_witness(CMatrix::identity(2), 0.0, 1e-9), InputError);
}

TEST(NrWitness, RandomCentroid) {
  Rng rng(47);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix b = rng.gaussian(4, 4);
    const NRPolygon p = nr_boundary(b);
    Complex c{};
    for (Complex z : p.vertices) c += z;
    c /= double(p.vertices.size());
    const RegionWitness w = nr_witness(b, c, 1e-8);
    EXPECT_LE(std::abs(quad_form(b, w.vector) - c), 1e-8);
    EXPECT_LE(std::abs(quad_form(b, w.vector) - c), w.residual + 1e-15);
    EXPECT_NEAR(vnorm(w.vector), 1.0, 1e-10);
  }
}

TEST(MaximalRange, UnitaryMatchesClassical) {
  Rng rng(53);
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix u = rng.unitary(4);
    const NRPolygon m = maximal_numerical_range(u), c = nr_boundary(u);
    ASSERT_EQ(m.support.size(), c.support.size());
    // Same angles, so support values bound the Hausdorff distance.
    for (std::size_t k = 0; k < m.support.size(); ++k) EXPECT_NEAR(m.support[k], c.support[k], 1e-6);
  }
}

TEST(MaximalRange, Examples) {
  const NRPolygon p = maximal_numerical_range(CMatrix::diag({1.0, 0.5}));
  EXPECT_TRUE(p.is_degenerate);
  for (Complex z : p.vertices) EXPECT_NEAR(std::abs(z - 1.0), 0.0, 1e-12);
  for (const CMatrix& w : p.witnesses) EXPECT_NEAR(vnorm(CMatrix::diag({1.0, 0.5}) * w), 1.0, 1e-10);

  const CMatrix b = examples::example_i_a().adjoint() * examples::example_i_t();
  EXPECT_EQ(nr_contains_zero(maximal_numerical_range(b), 1e-9).verdict, Tri::True);

  const NRPolygon z = maximal_numerical_range(CMatrix::zeros(3, 3));
  EXPECT_TRUE(z.is_degenerate);
  EXPECT_LE(std::abs(z.vertices[0]), 1e-15);
}

TEST(MaximalRange, ClassicalButNotMaximalZero) {
  // diag(1, 0): zero is reached by e2, which is not norming.
  const CMatrix b = CMatrix::diag({1.0, 0.0});
  EXPECT_EQ(nr_contains_zero(nr_boundary(b), 1e-9).verdict, Tri::True);
  EXPECT_EQ(nr_contains_zero(maximal_numerical_range(b), 1e-9).verdict, Tri::False);
}

TEST(SamplingOracle, Examples) {
  for (Complex z : mnr_sampling_oracle(CMatrix::identity(3), 1e-3, 1000, 1)) EXPECT_NEAR(std::abs(z - 1.0), 0.0, 1e-12);
  const auto cloud = mnr_sampling_oracle(CMatrix::diag({1.0, 0.5}), 1e-3, 2000, 2);
  EXPECT_FALSE(cloud.empty());
  for (Complex z : cloud) EXPECT_LE(std::abs(z - 1.0), 2e-3);
  EXPECT_THROW(mnr_sampling_oracle(CMatrix::identity(2), 1e-3, 10, 1), InputError);
}

TEST(SamplingOracle, DeterministicPerSeed) {
  const CMatrix t = Rng(3).contraction(3);
  EXPECT_EQ(mnr_sampling_oracle(t, 1e-3, 1000, 5), mnr_sampling_oracle(t, 1e-3, 1000, 5));
}

TEST(SamplingOracle, CloudInsideMaximalPolygon) {
  Rng rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = std::size_t(rng.integer(3, 6));
    const CMatrix t = rng.contraction(d);
    const double slack = 1e-3;
    const NRPolygon p = maximal_numerical_range(t);
    const double bound = mnr_sampling_bound(t, slack);
    for (Complex z : mnr_sampling_oracle(t, slack, 1000, std::uint64_t(trial))) EXPECT_LE(outer_excess(p, z), bound);
  }
}

TEST(SamplingOracle, FixedSqrtSlackInflationNeedsASingularGap) {
  // Small norm and a narrow top gap: 10 sqrt(slack) |T| is too tight, the gap-aware bound is not.
  const CMatrix t = CMatrix::from_rows({{0.1, 0.0, 0.0}, {0.0, Complex(0.0, 0.098), 0.0}, {0.0, 0.0, 0.01}});
  const double slack = 1e-3;
  const NRPolygon p = maximal_numerical_range(t);
  double worst = -1;
  for (Complex z : mnr_sampling_oracle(t, slack, 2000, 3)) worst = std::max(worst, outer_excess(p, z));
  EXPECT_GT(worst, 10.0 * std::sqrt(slack) * op_norm(t));
  EXPECT_LE(worst, mnr_sampling_bound(t, slack));
}

TEST(SamplingOracle, BoundExamples) {
  EXPECT_EQ(mnr_sampling_bound(CMatrix::identity(3), 1e-3), 0.0);
  EXPECT_EQ(mnr_sampling_bound(CMatrix::zeros(2, 2), 1e-3), 0.0);
  // diag(1, 1/2): e^2 = 2e-3 / 0.75.
  const double e2 = 2e-3 / 0.75;
  EXPECT_NEAR(mnr_sampling_bound(CMatrix::diag({1.0, 0.5}), 1e-3), 2 * (std::sqrt(e2) + e2), 1e-12);
}

TEST(Invariants, NormalMatricesStayInEigenvalueHull) {
  Rng rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t d = std::size_t(rng.integer(2, 5));
    std::vector<Complex> lam(d);
    for (auto& l : lam) l = rng.cnormal();
    const CMatrix u = rng.unitary(d);
    const CMatrix b = u * CMatrix::diag(lam) * u.adjoint();
    const NRPolygon hull = nr_boundary(CMatrix::diag(lam), 256);
    for (Complex z : nr_boundary(b, 64).vertices)
      EXPECT_LE(geom::polygon_point_distance(hull.vertices, hull.is_degenerate, z), 1e-7);
  }
}
