#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <ferronema/effective.hpp>
#include <ferronema/errors.hpp>
#include <ferronema/grid.hpp>

using namespace ferronema;

namespace {

const Spheroid kRef = make_spheroid(0.8, 0.5);

}  // namespace

TEST(Grid, TrapezoidWeightsSumToVolume) {
  const Grid g = make_grid(Box{Vec3(0, 0, 0), Vec3(2, 1, 0.5)}, 9);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) sum += g.weight(i);
  EXPECT_NEAR(sum, 1.0, 1e-14);
  EXPECT_EQ(g.index(g.ijk(123)[0], g.ijk(123)[1], g.ijk(123)[2]), 123u);
  EXPECT_THROW(make_grid(Box{}, 7), ConfigError);
}

TEST(AssembleA, IdentityLatticeGivesReferenceTensorInTheInterior) {
  const ScalingParams p;
  const double eps = 0.125;
  const ParticleEnsemble e = generate_periodic(eps, Box{}, p, kRef, identity_field());
  const Grid grid = make_grid(Box{}, 33);
  const MatrixField A = assemble_A_eps(e, p, 4 * eps, grid);
  const AnchoringEigenvalues lam = anchoring_eigenvalues(kRef);
  const Mat3 expect = p.g * Vec3(lam.transverse, lam.transverse, lam.axial).asDiagonal().toDenseMatrix();
  const MatrixField closed = closed_form_A(identity_field(), p.g, lam.axial, lam.transverse, grid);
  EXPECT_LE(max_interior_deviation(A, closed, 4 * eps), 0.05 * expect.norm());
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_LE((closed.values[i] - expect).norm(), 1e-13);
}

TEST(AssembleA, NoParticlesGivesZero) {
  ParticleEnsemble e;
  e.epsilon = 0.125;
  e.reference = kRef;
  const MatrixField A = assemble_A_eps(e, e.params, 0.5, make_grid(Box{}, 9));
  for (const Mat3& m : A.values) EXPECT_EQ(m.norm(), 0.0);
}

TEST(AssembleA, PreconditionsOnEta) {
  const ScalingParams p;
  const ParticleEnsemble e = generate_periodic(0.125, Box{}, p, kRef, identity_field());
  EXPECT_THROW(assemble_A_eps(e, p, 0.2, make_grid(Box{}, 9)), ConfigError);       // eta < 2 eps
  EXPECT_THROW(assemble_A_eps(e, p, 0.01, make_grid(Box{}, 9)), ResolutionError);  // eta < spacing
}

TEST(AssembleA, TwistDeviationDecreasesAsEpsilonHalves) {
  const ScalingParams p;
  const RotationField f = twist_field(Vec3::UnitX(), Vec3::UnitX(), std::numbers::pi);
  const Grid grid = make_grid(Box{}, 33);
  const AnchoringEigenvalues lam = anchoring_eigenvalues(kRef);
  const MatrixField closed = closed_form_A(f, p.g, lam.axial, lam.transverse, grid);
  double prev = INFINITY;
  for (double eps : {0.125, 0.0625, 0.03125}) {
    const ParticleEnsemble e = generate_periodic(eps, Box{}, p, kRef, f);
    const double dev = max_interior_deviation(assemble_A_eps(e, p, 0.25, grid), closed, 0.25);
    EXPECT_LT(dev, prev) << "eps " << eps;
    prev = dev;
  }
}

TEST(AssembleM, IdentityLatticeMatchesClosedForm) {
  const ScalingParams p;
  const double eps = 0.125;
  const ParticleEnsemble e = generate_periodic(eps, Box{}, p, kRef, identity_field());
  const Grid grid = make_grid(Box{}, 33);
  const double vol = kRef.volume();
  const EffectiveMagnetization M = assemble_M_eps(e, p, 4 * eps, grid);
  const EffectiveMagnetization closed = closed_form_M(identity_field(), p.m * vol * vol, grid);
  EXPECT_LE(max_interior_deviation(M, closed, 4 * eps), 0.05 * p.m * vol * vol);
}

TEST(CouplingDensity, MatchesExpandedForm) {
  const Vec3 u(0.3, -0.2, 0.9), M(0.1, 0.4, 1.2), h(0.5, 0, -0.1);
  const double g = 1.7, m = 1.3, l1 = 2.0, l2 = 5.0;
  const double expect = g * (l1 - l2) / (m * m) * std::pow(u.dot(M), 2) + g * l2 / (m * m) * u.squaredNorm() - 2 * h.dot(M);
  EXPECT_NEAR(coupling_density(u, M, h, g, m, l1, l2), expect, 1e-14);
  EXPECT_THROW(coupling_density(u, M, h, g, 0.0, l1, l2), DomainError);
}

TEST(CouplingDensity, SignOfLambdaFollowsG) {
  // prolate: lambda1 < lambda2, so Lambda has the sign opposite to g
  const AnchoringEigenvalues lam = anchoring_eigenvalues(make_spheroid(5, 1));
  const Vec3 M = Vec3::UnitZ();
  for (double g : {1.0, -1.0}) {
    const double par = coupling_density(Vec3::UnitZ(), M, Vec3::Zero(), g, 1.0, lam.axial, lam.transverse);
    const double perp = coupling_density(Vec3::UnitX(), M, Vec3::Zero(), g, 1.0, lam.axial, lam.transverse);
    if (g > 0) EXPECT_LT(par, perp);
    else EXPECT_GT(par, perp);
  }
}

TEST(Burylov, UniformFieldDensity) {
  const Grid grid = make_grid(Box{}, 9);
  const std::vector<Vec3> n(grid.size(), Vec3::UnitZ());
  BurylovCoefficients c;
  c.chi_a = 0.5;
  c.f = 0.02;
  const Vec3 H(0.0, 0.0, 2.0);
  const auto dens = burylov_density(grid, n, Vec3::UnitZ(), H, c);
  ASSERT_EQ(dens.size(), grid.size());
  for (std::size_t i = 1; i < dens.size(); ++i) EXPECT_NEAR(dens[i], dens[0], 1e-12);
  EXPECT_TRUE(std::isfinite(dens[0]));
}

TEST(Burylov, Preconditions) {
  const Grid grid = make_grid(Box{}, 9);
  std::vector<Vec3> n(grid.size(), Vec3::UnitZ());
  BurylovCoefficients c;
  c.f = 0.0;
  EXPECT_THROW(burylov_density(grid, n, Vec3::UnitZ(), Vec3::Zero(), c), DomainError);
  c.f = 0.01;
  n[3] = Vec3(0, 0, 2);
  EXPECT_THROW(burylov_density(grid, n, Vec3::UnitZ(), Vec3::Zero(), c), ConfigError);
}
