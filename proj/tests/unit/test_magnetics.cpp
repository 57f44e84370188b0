#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <ferronema/errors.hpp>
#include <ferronema/magnetics.hpp>
#include <ferronema/random.hpp>

using namespace ferronema;

namespace {

// tests/oracles/spheroid.py: axial slicing of the magnetized body
constexpr double kPotentialA2B1Z10 = 0.085316855065297119243;

Rotation random_rotation(Rng& rng) {
  return Rotation::from_quaternion(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
}

}  // namespace

TEST(ExactPotential, MatchesAxialOracle) {
  const MagnetizedSpheroid ms{make_spheroid(2.0, 1.0), 1.0};
  EXPECT_NEAR(exact_exterior_potential(ms, Vec3(0, 0, 10)), kPotentialA2B1Z10, 1e-13);
  EXPECT_NEAR(exact_exterior_potential(ms, Vec3(0, 0, -10)), -kPotentialA2B1Z10, 1e-13);
}

TEST(ExactPotential, SphereIsExactlyDipolar) {
  const MagnetizedSpheroid ms{make_spheroid(1.0, 1.0), 2.0};
  const Vec3 x(1.5, -0.7, 2.0);
  const double r = x.norm();
  EXPECT_NEAR(exact_exterior_potential(ms, x), kFarFieldCoefficient * 2.0 * x.z() / (r * r * r), 1e-13);
}

TEST(ExactPotential, HarmonicOutside) {
  Rng rng(5, "magnetics");
  const MagnetizedSpheroid ms{make_spheroid(2.0, 1.0, Vec3(0.1, 0.2, 0.3), random_rotation(rng)), 1.0};
  const double h = 1e-3;
  for (int k = 0; k < 20; ++k) {
    Vec3 x;
    do {
      x = Vec3(rng.uniform(-6, 6), rng.uniform(-6, 6), rng.uniform(-6, 6));
    } while (ms.geometry.scaled(1.3).contains(x));
    const double f0 = exact_exterior_potential(ms, x);
    double lap = -6.0 * f0, scale = 0.0;
    for (int a = 0; a < 3; ++a) {
      const Vec3 e = h * Vec3::Unit(a);
      const double fp = exact_exterior_potential(ms, x + e), fm = exact_exterior_potential(ms, x - e);
      lap += fp + fm;
      scale += std::abs(fp - 2 * f0 + fm);
    }
    EXPECT_LE(std::abs(lap), 1e-5 * scale) << x.transpose();
  }
}

TEST(ExactPotential, InsideIsDomainError) {
  const MagnetizedSpheroid ms{make_spheroid(2.0, 1.0), 1.0};
  EXPECT_THROW(exact_exterior_potential(ms, Vec3(0, 0, 1.0)), DomainError);
  EXPECT_THROW(confocal_coordinate(ms.geometry, Vec3(0, 0, 2.0)), DomainError);
  EXPECT_NEAR(confocal_coordinate(ms.geometry, Vec3(0, 0, 3.0)), 9.0, 1e-12);
}

TEST(Dipole, RelativeErrorDecaysQuadratically) {
  const MagnetizedSpheroid ms{make_spheroid(2.0, 1.0), 1.0};
  double prev = 0.0;
  for (double ratio : {5.0, 10.0, 20.0}) {
    const Vec3 x = ratio * 2.0 * Vec3(0.3, 0.4, 0.866).normalized();
    const double exact = exact_exterior_potential(ms, x);
    const double err = std::abs(dipole_far_potential(ms, x) - exact) / std::abs(exact);
    if (prev > 0.0) EXPECT_NEAR(prev / err, 4.0, 4.0 * 0.1);
    prev = err;
  }
}

TEST(Dipole, TooCloseIsAccuracyError) {
  const MagnetizedSpheroid ms{make_spheroid(2.0, 1.0), 1.0};
  EXPECT_THROW(dipole_far_potential(ms, Vec3(0, 0, 3.9)), AccuracyError);
  EXPECT_THROW(dipole_field_H(ms, Vec3(0, 0, 4.0)), AccuracyError);
}

TEST(Dipole, FieldIsMinusGradientOfPotential) {
  const MagnetizedSpheroid ms{make_spheroid(1.5, 1.0, Vec3::Zero(), Rotation::about_axis(Vec3(1, 1, 0), 0.4)), 1.3};
  const Vec3 x(4.0, -3.0, 5.0);
  const double h = 1e-5;
  Vec3 fd;
  for (int a = 0; a < 3; ++a) {
    const Vec3 e = h * Vec3::Unit(a);
    fd[a] = -(dipole_far_potential(ms, x + e) - dipole_far_potential(ms, x - e)) / (2 * h);
  }
  EXPECT_LE((fd - dipole_field_H(ms, x)).norm(), 1e-8 * fd.norm());
}

TEST(FarField, CoefficientIsFourPiOverThree) {
  // Leading term of the exact potential: phi r^3 / (a b^2 m z) -> 4 pi / 3
  const double a = 3.0, b = 1.0, m = 0.7;
  const MagnetizedSpheroid ms{make_spheroid(a, b), m};
  double prev = INFINITY;
  for (double r : {1e2, 1e3, 1e4}) {
    const Vec3 x = r * Vec3(0.6, 0.0, 0.8);
    const double c = exact_exterior_potential(ms, x) * r * r * r / (a * b * b * m * x.z());
    const double err = std::abs(c - kFarFieldCoefficient);
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 1e-6);
  EXPECT_NEAR(ms.moment().z(), 4.0 * std::numbers::pi / 3.0 * a * b * b * m, 1e-14);
}

TEST(PairEnergy, CoaxialAndSideBySideDipoles) {
  const double a = 1.0, b = 0.5, r = 20.0;
  const MagnetizedSpheroid p{make_spheroid(a, b), 1.0};
  const double mu = p.moment().norm();
  const MagnetizedSpheroid coax{make_spheroid(a, b, Vec3(0, 0, r)), 1.0};
  const MagnetizedSpheroid side{make_spheroid(a, b, Vec3(r, 0, 0)), 1.0};
  // both sides counted: -(mu_i.H_j + mu_j.H_i)
  const double e_coax = pair_interaction_energy(p, coax);
  const double e_side = pair_interaction_energy(p, side);
  EXPECT_NEAR(e_coax, -4.0 * mu * mu / (r * r * r), 1e-2 * 4.0 * mu * mu / (r * r * r));
  EXPECT_NEAR(e_side, 2.0 * mu * mu / (r * r * r), 1e-2 * 2.0 * mu * mu / (r * r * r));
  EXPECT_NEAR(pair_interaction_energy(coax, p), e_coax, 1e-15 * std::abs(e_coax));
}

TEST(PairEnergy, OverlapIsGeometryError) {
  const MagnetizedSpheroid p{make_spheroid(1.0, 0.5), 1.0};
  const MagnetizedSpheroid q{make_spheroid(1.0, 0.5, Vec3(0.2, 0, 0)), 1.0};
  EXPECT_THROW(pair_interaction_energy(p, q), GeometryError);
}

TEST(VolumeQuadrature, IntegratesVolumeAndSecondMoments) {
  const Spheroid s = make_spheroid(2.0, 1.0, Vec3(1, 2, 3), Rotation::about_axis(Vec3::UnitY(), 0.3));
  const VolumeQuadrature q = make_volume_quadrature(s, 8);
  double vol = 0.0;
  Vec3 first = Vec3::Zero();
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    vol += q.weights[i];
    first += q.weights[i] * q.nodes[i];
  }
  EXPECT_NEAR(vol, s.volume(), 1e-12 * s.volume());
  EXPECT_LE((first / vol - s.center).norm(), 1e-12);
}

TEST(EnsemblePairs, SumsMatchDirectPairs) {
  const ScalingParams p;
  const ParticleEnsemble e = generate_periodic(0.25, Box{}, p, make_spheroid(0.8, 0.5), identity_field());
  const PairSums sums = ensemble_pair_energies(e, 1.0, 4);
  EXPECT_EQ(sums.pairs, e.size() * (e.size() - 1) / 2);
  const double direct = pair_interaction_energy({e.realized(0), 1.0}, {e.realized(1), 1.0}, 4);
  EXPECT_GE(sums.max_abs, std::abs(direct));
}

TEST(InteractionStudy, PairSlopeAndVolumeFraction) {
  const ScalingParams p;
  const InteractionStudy st =
      interaction_scaling_study(p, {0.25, 1.0 / 6.0, 0.125}, make_spheroid(0.8, 0.5), Box{}, identity_field());
  EXPECT_NEAR(st.slope_pair, 6 * p.alpha + 2 * p.beta1 - 3, 0.3);
  EXPECT_NEAR(st.slope_bound, 6 * p.alpha + 2 * p.beta1 - 9, 0.3);
  EXPECT_THROW(interaction_scaling_study(p, {0.25, 0.125}, make_spheroid(0.8, 0.5), Box{}, identity_field()),
               ConfigError);
}

TEST(Zeeman, ZeroFieldGivesZero) {
  const ScalingParams p;
  const ParticleEnsemble e = generate_periodic(0.25, Box{}, p, make_spheroid(0.8, 0.5), identity_field());
  EXPECT_EQ(zeeman_energy(e, p), 0.0);
  ScalingParams q = p;
  q.h = Vec3(0, 0, 1e-6);
  EXPECT_GT(zeeman_energy(e, q), 0.0);
}
