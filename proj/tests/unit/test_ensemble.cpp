#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <ferronema/errors.hpp>
#include <ferronema/ensemble.hpp>
#include <ferronema/fit.hpp>
#include <ferronema/random.hpp>

using namespace ferronema;

TEST(Scalings, DefaultsAreValid) {
  ScalingParams p;
  EXPECT_TRUE(validate_scalings(p).empty());
  EXPECT_EQ(check_scalings(p).size(), 5u);
  EXPECT_NO_THROW(require_valid_scalings(p));
}

TEST(Scalings, AlphaThreeIsNamed) {
  ScalingParams p;
  p.alpha = 3.0;
  const auto bad = validate_scalings(p);
  ASSERT_FALSE(bad.empty());
  EXPECT_EQ(bad.front().relation, "1<alpha<2");
  try {
    require_valid_scalings(p);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("1<alpha<2"), std::string::npos);
  }
}

TEST(Scalings, EqualitiesUseRelativeTolerance) {
  ScalingParams p;
  p.alpha = 1.2;
  p.gamma = 3.0 - 2.0 * 1.2;
  p.beta1 = 2.0;
  p.beta2 = 3.0 - 6.0 * 1.2 - 2.0;
  EXPECT_TRUE(validate_scalings(p).empty());
  p.gamma += 1e-6;
  ASSERT_EQ(validate_scalings(p).size(), 1u);
  EXPECT_EQ(validate_scalings(p).front().relation, "gamma=3-2alpha");
}

TEST(Scalings, SubcriticalMagneticExponentRejected) {
  ScalingParams p;
  p.beta1 = -1.0;  // 6 alpha + 2 beta1 = 7 < 9
  p.beta2 = 3.0 - 6.0 * p.alpha - p.beta1;
  const auto bad = validate_scalings(p);
  ASSERT_EQ(bad.size(), 1u);
  EXPECT_EQ(bad.front().relation, "6alpha+2beta1>9");
}

TEST(Periodic, CountsAndCentering) {
  const ScalingParams p;
  const Spheroid ref = make_spheroid(0.8, 0.5);
  for (int inv : {4, 6, 8}) {
    const ParticleEnsemble e = generate_periodic(1.0 / inv, Box{}, p, ref, identity_field());
    EXPECT_EQ(e.size(), std::size_t(inv * inv * inv));
    Vec3 mean = Vec3::Zero();
    for (const auto& q : e.particles) mean += q.center;
    EXPECT_NEAR((mean / double(e.size()) - Vec3::Constant(0.5)).norm(), 0.0, 1e-14);
  }
}

TEST(Periodic, ParticlesScaleWithEpsilonToAlpha) {
  const ScalingParams p;
  const ParticleEnsemble e = generate_periodic(0.25, Box{}, p, make_spheroid(0.8, 0.5), identity_field());
  EXPECT_DOUBLE_EQ(e.particle_scale(), 0.125);
  const Spheroid s = e.realized(0);
  EXPECT_DOUBLE_EQ(s.a, 0.1);
  EXPECT_DOUBLE_EQ(s.b, 0.0625);
  EXPECT_NO_THROW(check_disjoint_and_inside(e));
}

TEST(Periodic, RotationFieldSampledAtCenters) {
  const ScalingParams p;
  const RotationField f = twist_field(Vec3::UnitX(), Vec3::UnitX(), std::numbers::pi);
  const ParticleEnsemble e = generate_periodic(0.25, Box{}, p, make_spheroid(0.8, 0.5), f);
  for (const auto& q : e.particles)
    EXPECT_LE((q.rotation.matrix() - f(q.center).matrix()).norm(), 1e-15);
}

TEST(Periodic, VolumeFractionSlopeIsThreeAlphaMinusOne) {
  const ScalingParams p;
  std::vector<double> eps{0.25, 0.125, 0.0625}, phi;
  for (double e : eps) phi.push_back(volume_fraction(generate_periodic(e, Box{}, p, make_spheroid(0.8, 0.5), identity_field())));
  EXPECT_NEAR(loglog_slope(eps, phi), 3.0 * (p.alpha - 1.0), 1e-10);
}

TEST(Periodic, RejectsSpacingOutsideBounds) {
  ScalingParams p;
  p.d = 1.1;
  p.D = 1.5;
  EXPECT_THROW(generate_periodic(0.25, Box{}, p, make_spheroid(0.8, 0.5), identity_field()), ConfigError);
}

TEST(Periodic, ZeroRoomIsAConfigError) {
  EXPECT_THROW(generate_periodic(0.6, Box{}, ScalingParams{}, make_spheroid(0.8, 0.5), identity_field()), ConfigError);
}

TEST(Random, DeterministicInSeed) {
  const ScalingParams p;
  const Spheroid ref = make_spheroid(0.8, 0.5);
  const ParticleEnsemble a = generate_random(0.125, Box{}, p, ref, 42);
  const ParticleEnsemble b = generate_random(0.125, Box{}, p, ref, 42);
  const ParticleEnsemble c = generate_random(0.125, Box{}, p, ref, 43);
  EXPECT_EQ(ensemble_to_json(a), ensemble_to_json(b));
  EXPECT_NE(ensemble_to_json(a), ensemble_to_json(c));
}

TEST(Random, NearestNeighborWithinBounds) {
  const ScalingParams p;
  const double eps = 0.125;
  const ParticleEnsemble e = generate_random(eps, Box{}, p, make_spheroid(0.8, 0.5), 3);
  const auto nn = nearest_neighbor_distances(e);
  ASSERT_EQ(nn.size(), e.size());
  for (double d : nn) {
    EXPECT_GE(d, p.d * eps);
    EXPECT_LE(d, p.D * eps);
  }
  EXPECT_LE(double(e.size()), count_bound(e));
  EXPECT_NO_THROW(check_disjoint_and_inside(e));
}

TEST(Random, InfeasibleJitterIsPackingError) {
  ScalingParams p;
  p.d = 0.5;
  p.D = 0.9;
  EXPECT_THROW(generate_random(0.125, Box{}, p, make_spheroid(0.8, 0.5), 1), PackingError);
}

TEST(EnsembleJson, RoundTripIsExact) {
  const ParticleEnsemble e = generate_random(0.25, Box{}, ScalingParams{}, make_spheroid(0.8, 0.5), 9);
  const std::string text = ensemble_to_json(e);
  const ParticleEnsemble back = ensemble_from_json(text);
  ASSERT_EQ(back.size(), e.size());
  EXPECT_EQ(back.epsilon, e.epsilon);
  for (std::size_t i = 0; i < e.size(); ++i) {
    EXPECT_EQ(back.particles[i].center, e.particles[i].center);
    EXPECT_EQ(back.particles[i].rotation.matrix(), e.particles[i].rotation.matrix());
  }
  EXPECT_EQ(ensemble_to_json(back), text);
}

TEST(EnsembleJson, MalformedInputIsConfigError) {
  EXPECT_THROW(ensemble_from_json("{"), ConfigError);
  EXPECT_THROW(ensemble_from_json("{\"epsilon\": \"x\"}"), ConfigError);
}

TEST(Rng, NamedStreamsDiffer) {
  Rng a(1, "ensemble"), b(1, "init"), c(1, "ensemble");
  const auto x = a.next();
  EXPECT_NE(x, b.next());
  EXPECT_EQ(x, c.next());
  Rng u(5);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    ASSERT_GE(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
}

TEST(Fit, LogLogSlope) {
  EXPECT_NEAR(loglog_slope({1, 2, 4}, {3, 12, 48}), 2.0, 1e-14);
  EXPECT_TRUE(std::isnan(loglog_slope({1}, {1})));
}
