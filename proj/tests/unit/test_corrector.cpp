#include <gtest/gtest.h>

#include <cmath>

#include <ferronema/corrector.hpp>
#include <ferronema/errors.hpp>

using namespace ferronema;

namespace {

// tests/oracles/sphere_cell.py (unit sphere, w = z)
struct CellOracle {
  double g, epsilon, alpha, kappa, radius, grad, l2, surf;
};
constexpr CellOracle kGolden{1.0, 0.1, 1.5, 1.1, 2.5118864315095795, 0.0012952939402457619,
                             0.00017981115889097124, 0.00055866681778769498};
constexpr CellOracle kOracles[] = {
    kGolden,
    {1.0, 0.05, 1.5, 1.25, 2.1147425268811282, 0.00016280370120007814, 1.7804909529891017e-5,
     6.5308539032147307e-5},
    {50.0, 0.1, 1.5, 1.1, 2.5118864315095795, 1.3445858084464625, 0.18665379720624609, 0.57992664947135979},
};

CellProblem problem(const CellOracle& o) {
  CellProblem cp;
  cp.particle = make_spheroid(1.0, 1.0);
  cp.g = o.g;
  cp.epsilon = o.epsilon;
  cp.alpha = o.alpha;
  cp.kappa = o.kappa;
  return cp;
}

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

}  // namespace

TEST(CellProblem, OuterRadiusAndCoefficient) {
  const CellProblem cp = problem(kGolden);
  EXPECT_NEAR(cp.outer_radius(), kGolden.radius, 1e-14);
  EXPECT_NEAR(cp.surface_coefficient(), std::pow(0.1, 1.5), 1e-15);
}

TEST(CellProblem, InvalidExponents) {
  CellProblem cp = problem(kGolden);
  cp.kappa = 1.6;
  EXPECT_THROW(cp.validate(), ConfigError);
  cp.kappa = 1.1;
  cp.alpha = 2.5;
  EXPECT_THROW(cp.validate(), ConfigError);
}

TEST(SolveCell, SphereMatchesBesselOracle) {
  for (const auto& o : kOracles) {
    const CellSolution s = solve_cell(problem(o));
    EXPECT_FALSE(s.truncated);
    EXPECT_NEAR(s.radius, o.radius, 1e-14);
    EXPECT_LT(rel(s.grad_energy, o.grad), 1e-2) << "g " << o.g << " eps " << o.epsilon;
    // the L2 part converges slowest under mesh refinement
    EXPECT_LT(rel(s.l2_energy, o.l2), 2e-2) << "g " << o.g << " eps " << o.epsilon;
    EXPECT_LT(rel(s.surf_energy, o.surf), 1e-2) << "g " << o.g << " eps " << o.epsilon;
    EXPECT_EQ(s.outer_max_abs, 0.0);
  }
}

TEST(SolveCell, RefinementApproachesOracle) {
  CellResolution coarse;
  coarse.radial = 16;
  coarse.polar = 8;
  coarse.azimuthal = 16;
  CellResolution fine;
  fine.radial = 32;
  fine.polar = 16;
  fine.azimuthal = 32;
  const CellSolution a = solve_cell(problem(kGolden), coarse);
  const CellSolution b = solve_cell(problem(kGolden), fine);
  EXPECT_LT(rel(b.grad_energy, kGolden.grad), rel(a.grad_energy, kGolden.grad));
  EXPECT_LT(rel(b.surf_energy, kGolden.surf), rel(a.surf_energy, kGolden.surf));
  EXPECT_LT(rel(b.l2_energy, kGolden.l2), rel(a.l2_energy, kGolden.l2));
}

TEST(SolveCell, ZeroAnchoringGivesExactZero) {
  CellProblem cp = problem(kGolden);
  cp.g = 0.0;
  const CellSolution s = solve_cell(cp);
  EXPECT_EQ(s.grad_energy, 0.0);
  EXPECT_EQ(s.l2_energy, 0.0);
  EXPECT_EQ(s.surf_energy, 0.0);
}

TEST(SolveCell, TooFewLayersIsResolutionError) {
  CellResolution r;
  r.radial = 8;
  EXPECT_THROW(solve_cell(problem(kGolden), r), ResolutionError);
}

TEST(SolveCell, StrongNegativeAnchoringLosesCoercivity) {
  CellProblem cp = problem(kGolden);
  cp.g = -1e5;
  EXPECT_THROW(solve_cell(cp), CoercivityError);
}

TEST(SolveCell, ProlateParticleSolves) {
  CellProblem cp = problem(kGolden);
  cp.particle = make_spheroid(2.0, 1.0);
  cp.epsilon = 0.02;
  const CellSolution s = solve_cell(cp);
  EXPECT_GT(s.grad_energy, 0.0);
  EXPECT_GT(s.surf_energy, 0.0);
  EXPECT_LT(s.residual, 1e-8);
}

TEST(CellScaling, SlopesAtLeastSixMinusTwoAlpha) {
  const CellScalingStudy st =
      cell_scaling_study(1.0, Vec3::UnitZ(), 1.5, 1.25, {0.05, 0.02, 0.01, 0.005}, make_spheroid(1.0, 1.0));
  EXPECT_DOUBLE_EQ(st.expected_slope, 3.0);
  EXPECT_GE(st.slope_grad, 2.5);
  EXPECT_GE(st.slope_l2, 2.5);
  EXPECT_GE(st.slope_surf, 2.5);
  EXPECT_FALSE(st.exact_zero);
}

TEST(CellScaling, NeedsFourValues) {
  EXPECT_THROW(cell_scaling_study(1.0, Vec3::UnitZ(), 1.5, 1.25, {0.05, 0.02, 0.01}, make_spheroid(1.0, 1.0)),
               ConfigError);
}

TEST(BoundaryTerm, ConstantFieldLimitIsGLambda1Volume) {
  const ScalingParams p;
  const Spheroid ref = make_spheroid(0.8, 0.5);
  const BoundaryTermLimit bt = boundary_term_limit([](const Vec3&) { return Vec3::UnitZ().eval(); }, p,
                                                   {0.25, 0.125}, ref, Box{}, identity_field());
  EXPECT_NEAR(bt.limit, p.g * anchoring_eigenvalues(ref).axial, 1e-12);
  for (const auto& r : bt.rows) EXPECT_LE(r.gap, 1e-12);
  EXPECT_TRUE(bt.gap_decreasing);
}

TEST(BoundaryTerm, ZeroFieldAndZeroAnchoring) {
  ScalingParams p;
  const Spheroid ref = make_spheroid(0.8, 0.5);
  const auto zero = [](const Vec3&) { return Vec3::Zero().eval(); };
  const BoundaryTermLimit a = boundary_term_limit(zero, p, {0.25, 0.125}, ref, Box{}, identity_field());
  for (const auto& r : a.rows) EXPECT_EQ(r.boundary_sum, 0.0);
  p.g = 0.0;
  const BoundaryTermLimit b = boundary_term_limit([](const Vec3&) { return Vec3::UnitX().eval(); }, p,
                                                  {0.25, 0.125}, ref, Box{}, identity_field());
  for (const auto& r : b.rows) EXPECT_EQ(r.boundary_sum, 0.0);
  EXPECT_EQ(b.limit, 0.0);
}

TEST(BoundaryTerm, SmoothFieldGapDecreases) {
  const ScalingParams p;
  const BoundaryTermLimit bt = boundary_term_limit(
      [](const Vec3& x) { return Vec3(x.y() * x.y(), 1.0, x.z()); }, p, {0.25, 0.125, 0.0625},
      make_spheroid(0.8, 0.5), Box{}, twist_field(Vec3(1, 1, 0).normalized(), Vec3(0.3, 1, 0.2), 2.0));
  EXPECT_TRUE(bt.gap_decreasing);
  EXPECT_LT(bt.rows.back().gap, 1e-2 * std::abs(bt.limit));
}
