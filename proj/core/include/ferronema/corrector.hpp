#pragma once

#include <limits>
#include <vector>

#include "ferronema/energy.hpp"

namespace ferronema {

// Rescaled local problem around one particle: minimize
//   int_{B_R \ P} |grad u|^2 + |u|^2 + g eps^{3-alpha} int_{dP} (u + w, nu)^2
// with u = 0 on |y| = R, R = eps^{kappa - alpha}.
struct CellProblem {
  Spheroid particle;  // centered at the origin
  Vec3 w = Vec3::UnitZ();
  double g = 1.0;
  double epsilon = 0.1;
  double alpha = 1.5;
  double kappa = 1.25;

  double outer_radius() const;
  double surface_coefficient() const;  // g eps^{3 - alpha}
  void validate() const;
};

struct CellResolution {
  int radial = 24;     // element layers between dP and the outer sphere
  int polar = 16;      // intervals in theta
  int azimuthal = 32;  // intervals in phi
  double growth = 1.12;  // geometric ratio of consecutive layer thicknesses
  double max_radius = 20.0;  // larger R is truncated here
  double tol = 1e-10;  // relative residual of the linear solve
};

struct CellSolution {
  double grad_energy = 0.0;  // int |grad u|^2
  double l2_energy = 0.0;    // int |u|^2
  double surf_energy = 0.0;  // int_{dP} |u|^2
  double functional = 0.0;   // full local functional at the minimizer
  double radius = 0.0;       // radius actually used
  bool truncated = false;
  int iterations = 0;
  double residual = 0.0;     // relative residual of the discrete Euler-Lagrange system
  std::size_t dofs = 0;
  double outer_max_abs = 0.0;  // max |u| on the outer sphere, zero by construction

  // nodal values and positions for inspection/output
  std::vector<Vec3> nodes;
  std::vector<Vec3> values;
};

// Q1 hexahedral finite elements on a spherical-shell mesh graded away from
// dP; poles carry a single node per layer. Jacobi preconditioned CG; a
// direction of non-positive curvature raises CoercivityError.
CellSolution solve_cell(const CellProblem& cp, const CellResolution& res = {});

struct CellScalingRow {
  double epsilon;
  double radius;
  double grad_energy;
  double l2_energy;
  double surf_energy;
  bool truncated;
};

struct CellScalingStudy {
  std::vector<CellScalingRow> rows;
  double slope_grad = std::numeric_limits<double>::quiet_NaN();
  double slope_l2 = std::numeric_limits<double>::quiet_NaN();
  double slope_surf = std::numeric_limits<double>::quiet_NaN();
  bool exact_zero = false;  // every energy identically zero
  double expected_slope = 0.0;  // 6 - 2 alpha
};

// Needs at least 4 epsilons spanning a decade.
CellScalingStudy cell_scaling_study(double g, const Vec3& w, double alpha, double kappa,
                                    const std::vector<double>& epsilons, const Spheroid& particle,
                                    const CellResolution& res = {});

struct BoundaryTermRow {
  double epsilon;
  std::size_t n_particles;
  double boundary_sum;  // g eps^3 sum_i int_{dP} (w(x_i), R_i nu)^2
  double gap;           // |boundary_sum - limit|
};

struct BoundaryTermLimit {
  std::vector<BoundaryTermRow> rows;
  double limit;  // int_Omega (A w, w) with A from closed_form_A
  bool gap_decreasing;  // consecutive gaps below 1e-12 max(1, limit) count as decreasing
};

BoundaryTermLimit boundary_term_limit(const VectorFunction& w, const ScalingParams& p,
                                      const std::vector<double>& epsilons, const Spheroid& reference,
                                      const Box& domain, const RotationField& field, int gl_order = 16);

}  // namespace ferronema
