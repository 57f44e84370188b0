#pragma once

#include <vector>

#include "ferronema/energy.hpp"
#include "ferronema/random.hpp"

namespace ferronema {

// Smooth test field with its Jacobian J_ij = d u_i / d x_j.
struct SmoothField {
  std::function<Vec3(const Vec3&)> value;
  std::function<Mat3(const Vec3&)> jacobian;
};

SmoothField constant_smooth_field(const Vec3& c);
// Componentwise polynomial of total degree <= `degree` in (x - origin) / scale
// with coefficients uniform in [-1, 1].
SmoothField random_polynomial_field(Rng& rng, int degree, const Vec3& origin, double scale);

struct Lemma1Result {
  double lhs;        // int_{dP} |u|^2
  double grad_term;  // int_{hat P \ P} |grad u|^2
  double l2_term;    // int_{hat P \ P} |u|^2
  double rhs;
  bool holds;
};

// Surface trace inequality on the spheroid s, with hat P the homothetic copy
// scaled by hat_ratio. Constants in the lemma's letters: A = s.b
// (equatorial), B = s.a (polar), hat A = hat_ratio A:
//   lhs <= 3 B^2 (1 + lambda)/A grad_term + (1 + 1/lambda) 24 A^2/(7 hat A^3) l2_term.
Lemma1Result lemma1_check(const SmoothField& u, const Spheroid& s, double lambda, double hat_ratio, int n = 24);

struct Lemma2Sample {
  double surface;   // g_eps sum_i int_{dP_i} (u, nu)^2
  double gradient;  // int_{Omega \ P} |grad u|^2
  double l2;        // int_{Omega \ P} |u|^2
  double constant;  // surface / ((1 + lambda)(eps gradient + l2 / lambda))
};

// Smallest C in the aggregate surface estimate for one field and ensemble.
// Volume integrals use the trapezoid rule on `grid` outside the particles.
Lemma2Sample lemma2_constant(const SmoothField& u, const ParticleEnsemble& e, double lambda, const Grid& grid,
                             int n_polar = 16, int n_azimuthal = 32);

struct UniformBoundRow {
  double epsilon;
  std::size_t n_particles;
  double energy_U;        // E_eps[U]
  double energy_min;      // E_eps[u_eps]
  double h1_extended;     // H1 norm of the extended minimizer
  double extension_ratio;
  int iterations;
};

struct UniformBoundStudy {
  std::vector<UniformBoundRow> rows;
  double energy_ratio;  // max/min of |energy_min| over the sweep (negative anchoring can make it negative)
  double h1_ratio;
  bool bounded;         // both ratios < 2 and energy_min <= energy_U everywhere
};

// Periodic ensembles over the epsilon list (>= 3), minimized from the
// harmonic lift of U. Magnetic constants are left out of E_eps.
UniformBoundStudy uniform_bound_study(const ScalingParams& p, const std::vector<double>& epsilons,
                                      const VectorFunction& U, const Spheroid& reference, const Box& domain,
                                      const RotationField& field, int grid_n, const MinimizeOptions& opt = {});

}  // namespace ferronema
