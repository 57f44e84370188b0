#pragma once

#include <numbers>
#include <vector>

#include "ferronema/ensemble.hpp"
#include "ferronema/geometry.hpp"

namespace ferronema {

// Leading Taylor coefficient of the exact exterior potential,
// phi ~ c a b^2 m z / r^3.
inline constexpr double kFarFieldCoefficient = 4.0 * std::numbers::pi / 3.0;

struct MagnetizedSpheroid {
  Spheroid geometry;
  double m = 1.0;  // moment density

  // (4 pi a b^2 m / 3) along the symmetry axis
  Vec3 moment() const;
};

// Largest root xi of rho^2/(xi + b^2 - a^2) + z^2/xi = 1 in the particle
// frame. Throws DomainError unless x is strictly outside.
double confocal_coordinate(const Spheroid& s, const Vec3& x);

// Exterior potential of the uniformly magnetized spheroid,
// 4 pi a b^2 m z (atanh t - t)/(a^2 - b^2)^{3/2}, t = sqrt((a^2 - b^2)/xi).
double exact_exterior_potential(const MagnetizedSpheroid& ms, const Vec3& x);

// c a b^2 m z / r^3. Throws AccuracyError for |x - center| <= 2a.
double dipole_far_potential(const MagnetizedSpheroid& ms, const Vec3& x);
// -grad of the far potential: (3 (p.r) r / r^2 - p) / r^3.
Vec3 dipole_field_H(const MagnetizedSpheroid& ms, const Vec3& x);

struct VolumeQuadrature {
  std::vector<Vec3> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre in radius, cos(theta) and phi on the stretched unit ball;
// n^3 nodes.
VolumeQuadrature make_volume_quadrature(const Spheroid& s, int n = 8);

// -( int_{P_i} (H_j, m_i) + int_{P_j} (H_i, m_j) ), with m the moment
// density vector and H the point-dipole field of the other particle. The
// coaxial, attracting configuration is negative.
double pair_interaction_energy(const MagnetizedSpheroid& mi, const MagnetizedSpheroid& mj, int n = 8);

// Pair energies of an ensemble with moment density `density` per particle,
// summed over i < j in index order.
struct PairSums {
  double total = 0.0;     // signed sum
  double max_abs = 0.0;   // largest single pair
  std::size_t pairs = 0;
};
PairSums ensemble_pair_energies(const ParticleEnsemble& e, double density, int n = 4);

// Moment density of assumption 3: Vol(P_i^eps) m eps^beta1.
double assumption_moment_density(const ParticleEnsemble& e);

// sum_i Vol(P_i) (m_i, h_eps), m_i = Vol(P_i) m eps^beta1 R_i z,
// h_eps = h eps^beta2.
double zeeman_energy(const ParticleEnsemble& e, const ScalingParams& p);

struct InteractionRow {
  double epsilon;
  std::size_t n_particles;
  double pair_energy_max;    // largest |E_ij|, a nearest-neighbor pair
  double pair_energy_total;  // signed sum over i < j
  double pair_bound_total;   // N^2 / 2 * pair_energy_max
  double zeeman_energy;
  double slope_running;      // d log|total| / d log eps against the previous row
};

struct InteractionStudy {
  std::vector<InteractionRow> rows;
  double slope_pair;
  double slope_total;
  double slope_bound;
};

// Periodic ensembles over the epsilon list. Moments use density
// m eps^beta1 (the normalization of the pair estimate).
InteractionStudy interaction_scaling_study(const ScalingParams& p, const std::vector<double>& epsilons,
                                           const Spheroid& reference, const Box& domain,
                                           const RotationField& field, int quad_order = 4);

}  // namespace ferronema
