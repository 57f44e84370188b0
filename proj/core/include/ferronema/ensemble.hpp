#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ferronema/geometry.hpp"

namespace ferronema {

// Exponents and amplitudes of the scaling assumptions. Surface anchoring is
// g eps^gamma, the particle moment density m eps^beta1, the applied field
// h eps^beta2; d and D bound center distances in units of eps.
struct ScalingParams {
  double alpha = 1.5;
  double beta1 = 1.0;
  double beta2 = -7.0;
  double gamma = 0.0;
  double g = 1.0;
  double m = 1.0;
  Vec3 h = Vec3::Zero();
  double d = 0.9;
  double D = 1.5;
};

struct ScalingCheck {
  std::string relation;
  bool passed;
  double residual;  // signed slack; >0 satisfied for inequalities, 0 for equalities
};

// All five relations with their residuals.
std::vector<ScalingCheck> check_scalings(const ScalingParams& p);
// Only the violated ones; empty means valid.
std::vector<ScalingCheck> validate_scalings(const ScalingParams& p);
// Throws ConfigError naming every violated relation.
void require_valid_scalings(const ScalingParams& p);

struct Box {
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Ones();

  Vec3 extent() const { return hi - lo; }
  double volume() const { return extent().prod(); }
  bool contains(const Vec3& x) const {
    return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
  }
};

struct Particle {
  Vec3 center;
  Rotation rotation;
};

using RotationField = std::function<Rotation(const Vec3&)>;

RotationField identity_field();
// R(x) = rotation about `axis` by rate * (direction . x).
RotationField twist_field(const Vec3& axis, const Vec3& direction, double rate);
// Constant rotation taking z to `direction`.
RotationField constant_field(const Vec3& direction);

struct ParticleEnsemble {
  double epsilon = 0.0;
  Box domain;
  Spheroid reference;  // unit-scale P, centered at the origin, unrotated
  ScalingParams params;
  std::vector<Particle> particles;

  std::size_t size() const { return particles.size(); }
  double particle_scale() const;  // eps^alpha
  // x_i + eps^alpha R_i P
  Spheroid realized(std::size_t i) const;
};

// Cell-centered cubic lattice of side eps, each particle owning a whole cell
// inside the domain. Requires d <= 1 <= D.
ParticleEnsemble generate_periodic(double epsilon, const Box& domain, const ScalingParams& p,
                                   const Spheroid& reference, const RotationField& field);

// Jittered cell-centered lattice with hard-core rejection and uniformly
// random orientations. Deterministic in `seed`.
ParticleEnsemble generate_random(double epsilon, const Box& domain, const ScalingParams& p,
                                 const Spheroid& reference, std::uint64_t seed,
                                 int retry_budget = 1000);

double volume_fraction(const ParticleEnsemble& e);

// Distance from each center to its nearest neighbor (empty for N < 2).
std::vector<double> nearest_neighbor_distances(const ParticleEnsemble& e);

// Throws GeometryError if realized particles overlap or leave the domain.
void check_disjoint_and_inside(const ParticleEnsemble& e);

// N = (|Omega| + 1) / d^3, the count bound N_eps <= N eps^-3.
double count_bound(const ParticleEnsemble& e);

// UTF-8 JSON with 17 significant digits; round trip is bit exact.
std::string ensemble_to_json(const ParticleEnsemble& e);
ParticleEnsemble ensemble_from_json(const std::string& text);

}  // namespace ferronema
