#pragma once

#include <vector>

#include "ferronema/ensemble.hpp"
#include "ferronema/grid.hpp"

namespace ferronema {

struct MatrixField {
  Grid grid;
  std::vector<Mat3> values;
};

struct EffectiveMagnetization {
  Grid grid;
  std::vector<Vec3> values;
};

// eps^3 g sum_i delta(x - x_i) R_i T R_i^T smoothed by the normalized box
// kernel of side eta. T is the anchoring tensor of the reference particle.
MatrixField assemble_A_eps(const ParticleEnsemble& e, const ScalingParams& p, double eta,
                           const Grid& grid);

// eps^3 m Vol(P)^2 sum_i delta(x - x_i) R_i z, same kernel.
EffectiveMagnetization assemble_M_eps(const ParticleEnsemble& e, const ScalingParams& p, double eta,
                                      const Grid& grid);

// g R (lambda1 zz + lambda2 (I - zz)) R^T
MatrixField closed_form_A(const RotationField& field, double g, double lambda1, double lambda2,
                          const Grid& grid);
// amplitude * R z. Pass m for the limit of the Remark, m Vol(P)^2 to match
// assemble_M_eps.
EffectiveMagnetization closed_form_M(const RotationField& field, double amplitude, const Grid& grid);

// Lambda (M,u)^2 + (g lambda2/m^2)|u|^2 - 2(h,M), Lambda = g(lambda1-lambda2)/m^2.
double coupling_density(const Vec3& u, const Vec3& M, const Vec3& h, double g, double m,
                        double lambda1, double lambda2);

struct BurylovCoefficients {
  double K1 = 1.0, K2 = 1.0, K3 = 1.0;
  double chi_a = 0.0;
  double Ms = 1.0;
  double f = 0.01;
  double kT_over_nu = 1.0;
  double A_anch = 1.0;
  double Ws = 1.0;
  double dp = 1.0;
};

// Pointwise macroscopic density of Burylov and Raikher for a unit director
// field n sampled on `grid`. div and curl by second-order differences,
// one-sided on the boundary.
std::vector<double> burylov_density(const Grid& grid, const std::vector<Vec3>& n, const Vec3& m_unit,
                                    const Vec3& H, const BurylovCoefficients& c);

// Largest Frobenius difference over nodes at least `margin` away from the
// box boundary.
double max_interior_deviation(const MatrixField& x, const MatrixField& y, double margin);
double max_interior_deviation(const EffectiveMagnetization& x, const EffectiveMagnetization& y,
                              double margin);

}  // namespace ferronema
