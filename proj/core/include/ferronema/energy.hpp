#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "ferronema/effective.hpp"
#include "ferronema/ensemble.hpp"
#include "ferronema/errors.hpp"
#include "ferronema/grid.hpp"

namespace ferronema {

enum class NodeKind : std::uint8_t { Fluid, Particle, Dirichlet };

using VectorFunction = std::function<Vec3(const Vec3&)>;

// Nodal field u with its particle mask and Dirichlet data.
struct VectorField {
  Grid grid;
  std::vector<Vec3> values;
  std::vector<NodeKind> mask;
  std::vector<Vec3> dirichlet;  // meaningful on Dirichlet nodes only

  std::size_t size() const { return values.size(); }
  bool fixed(std::size_t i) const { return mask[i] != NodeKind::Fluid; }
  void enforce_dirichlet();
};

// Boundary nodes are Dirichlet with data U; nodes inside a realized particle
// (if `e` is given) are Particle nodes holding zero; all others hold U.
VectorField make_vector_field(const Grid& grid, const VectorFunction& U, const ParticleEnsemble* e = nullptr);

struct EnergyBreakdown {
  double bulk_gradient = 0.0;
  double bulk_potential = 0.0;
  double surface = 0.0;  // (Au,u) for the homogenized energy
  double magnetic_pair = 0.0;
  double zeeman = 0.0;   // -2 (h,M) for the homogenized energy
  double total = 0.0;

  double sum_of_parts() const { return bulk_gradient + bulk_potential + surface + magnetic_pair + zeeman; }
};

// One surface quadrature node after interpolation: u(node) is
// sum_c alpha_c u[corner_c] over the non-particle corners of its cell.
struct SurfaceEntry {
  std::array<std::uint32_t, 8> corner;
  std::array<double, 8> alpha;
  int count;
  Vec3 normal;
  double weight;  // g_eps w_q
};

struct MicroOptions {
  int surface_polar = 16;
  int surface_azimuthal = 32;
  int pair_quadrature = 4;
  bool include_pair = true;
};

// E(u + t d) = c[0] + c[1] t + c[2] t^2 + c[3] t^3 + c[4] t^4.
using Quartic = std::array<double, 5>;

// Discrete energy on a masked grid. Bulk gradient is the edge sum
// sum_e w_perp |u_q - u_p|^2 / h over edges whose endpoints are not inside a
// particle; node terms use trapezoid weights.
class EnergyModel {
 public:
  // Ginzburg-Landau part only.
  static EnergyModel bulk(const VectorField& layout);
  static EnergyModel micro(const VectorField& layout, const ParticleEnsemble& e, const MicroOptions& opt = {});
  static EnergyModel homogenized(const VectorField& layout, const MatrixField& A, const EffectiveMagnetization& M,
                                 const Vec3& h);

  EnergyBreakdown evaluate(const std::vector<Vec3>& u) const;
  // Returns the breakdown and writes dE/du (zero on fixed nodes).
  EnergyBreakdown evaluate(const std::vector<Vec3>& u, std::vector<Vec3>& grad) const;
  // Coefficients along u + t d, given E(u) and dE/du . d.
  Quartic line_polynomial(const std::vector<Vec3>& u, const std::vector<Vec3>& d, double e0, double slope) const;

  const Grid& grid() const { return grid_; }
  const std::vector<NodeKind>& mask() const { return mask_; }
  const std::vector<double>& node_weights() const { return weights_; }
  double fluid_volume() const { return fluid_volume_; }
  bool negative_anchoring() const { return negative_anchoring_; }
  const std::vector<SurfaceEntry>& surface_entries() const { return surface_; }

 private:
  EnergyModel() = default;
  void init_layout(const VectorField& layout);
  double quadratic_form(const std::vector<Vec3>& d) const;

  Grid grid_;
  std::vector<NodeKind> mask_;
  std::vector<double> weights_;  // trapezoid weight, zero inside particles
  std::array<std::vector<double>, 3> w1d_;
  std::vector<Mat3> a_weighted_;  // w_n A_n, homogenized only
  std::vector<SurfaceEntry> surface_;
  double fluid_volume_ = 0.0;
  double magnetic_pair_ = 0.0;
  double zeeman_ = 0.0;
  bool negative_anchoring_ = false;
};

// Interpolation of the spheroid surfaces of `e` onto the grid of `layout`.
// Throws ResolutionError if a particle is thinner than two cells.
std::vector<SurfaceEntry> build_surface_coupling(const VectorField& layout, const ParticleEnsemble& e,
                                                 double g_eps, int n_polar, int n_azimuthal);

struct BulkParts {
  double gradient;
  double potential;
};
BulkParts bulk_energy(const VectorField& f);
double surface_energy(const VectorField& f, const ParticleEnsemble& e, const ScalingParams& p,
                      const MicroOptions& opt = {});
EnergyBreakdown micro_energy(const VectorField& f, const ParticleEnsemble& e, const ScalingParams& p,
                             const MicroOptions& opt = {});
EnergyBreakdown homog_energy(const VectorField& f, const MatrixField& A, const EffectiveMagnetization& M,
                             const Vec3& h);
VectorField gradient(const EnergyModel& model, const VectorField& f);

struct MinimizeOptions {
  double tol = 1e-6;
  int max_iter = 50000;
  // Abort if -surface exceeds 10 max(bulk, fluid volume) with g < 0.
  bool monitor_negative_anchoring = true;
  std::function<void(int, const EnergyBreakdown&, double)> observer;
};

struct MinimizeResult {
  VectorField field;
  int iterations = 0;
  double grad_norm = 0.0;  // max over fluid nodes of |dE/du_i| / w_i
  EnergyBreakdown energy;
  bool converged = false;
};

class StalledDescentError : public NumericalError {
 public:
  StalledDescentError(const std::string& what, VectorField last)
      : NumericalError(what), last_(std::move(last)) {}
  const VectorField& last_iterate() const { return last_; }

 private:
  VectorField last_;
};

// Polak-Ribiere+ nonlinear conjugate gradient, gradients scaled by the node
// weights, step from the exact quartic along the search line with an Armijo
// backtracking safeguard.
MinimizeResult minimize(const EnergyModel& model, const VectorField& f0, const MinimizeOptions& opt = {});

// Fluid nodes replaced by the discrete harmonic function with the Dirichlet
// data (7-point Laplacian restricted to non-particle edges).
VectorField harmonic_initial_guess(const VectorField& f);

struct Extension {
  VectorField field;      // all nodes filled, mask kept
  double h1_input;        // H1 norm on the fluid part
  double h1_extended;     // H1 norm on the whole box
  double ratio() const { return h1_input > 0.0 ? h1_extended / h1_input : 0.0; }
};

// Particle nodes filled with the discrete harmonic extension of the
// surrounding values.
Extension extend(const VectorField& f);

// Discrete H1 norm: all edges and nodes if `masked` is false, otherwise only
// the fluid part.
double h1_norm(const VectorField& f, bool masked);
// int_{fluid} |u - v|^2 with trapezoid weights.
double masked_l2_distance_sq(const VectorField& u, const VectorField& v);

}  // namespace ferronema
