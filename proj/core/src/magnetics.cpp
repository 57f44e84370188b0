#include "ferronema/magnetics.hpp"

#include <cmath>
#include <fmt/format.h>

#include "ferronema/errors.hpp"
#include "ferronema/fit.hpp"
#include "ferronema/quadrature.hpp"

namespace ferronema {

namespace {

// (atanh t - t) / t^3, odd series below 0.1.
double g_ratio(double t) {
  if (t < 0.1) {
    const double t2 = t * t;
    double term = 1.0, sum = 0.0;
    for (int k = 1; k <= 30; ++k) {
      sum += term / (2 * k + 1);
      term *= t2;
    }
    return sum;
  }
  return (std::atanh(t) - t) / (t * t * t);
}

Vec3 dipole_field(const Vec3& p, const Vec3& r) {
  const double r2 = r.squaredNorm();
  const double inv_r = 1.0 / std::sqrt(r2);
  const double inv_r3 = inv_r * inv_r * inv_r;
  return (3.0 * p.dot(r) / r2 * r - p) * inv_r3;
}

double side_energy(const VolumeQuadrature& q, const Vec3& density, const Vec3& p_src, const Vec3& c_src) {
  Vec3 field = Vec3::Zero();
  for (std::size_t k = 0; k < q.nodes.size(); ++k) field += q.weights[k] * dipole_field(p_src, q.nodes[k] - c_src);
  return density.dot(field);
}

}  // namespace

Vec3 MagnetizedSpheroid::moment() const {
  return kFarFieldCoefficient * geometry.a * geometry.b * geometry.b * m * geometry.rotation.axis();
}

double confocal_coordinate(const Spheroid& s, const Vec3& x) {
  if (s.level(x) <= 1.0) throw DomainError("confocal_coordinate: point is not outside the spheroid");
  const Vec3 y = s.to_local(x);
  const double c2 = s.a * s.a - s.b * s.b;
  const double r2 = y.squaredNorm();
  const double z2 = y.z() * y.z();
  const double s1 = r2 + c2;
  const double disc = std::max(0.0, s1 * s1 - 4.0 * z2 * c2);
  return 0.5 * (s1 + std::sqrt(disc));
}

double exact_exterior_potential(const MagnetizedSpheroid& ms, const Vec3& x) {
  const Spheroid& s = ms.geometry;
  const double xi = confocal_coordinate(s, x);
  const double z = s.to_local(x).z();
  const double a = s.a, b = s.b;
  const double ecc2 = (a * a - b * b) / (a * a);
  const double g = (ecc2 < 1e-10) ? 1.0 / 3.0 : g_ratio(std::sqrt((a * a - b * b) / xi));
  return 4.0 * std::numbers::pi * a * b * b * ms.m * z * g / (xi * std::sqrt(xi));
}

double dipole_far_potential(const MagnetizedSpheroid& ms, const Vec3& x) {
  const Spheroid& s = ms.geometry;
  const Vec3 y = s.to_local(x);
  const double r = y.norm();
  if (r <= 2.0 * s.a)
    throw AccuracyError(fmt::format("far-field formula used at r = {} <= 2a = {}", r, 2.0 * s.a));
  return kFarFieldCoefficient * s.a * s.b * s.b * ms.m * y.z() / (r * r * r);
}

Vec3 dipole_field_H(const MagnetizedSpheroid& ms, const Vec3& x) {
  const Vec3 r = x - ms.geometry.center;
  if (r.norm() <= 2.0 * ms.geometry.a)
    throw AccuracyError(fmt::format("far-field formula used at r = {} <= 2a = {}", r.norm(), 2.0 * ms.geometry.a));
  return dipole_field(ms.moment(), r);
}

VolumeQuadrature make_volume_quadrature(const Spheroid& s, int n) {
  s.validate();
  if (n < 1) throw ConfigError("volume quadrature order must be positive");
  const GaussRule gr = gauss_legendre(n, 0.0, 1.0);
  const GaussRule gt = gauss_legendre(n);
  const double dphi = 2.0 * std::numbers::pi / n;
  const double jac = s.a * s.b * s.b;
  VolumeQuadrature q;
  q.nodes.reserve(static_cast<std::size_t>(n) * n * n);
  q.weights.reserve(q.nodes.capacity());
  for (int i = 0; i < n; ++i) {
    const double r = gr.nodes[i];
    for (int j = 0; j < n; ++j) {
      const double t = gt.nodes[j], st = std::sqrt(1.0 - t * t);
      for (int k = 0; k < n; ++k) {
        const double phi = (k + 0.5) * dphi;
        const Vec3 y(s.b * r * st * std::cos(phi), s.b * r * st * std::sin(phi), s.a * r * t);
        q.nodes.push_back(s.to_world(y));
        q.weights.push_back(jac * r * r * gr.weights[i] * gt.weights[j] * dphi);
      }
    }
  }
  return q;
}

double pair_interaction_energy(const MagnetizedSpheroid& mi, const MagnetizedSpheroid& mj, int n) {
  if (spheroids_overlap(mi.geometry, mj.geometry)) throw GeometryError("pair_interaction_energy: particles overlap");
  const VolumeQuadrature qi = make_volume_quadrature(mi.geometry, n);
  const VolumeQuadrature qj = make_volume_quadrature(mj.geometry, n);
  const Vec3 di = mi.m * mi.geometry.rotation.axis();
  const Vec3 dj = mj.m * mj.geometry.rotation.axis();
  return -(side_energy(qi, di, mj.moment(), mj.geometry.center) +
           side_energy(qj, dj, mi.moment(), mi.geometry.center));
}

PairSums ensemble_pair_energies(const ParticleEnsemble& e, double density, int n) {
  const std::size_t count = e.size();
  std::vector<VolumeQuadrature> quads;
  std::vector<Vec3> dens, moments;
  quads.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const MagnetizedSpheroid ms{e.realized(i), density};
    quads.push_back(make_volume_quadrature(ms.geometry, n));
    dens.push_back(density * ms.geometry.rotation.axis());
    moments.push_back(ms.moment());
  }
  PairSums out;
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = i + 1; j < count; ++j) {
      const double eij = -(side_energy(quads[i], dens[i], moments[j], e.particles[j].center) +
                           side_energy(quads[j], dens[j], moments[i], e.particles[i].center));
      out.total += eij;
      out.max_abs = std::max(out.max_abs, std::abs(eij));
      ++out.pairs;
    }
  return out;
}

double assumption_moment_density(const ParticleEnsemble& e) {
  return e.reference.volume() * std::pow(e.particle_scale(), 3.0) * e.params.m *
         std::pow(e.epsilon, e.params.beta1);
}

double zeeman_energy(const ParticleEnsemble& e, const ScalingParams& p) {
  const double vol_i = e.reference.volume() * std::pow(std::pow(e.epsilon, p.alpha), 3.0);
  const double density = vol_i * p.m * std::pow(e.epsilon, p.beta1);
  const Vec3 h_eps = p.h * std::pow(e.epsilon, p.beta2);
  double sum = 0.0;
  for (const Particle& q : e.particles) sum += vol_i * density * q.rotation.axis().dot(h_eps);
  return sum;
}

InteractionStudy interaction_scaling_study(const ScalingParams& p, const std::vector<double>& epsilons,
                                           const Spheroid& reference, const Box& domain,
                                           const RotationField& field, int quad_order) {
  if (epsilons.size() < 3) throw ConfigError("interaction_scaling_study needs at least 3 epsilon values");
  InteractionStudy study;
  std::vector<double> xs, pair, total, bound;
  for (double eps : epsilons) {
    const ParticleEnsemble e = generate_periodic(eps, domain, p, reference, field);
    const PairSums sums = ensemble_pair_energies(e, p.m * std::pow(eps, p.beta1), quad_order);
    const double n = static_cast<double>(e.size());
    InteractionRow row{eps, e.size(), sums.max_abs, sums.total, 0.5 * n * n * sums.max_abs,
                       zeeman_energy(e, p), std::numeric_limits<double>::quiet_NaN()};
    if (!study.rows.empty()) {
      const InteractionRow& prev = study.rows.back();
      row.slope_running = loglog_slope({prev.epsilon, eps}, {prev.pair_energy_total, row.pair_energy_total});
    }
    study.rows.push_back(row);
    xs.push_back(eps);
    pair.push_back(row.pair_energy_max);
    total.push_back(row.pair_energy_total);
    bound.push_back(row.pair_bound_total);
  }
  study.slope_pair = loglog_slope(xs, pair);
  study.slope_total = loglog_slope(xs, total);
  study.slope_bound = loglog_slope(xs, bound);
  return study;
}

}  // namespace ferronema
