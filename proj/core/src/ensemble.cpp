#include "ferronema/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numbers>

#include "ferronema/errors.hpp"
#include "ferronema/random.hpp"

namespace ferronema {

namespace {

bool nearly_equal(double x, double y) {
  return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
}

Rotation random_rotation(Rng& rng) {
  // Shoemake's uniform quaternion.
  const double u1 = rng.uniform(), u2 = rng.uniform(), u3 = rng.uniform();
  const double s1 = std::sqrt(1.0 - u1), s2 = std::sqrt(u1);
  const double t1 = 2.0 * std::numbers::pi * u2, t2 = 2.0 * std::numbers::pi * u3;
  return Rotation::from_quaternion(s2 * std::cos(t2), s1 * std::sin(t1), s1 * std::cos(t1),
                                   s2 * std::sin(t2));
}

struct Lattice {
  int n[3];
  Vec3 origin;  // center of cell (0,0,0)
};

Lattice make_lattice(double epsilon, const Box& domain) {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  const Vec3 ext = domain.extent();
  if ((ext.array() <= 0.0).any()) throw ConfigError("domain box is empty");
  Lattice lat{};
  for (int k = 0; k < 3; ++k) lat.n[k] = static_cast<int>(std::floor(ext[k] / epsilon + 1e-9));
  if (static_cast<long>(lat.n[0]) * lat.n[1] * lat.n[2] < 8 || std::min({lat.n[0], lat.n[1], lat.n[2]}) < 1)
    throw ConfigError(fmt::format("epsilon={} too large: fewer than 8 lattice cells fit in the domain", epsilon));
  for (int k = 0; k < 3; ++k)
    lat.origin[k] = domain.lo[k] + 0.5 * (ext[k] - lat.n[k] * epsilon) + 0.5 * epsilon;
  return lat;
}

}  // namespace

std::vector<ScalingCheck> check_scalings(const ScalingParams& p) {
  std::vector<ScalingCheck> out;
  out.push_back({"1<alpha<2", p.alpha > 1.0 && p.alpha < 2.0,
                 std::min(p.alpha - 1.0, 2.0 - p.alpha)});
  const double r2 = 6.0 * p.alpha + 2.0 * p.beta1 - 9.0;
  out.push_back({"6alpha+2beta1>9", r2 > 0.0, r2});
  const double lhs3 = p.beta2 + p.beta1, rhs3 = 3.0 - 6.0 * p.alpha;
  out.push_back({"beta2+beta1=3-6alpha", nearly_equal(lhs3, rhs3), lhs3 - rhs3});
  const double rhs4 = 3.0 - 2.0 * p.alpha;
  out.push_back({"gamma=3-2alpha", nearly_equal(p.gamma, rhs4), p.gamma - rhs4});
  out.push_back({"0<d<D", p.d > 0.0 && p.d < p.D, std::min(p.d, p.D - p.d)});
  return out;
}

std::vector<ScalingCheck> validate_scalings(const ScalingParams& p) {
  std::vector<ScalingCheck> all = check_scalings(p);
  std::erase_if(all, [](const ScalingCheck& c) { return c.passed; });
  return all;
}

void require_valid_scalings(const ScalingParams& p) {
  const auto bad = validate_scalings(p);
  if (bad.empty()) return;
  std::string msg = "invalid scaling parameters:";
  for (const auto& c : bad) msg += fmt::format(" [{} violated, residual {:.6g}]", c.relation, c.residual);
  throw ConfigError(msg);
}

RotationField identity_field() {
  return [](const Vec3&) { return Rotation(); };
}

RotationField twist_field(const Vec3& axis, const Vec3& direction, double rate) {
  return [axis, direction, rate](const Vec3& x) {
    return Rotation::about_axis(axis, rate * direction.dot(x));
  };
}

RotationField constant_field(const Vec3& direction) {
  const Vec3 z = Vec3::UnitZ();
  const Vec3 n = direction.normalized();
  const Rotation r = Rotation::from_matrix(
      Eigen::Quaterniond::FromTwoVectors(z, n).normalized().toRotationMatrix());
  return [r](const Vec3&) { return r; };
}

double ParticleEnsemble::particle_scale() const { return std::pow(epsilon, params.alpha); }

Spheroid ParticleEnsemble::realized(std::size_t i) const {
  const double s = particle_scale();
  return Spheroid{particles[i].center, reference.a * s, reference.b * s, particles[i].rotation};
}

void check_disjoint_and_inside(const ParticleEnsemble& e) {
  const std::size_t n = e.size();
  const double s = e.particle_scale();
  const double reach = 2.0 * e.reference.a * s;
  for (std::size_t i = 0; i < n; ++i) {
    const Spheroid si = e.realized(i);
    const Vec3 pad = Vec3::Constant(si.a);
    if (!e.domain.contains(si.center - pad) || !e.domain.contains(si.center + pad))
      throw GeometryError(fmt::format("particle {} is not inside the domain", i));
    for (std::size_t j = i + 1; j < n; ++j) {
      if ((e.particles[i].center - e.particles[j].center).norm() >= reach) continue;
      if (spheroids_overlap(si, e.realized(j)))
        throw GeometryError(fmt::format("particles {} and {} overlap", i, j));
    }
  }
}

ParticleEnsemble generate_periodic(double epsilon, const Box& domain, const ScalingParams& p,
                                   const Spheroid& reference, const RotationField& field) {
  require_valid_scalings(p);
  reference.validate();
  if (p.d > 1.0 || p.D < 1.0)
    throw ConfigError(fmt::format(
        "periodic lattice has nearest-neighbor distance eps; need d <= 1 <= D (d={}, D={})", p.d, p.D));
  const Lattice lat = make_lattice(epsilon, domain);
  ParticleEnsemble e;
  e.epsilon = epsilon;
  e.domain = domain;
  e.reference = Spheroid{Vec3::Zero(), reference.a, reference.b, Rotation()};
  e.params = p;
  e.particles.reserve(static_cast<std::size_t>(lat.n[0]) * lat.n[1] * lat.n[2]);
  for (int i = 0; i < lat.n[0]; ++i)
    for (int j = 0; j < lat.n[1]; ++j)
      for (int k = 0; k < lat.n[2]; ++k) {
        const Vec3 x = lat.origin + epsilon * Vec3(i, j, k);
        e.particles.push_back({x, field(x)});
      }
  check_disjoint_and_inside(e);
  return e;
}

ParticleEnsemble generate_random(double epsilon, const Box& domain, const ScalingParams& p,
                                 const Spheroid& reference, std::uint64_t seed, int retry_budget) {
  if (p.D < p.d) throw ConfigError(fmt::format("D={} is smaller than d={}", p.D, p.d));
  require_valid_scalings(p);
  reference.validate();
  const Lattice lat = make_lattice(epsilon, domain);
  const double jitter = epsilon * std::min((p.D - 1.0) / (2.0 * std::sqrt(3.0)), 0.5 * (1.0 - p.d));
  if (!(jitter > 0.0))
    throw PackingError(fmt::format(
        "jittered lattice infeasible: need d < 1 < D for nearest-neighbor bounds (d={}, D={})", p.d, p.D));

  ParticleEnsemble e;
  e.epsilon = epsilon;
  e.domain = domain;
  e.reference = Spheroid{Vec3::Zero(), reference.a, reference.b, Rotation()};
  e.params = p;
  Rng rng(seed, "ensemble");
  const double dmin = p.d * epsilon;
  long total_rejections = 0;
  for (int i = 0; i < lat.n[0]; ++i)
    for (int j = 0; j < lat.n[1]; ++j)
      for (int k = 0; k < lat.n[2]; ++k) {
        const Vec3 site = lat.origin + epsilon * Vec3(i, j, k);
        bool placed = false;
        for (int attempt = 0; attempt < retry_budget && !placed; ++attempt) {
          const Vec3 x = site + Vec3(rng.uniform(-jitter, jitter), rng.uniform(-jitter, jitter),
                                     rng.uniform(-jitter, jitter));
          placed = std::none_of(e.particles.begin(), e.particles.end(),
                                [&](const Particle& q) { return (q.center - x).norm() < dmin; });
          if (placed) {
            e.particles.push_back({x, random_rotation(rng)});
          } else {
            ++total_rejections;
          }
        }
        if (!placed)
          throw PackingError(fmt::format(
              "rejection sampling exhausted {} retries at site ({},{},{}); {} particles placed, "
              "{} rejections, jitter {:.6g}, d*eps {:.6g}",
              retry_budget, i, j, k, e.particles.size(), total_rejections, jitter, dmin));
      }
  const auto nn = nearest_neighbor_distances(e);
  for (std::size_t i = 0; i < nn.size(); ++i)
    if (nn[i] < dmin || nn[i] > p.D * epsilon)
      throw PackingError(fmt::format("nearest-neighbor distance {:.6g} of particle {} outside [{:.6g}, {:.6g}]",
                                     nn[i], i, dmin, p.D * epsilon));
  check_disjoint_and_inside(e);
  return e;
}

double volume_fraction(const ParticleEnsemble& e) {
  return static_cast<double>(e.size()) * e.reference.volume() *
         std::pow(e.epsilon, 3.0 * e.params.alpha) / e.domain.volume();
}

std::vector<double> nearest_neighbor_distances(const ParticleEnsemble& e) {
  const std::size_t n = e.size();
  if (n < 2) return {};
  std::vector<double> out(n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double r = (e.particles[i].center - e.particles[j].center).norm();
      out[i] = std::min(out[i], r);
      out[j] = std::min(out[j], r);
    }
  return out;
}

double count_bound(const ParticleEnsemble& e) {
  const double d = e.params.d;
  return (e.domain.volume() + 1.0) / (d * d * d) * std::pow(e.epsilon, -3.0);
}

}  // namespace ferronema
