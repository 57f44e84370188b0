#include "ferronema/energy.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "ferronema/magnetics.hpp"

namespace ferronema {

void VectorField::enforce_dirichlet() {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (mask[i] == NodeKind::Dirichlet) values[i] = dirichlet[i];
    else if (mask[i] == NodeKind::Particle) values[i].setZero();
  }
}

VectorField make_vector_field(const Grid& grid, const VectorFunction& U, const ParticleEnsemble* e) {
  VectorField f;
  f.grid = grid;
  f.values.resize(grid.size());
  f.mask.assign(grid.size(), NodeKind::Fluid);
  f.dirichlet.assign(grid.size(), Vec3::Zero());
  if (e) {
    const Vec3 h = grid.spacing();
    for (std::size_t p = 0; p < e->size(); ++p) {
      const Spheroid s = e->realized(p);
      int lo[3], hi[3];
      for (int k = 0; k < 3; ++k) {
        lo[k] = std::max(0, static_cast<int>(std::floor((s.center[k] - s.a - grid.box.lo[k]) / h[k])));
        hi[k] = std::min(grid.n[k] - 1, static_cast<int>(std::ceil((s.center[k] + s.a - grid.box.lo[k]) / h[k])));
      }
      for (int k = lo[2]; k <= hi[2]; ++k)
        for (int j = lo[1]; j <= hi[1]; ++j)
          for (int i = lo[0]; i <= hi[0]; ++i)
            if (s.contains(grid.position(i, j, k))) f.mask[grid.index(i, j, k)] = NodeKind::Particle;
    }
  }
  for (int k = 0; k < grid.n[2]; ++k)
    for (int j = 0; j < grid.n[1]; ++j)
      for (int i = 0; i < grid.n[0]; ++i) {
        const std::size_t idx = grid.index(i, j, k);
        const Vec3 x = grid.position(i, j, k);
        if (grid.on_boundary(i, j, k)) {
          f.mask[idx] = NodeKind::Dirichlet;
          f.dirichlet[idx] = U(x);
        }
        f.values[idx] = f.mask[idx] == NodeKind::Particle ? Vec3::Zero() : U(x);
      }
  return f;
}

namespace {

// f(p, q, c) for every edge p -> p + e_axis with both ends outside particles,
// c = (transverse trapezoid weight) / h_axis.
template <class F>
void for_each_edge(const Grid& g, const std::vector<NodeKind>& mask, const std::array<std::vector<double>, 3>& w1d,
                   F&& f) {
  const Vec3 h = g.spacing();
  const std::size_t sx = 1, sy = static_cast<std::size_t>(g.n[0]), sz = sy * g.n[1];
  for (int k = 0; k < g.n[2]; ++k)
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i) {
        const std::size_t p = g.index(i, j, k);
        if (mask[p] == NodeKind::Particle) continue;
        if (i + 1 < g.n[0] && mask[p + sx] != NodeKind::Particle) f(p, p + sx, w1d[1][j] * w1d[2][k] / h.x());
        if (j + 1 < g.n[1] && mask[p + sy] != NodeKind::Particle) f(p, p + sy, w1d[0][i] * w1d[2][k] / h.y());
        if (k + 1 < g.n[2] && mask[p + sz] != NodeKind::Particle) f(p, p + sz, w1d[0][i] * w1d[1][j] / h.z());
      }
}

double interpolate_dot(const SurfaceEntry& s, const std::vector<Vec3>& u) {
  Vec3 v = Vec3::Zero();
  for (int c = 0; c < s.count; ++c) v += s.alpha[c] * u[s.corner[c]];
  return v.dot(s.normal);
}

}  // namespace

void EnergyModel::init_layout(const VectorField& layout) {
  grid_ = layout.grid;
  mask_ = layout.mask;
  const Vec3 h = grid_.spacing();
  for (int a = 0; a < 3; ++a) {
    w1d_[a].assign(grid_.n[a], h[a]);
    w1d_[a].front() *= 0.5;
    w1d_[a].back() *= 0.5;
  }
  weights_.resize(grid_.size());
  fluid_volume_ = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    weights_[i] = mask_[i] == NodeKind::Particle ? 0.0 : grid_.weight(i);
    fluid_volume_ += weights_[i];
  }
}

EnergyModel EnergyModel::bulk(const VectorField& layout) {
  EnergyModel m;
  m.init_layout(layout);
  return m;
}

std::vector<SurfaceEntry> build_surface_coupling(const VectorField& layout, const ParticleEnsemble& e,
                                                 double g_eps, int n_polar, int n_azimuthal) {
  const Grid& g = layout.grid;
  const Vec3 h = g.spacing();
  const double scale = e.particle_scale();
  if (e.reference.b * scale < g.max_spacing())
    throw ResolutionError(fmt::format(
        "particles are thinner than two grid cells: 2b eps^alpha = {:.4g}, spacing {:.4g}",
        2.0 * e.reference.b * scale, g.max_spacing()));
  std::vector<SurfaceEntry> out;
  out.reserve(e.size() * static_cast<std::size_t>(n_polar) * n_azimuthal);
  for (std::size_t p = 0; p < e.size(); ++p) {
    const SurfaceQuadrature q = make_surface_quadrature(e.realized(p), n_polar, n_azimuthal);
    for (std::size_t n = 0; n < q.size(); ++n) {
      const Vec3 t = (q.nodes[n] - g.box.lo).cwiseQuotient(h);
      int base[3];
      double frac[3];
      for (int a = 0; a < 3; ++a) {
        base[a] = std::clamp(static_cast<int>(std::floor(t[a])), 0, g.n[a] - 2);
        frac[a] = t[a] - base[a];
      }
      SurfaceEntry s{};
      double total = 0.0;
      for (int c = 0; c < 8; ++c) {
        const int di = c & 1, dj = (c >> 1) & 1, dk = (c >> 2) & 1;
        const std::size_t idx = g.index(base[0] + di, base[1] + dj, base[2] + dk);
        if (layout.mask[idx] == NodeKind::Particle) continue;
        const double w = (di ? frac[0] : 1.0 - frac[0]) * (dj ? frac[1] : 1.0 - frac[1]) *
                         (dk ? frac[2] : 1.0 - frac[2]);
        if (w <= 0.0) continue;
        s.corner[s.count] = static_cast<std::uint32_t>(idx);
        s.alpha[s.count] = w;
        ++s.count;
        total += w;
      }
      if (s.count == 0 || total < 1e-12)
        throw ResolutionError(fmt::format("surface node of particle {} has no fluid neighbor on the grid", p));
      for (int c = 0; c < s.count; ++c) s.alpha[c] /= total;
      s.normal = q.normals[n];
      s.weight = g_eps * q.weights[n];
      out.push_back(s);
    }
  }
  return out;
}

EnergyModel EnergyModel::micro(const VectorField& layout, const ParticleEnsemble& e, const MicroOptions& opt) {
  EnergyModel m;
  m.init_layout(layout);
  const ScalingParams& p = e.params;
  const double g_eps = p.g * std::pow(e.epsilon, p.gamma);
  m.negative_anchoring_ = p.g < 0.0;
  if (p.g != 0.0 && e.size() > 0)
    m.surface_ = build_surface_coupling(layout, e, g_eps, opt.surface_polar, opt.surface_azimuthal);
  if (opt.include_pair && e.size() > 1)
    m.magnetic_pair_ = ensemble_pair_energies(e, assumption_moment_density(e), opt.pair_quadrature).total;
  m.zeeman_ = -2.0 * zeeman_energy(e, p);
  return m;
}

EnergyModel EnergyModel::homogenized(const VectorField& layout, const MatrixField& A,
                                     const EffectiveMagnetization& M, const Vec3& h) {
  if (!(A.grid == layout.grid) || !(M.grid == layout.grid))
    throw ConfigError("homogenized energy: coefficient grids do not match the field grid");
  VectorField full = layout;
  for (auto& k : full.mask)
    if (k == NodeKind::Particle) k = NodeKind::Fluid;
  EnergyModel m;
  m.init_layout(full);
  m.a_weighted_.resize(m.grid_.size());
  double zeeman = 0.0;
  for (std::size_t i = 0; i < m.grid_.size(); ++i) {
    m.a_weighted_[i] = m.weights_[i] * A.values[i];
    zeeman += m.weights_[i] * h.dot(M.values[i]);
  }
  m.zeeman_ = -2.0 * zeeman;
  return m;
}

EnergyBreakdown EnergyModel::evaluate(const std::vector<Vec3>& u) const {
  EnergyBreakdown b;
  for_each_edge(grid_, mask_, w1d_, [&](std::size_t p, std::size_t q, double c) {
    b.bulk_gradient += c * (u[q] - u[p]).squaredNorm();
  });
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (weights_[i] == 0.0) continue;
    const double s = 1.0 - u[i].squaredNorm();
    b.bulk_potential += weights_[i] * s * s;
    if (!a_weighted_.empty()) b.surface += u[i].dot(a_weighted_[i] * u[i]);
  }
  for (const SurfaceEntry& s : surface_) {
    const double v = interpolate_dot(s, u);
    b.surface += s.weight * v * v;
  }
  b.magnetic_pair = magnetic_pair_;
  b.zeeman = zeeman_;
  b.total = b.sum_of_parts();
  return b;
}

EnergyBreakdown EnergyModel::evaluate(const std::vector<Vec3>& u, std::vector<Vec3>& grad) const {
  grad.assign(u.size(), Vec3::Zero());
  EnergyBreakdown b;
  for_each_edge(grid_, mask_, w1d_, [&](std::size_t p, std::size_t q, double c) {
    const Vec3 diff = u[q] - u[p];
    b.bulk_gradient += c * diff.squaredNorm();
    grad[p] -= 2.0 * c * diff;
    grad[q] += 2.0 * c * diff;
  });
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (weights_[i] == 0.0) continue;
    const double s = 1.0 - u[i].squaredNorm();
    b.bulk_potential += weights_[i] * s * s;
    grad[i] -= 4.0 * weights_[i] * s * u[i];
    if (!a_weighted_.empty()) {
      const Vec3 au = a_weighted_[i] * u[i];
      b.surface += u[i].dot(au);
      grad[i] += 2.0 * au;
    }
  }
  for (const SurfaceEntry& s : surface_) {
    const double v = interpolate_dot(s, u);
    b.surface += s.weight * v * v;
    const Vec3 dir = 2.0 * s.weight * v * s.normal;
    for (int c = 0; c < s.count; ++c) grad[s.corner[c]] += s.alpha[c] * dir;
  }
  for (std::size_t i = 0; i < u.size(); ++i)
    if (mask_[i] != NodeKind::Fluid) grad[i].setZero();
  b.magnetic_pair = magnetic_pair_;
  b.zeeman = zeeman_;
  b.total = b.sum_of_parts();
  return b;
}

double EnergyModel::quadratic_form(const std::vector<Vec3>& d) const {
  double q = 0.0;
  for_each_edge(grid_, mask_, w1d_, [&](std::size_t p, std::size_t r, double c) { q += c * (d[r] - d[p]).squaredNorm(); });
  if (!a_weighted_.empty())
    for (std::size_t i = 0; i < d.size(); ++i) q += d[i].dot(a_weighted_[i] * d[i]);
  for (const SurfaceEntry& s : surface_) {
    const double v = interpolate_dot(s, d);
    q += s.weight * v * v;
  }
  return q;
}

Quartic EnergyModel::line_polynomial(const std::vector<Vec3>& u, const std::vector<Vec3>& d, double e0,
                                     double slope) const {
  double c2 = quadratic_form(d), c3 = 0.0, c4 = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double w = weights_[i];
    if (w == 0.0) continue;
    const double a0 = 1.0 - u[i].squaredNorm();
    const double a1 = -2.0 * u[i].dot(d[i]);
    const double a2 = -d[i].squaredNorm();
    c2 += w * (a1 * a1 + 2.0 * a0 * a2);
    c3 += w * 2.0 * a1 * a2;
    c4 += w * a2 * a2;
  }
  return {e0, slope, c2, c3, c4};
}

BulkParts bulk_energy(const VectorField& f) {
  const EnergyBreakdown b = EnergyModel::bulk(f).evaluate(f.values);
  return {b.bulk_gradient, b.bulk_potential};
}

double surface_energy(const VectorField& f, const ParticleEnsemble& e, const ScalingParams& p,
                      const MicroOptions& opt) {
  const double g_eps = p.g * std::pow(e.epsilon, p.gamma);
  if (g_eps == 0.0 || e.size() == 0) return 0.0;
  double sum = 0.0;
  for (const SurfaceEntry& s : build_surface_coupling(f, e, g_eps, opt.surface_polar, opt.surface_azimuthal)) {
    const double v = interpolate_dot(s, f.values);
    sum += s.weight * v * v;
  }
  return sum;
}

EnergyBreakdown micro_energy(const VectorField& f, const ParticleEnsemble& e, const ScalingParams& p,
                             const MicroOptions& opt) {
  ParticleEnsemble copy = e;
  copy.params = p;
  return EnergyModel::micro(f, copy, opt).evaluate(f.values);
}

EnergyBreakdown homog_energy(const VectorField& f, const MatrixField& A, const EffectiveMagnetization& M,
                             const Vec3& h) {
  return EnergyModel::homogenized(f, A, M, h).evaluate(f.values);
}

VectorField gradient(const EnergyModel& model, const VectorField& f) {
  VectorField out = f;
  model.evaluate(f.values, out.values);
  return out;
}

double masked_l2_distance_sq(const VectorField& u, const VectorField& v) {
  if (!(u.grid == v.grid)) throw ConfigError("masked_l2_distance: grid mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u.mask[i] == NodeKind::Particle || v.mask[i] == NodeKind::Particle) continue;
    s += u.grid.weight(i) * (u.values[i] - v.values[i]).squaredNorm();
  }
  return s;
}

double h1_norm(const VectorField& f, bool masked) {
  VectorField layout = f;
  if (!masked)
    for (auto& k : layout.mask)
      if (k == NodeKind::Particle) k = NodeKind::Fluid;
  const EnergyModel m = EnergyModel::bulk(layout);
  const EnergyBreakdown b = m.evaluate(f.values);
  double l2 = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) l2 += m.node_weights()[i] * f.values[i].squaredNorm();
  return std::sqrt(b.bulk_gradient + l2);
}

}  // namespace ferronema
