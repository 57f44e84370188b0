#include "ferronema/effective.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "ferronema/errors.hpp"

namespace ferronema {

namespace {

void check_mollifier(const ParticleEnsemble& e, double eta, const Grid& grid) {
  if (eta < grid.max_spacing())
    throw ResolutionError(fmt::format("mollifier width {} is below the grid spacing {}", eta, grid.max_spacing()));
  if (eta < 2.0 * e.epsilon)
    throw ConfigError(fmt::format("mollifier width {} must be at least 2 eps = {}", eta, 2.0 * e.epsilon));
}

// Calls f(node, particle) for every node whose half-open box
// [x - eta/2, x + eta/2) contains the particle center, in particle order.
template <class F>
void for_each_covered_node(const ParticleEnsemble& e, double eta, const Grid& grid, F&& f) {
  const Vec3 h = grid.spacing();
  for (std::size_t p = 0; p < e.size(); ++p) {
    const Vec3& c = e.particles[p].center;
    int lo[3], hi[3];
    for (int k = 0; k < 3; ++k) {
      // x in (c - eta/2, c + eta/2]
      const double t0 = (c[k] - 0.5 * eta - grid.box.lo[k]) / h[k];
      const double t1 = (c[k] + 0.5 * eta - grid.box.lo[k]) / h[k];
      lo[k] = std::max(0, static_cast<int>(std::floor(t0)) - 1);
      hi[k] = std::min(grid.n[k] - 1, static_cast<int>(std::ceil(t1)) + 1);
    }
    for (int kk = lo[2]; kk <= hi[2]; ++kk)
      for (int jj = lo[1]; jj <= hi[1]; ++jj)
        for (int ii = lo[0]; ii <= hi[0]; ++ii) {
          const Vec3 x = grid.position(ii, jj, kk);
          bool inside = true;
          for (int k = 0; k < 3 && inside; ++k)
            inside = c[k] >= x[k] - 0.5 * eta && c[k] < x[k] + 0.5 * eta;
          if (inside) f(grid.index(ii, jj, kk), p);
        }
  }
}

}  // namespace

MatrixField assemble_A_eps(const ParticleEnsemble& e, const ScalingParams& p, double eta,
                           const Grid& grid) {
  check_mollifier(e, eta, grid);
  const AnchoringEigenvalues lam = anchoring_eigenvalues(e.reference);
  const Mat3 t = Vec3(lam.transverse, lam.transverse, lam.axial).asDiagonal();
  const double scale = std::pow(e.epsilon, 3.0) * p.g / (eta * eta * eta);
  std::vector<Mat3> per_particle(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    const Mat3& r = e.particles[i].rotation.matrix();
    per_particle[i] = scale * r * t * r.transpose();
  }
  MatrixField out{grid, std::vector<Mat3>(grid.size(), Mat3::Zero())};
  for_each_covered_node(e, eta, grid, [&](std::size_t node, std::size_t i) { out.values[node] += per_particle[i]; });
  return out;
}

EffectiveMagnetization assemble_M_eps(const ParticleEnsemble& e, const ScalingParams& p, double eta,
                                      const Grid& grid) {
  check_mollifier(e, eta, grid);
  const double vol = e.reference.volume();
  const double scale = std::pow(e.epsilon, 3.0) * p.m * vol * vol / (eta * eta * eta);
  EffectiveMagnetization out{grid, std::vector<Vec3>(grid.size(), Vec3::Zero())};
  for_each_covered_node(e, eta, grid, [&](std::size_t node, std::size_t i) {
    out.values[node] += scale * e.particles[i].rotation.axis();
  });
  return out;
}

MatrixField closed_form_A(const RotationField& field, double g, double lambda1, double lambda2,
                          const Grid& grid) {
  const Mat3 t = Vec3(lambda2, lambda2, lambda1).asDiagonal();
  MatrixField out{grid, std::vector<Mat3>(grid.size())};
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const Mat3& r = field(grid.position(idx)).matrix();
    out.values[idx] = g * r * t * r.transpose();
  }
  return out;
}

EffectiveMagnetization closed_form_M(const RotationField& field, double amplitude, const Grid& grid) {
  EffectiveMagnetization out{grid, std::vector<Vec3>(grid.size())};
  for (std::size_t idx = 0; idx < grid.size(); ++idx)
    out.values[idx] = amplitude * field(grid.position(idx)).axis();
  return out;
}

double coupling_density(const Vec3& u, const Vec3& M, const Vec3& h, double g, double m,
                        double lambda1, double lambda2) {
  if (m == 0.0) throw DomainError("coupling_density: magnetization amplitude m is zero");
  const double m2 = m * m;
  const double big_lambda = g * (lambda1 - lambda2) / m2;
  const double um = M.dot(u);
  return big_lambda * um * um + g * lambda2 / m2 * u.squaredNorm() - 2.0 * h.dot(M);
}

std::vector<double> burylov_density(const Grid& grid, const std::vector<Vec3>& n, const Vec3& m_unit,
                                    const Vec3& H, const BurylovCoefficients& c) {
  if (n.size() != grid.size()) throw ConfigError("burylov_density: field size does not match grid");
  if (!(c.f > 0.0)) throw DomainError("burylov_density: volume fraction f must be positive (log f)");
  for (const Vec3& v : n)
    if (std::abs(v.norm() - 1.0) > 1e-6) throw ConfigError("burylov_density: director field is not unit");
  const Vec3 h = grid.spacing();
  // d n / d x_axis at (i,j,k)
  auto partial = [&](int axis, int i, int j, int k) -> Vec3 {
    std::array<int, 3> p{i, j, k};
    const int last = grid.n[axis] - 1;
    auto at = [&](int offset) {
      std::array<int, 3> q = p;
      q[axis] += offset;
      return n[grid.index(q[0], q[1], q[2])];
    };
    if (p[axis] == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h[axis]);
    if (p[axis] == last) return (3.0 * at(0) - 4.0 * at(-1) + at(-2)) / (2.0 * h[axis]);
    return (at(1) - at(-1)) / (2.0 * h[axis]);
  };
  const double entropy = c.f * c.kT_over_nu * std::log(c.f);
  std::vector<double> out(grid.size());
  for (int k = 0; k < grid.n[2]; ++k)
    for (int j = 0; j < grid.n[1]; ++j)
      for (int i = 0; i < grid.n[0]; ++i) {
        const Vec3 dx = partial(0, i, j, k), dy = partial(1, i, j, k), dz = partial(2, i, j, k);
        const double div = dx.x() + dy.y() + dz.z();
        const Vec3 curl(dy.z() - dz.y(), dz.x() - dx.z(), dx.y() - dy.x());
        const Vec3& v = n[grid.index(i, j, k)];
        const double twist = curl.dot(v);
        const double bend = v.cross(curl).squaredNorm();
        const double nh = v.dot(H), nm = v.dot(m_unit);
        out[grid.index(i, j, k)] = 0.5 * (c.K1 * div * div + c.K2 * twist * twist + c.K3 * bend) -
                                   0.5 * c.chi_a * nh * nh - c.Ms * c.f * m_unit.dot(H) + entropy +
                                   c.A_anch * c.Ws * c.f / c.dp * nm * nm;
      }
  return out;
}

namespace {

bool interior(const Grid& g, std::size_t idx, double margin) {
  const Vec3 x = g.position(idx);
  return ((x - g.box.lo).array() >= margin - 1e-12).all() && ((g.box.hi - x).array() >= margin - 1e-12).all();
}

}  // namespace

double max_interior_deviation(const MatrixField& x, const MatrixField& y, double margin) {
  if (!(x.grid == y.grid)) throw ConfigError("max_interior_deviation: grid mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < x.values.size(); ++i)
    if (interior(x.grid, i, margin)) worst = std::max(worst, (x.values[i] - y.values[i]).norm());
  return worst;
}

double max_interior_deviation(const EffectiveMagnetization& x, const EffectiveMagnetization& y,
                              double margin) {
  if (!(x.grid == y.grid)) throw ConfigError("max_interior_deviation: grid mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < x.values.size(); ++i)
    if (interior(x.grid, i, margin)) worst = std::max(worst, (x.values[i] - y.values[i]).norm());
  return worst;
}

}  // namespace ferronema
